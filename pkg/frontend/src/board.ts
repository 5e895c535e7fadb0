// Client-side mirror of the board-legal throw values, used only to flag typos
// before a request goes out. The server remains authoritative.

function legalScores(): Set<number> {
  const values = new Set<number>([0, 25, 50]);
  for (let sector = 1; sector <= 20; sector++) {
    values.add(sector);
    values.add(2 * sector);
    values.add(3 * sector);
  }
  return values;
}

export const VALID_SCORES = legalScores();

export function isLegalScore(value: number): boolean {
  return Number.isInteger(value) && VALID_SCORES.has(value);
}

/** Indices (0..5: p1 throws then p2 throws) holding illegal values. */
export function illegalPositions(values: number[]): number[] {
  const bad: number[] = [];
  values.forEach((value, index) => {
    if (!isLegalScore(value)) {
      bad.push(index);
    }
  });
  return bad;
}
