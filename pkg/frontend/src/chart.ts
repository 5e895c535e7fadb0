// By-round probability chart: one polyline per model over the game history.
// Every y value is a service-reported probability; this module only maps
// numbers to pixels.

import type { HistoryEntry } from "./api.js";

const WIDTH = 560;
const HEIGHT = 240;
const PAD = 28;

export const MODEL_COLORS: Record<string, string> = {
  null: "#888888",
  logistic: "#c0392b",
  basic_sim: "#2980b9",
  adjusted_sim: "#27ae60",
  sdmm: "#8e44ad",
};

const SVG_NS = "http://www.w3.org/2000/svg";

function svgElement(tag: string, attrs: Record<string, string>): SVGElement {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, value);
  }
  return el;
}

export function renderProbabilityChart(
  history: HistoryEntry[],
  p1: string,
): SVGElement {
  const svg = svgElement("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    id: "probability-chart",
    role: "img",
    "aria-label": `win probability for ${p1} by round`,
  });

  // fixed [0, 1] axis with a midline
  for (const p of [0, 0.5, 1]) {
    const y = PAD + (1 - p) * (HEIGHT - 2 * PAD);
    svg.appendChild(
      svgElement("line", {
        x1: String(PAD),
        x2: String(WIDTH - PAD),
        y1: String(y),
        y2: String(y),
        class: "grid-line",
        stroke: "#dddddd",
      }),
    );
    const label = svgElement("text", {
      x: "2",
      y: String(y + 4),
      class: "axis-label",
      "font-size": "11",
    });
    label.textContent = p.toFixed(1);
    svg.appendChild(label);
  }

  if (history.length === 0) {
    return svg;
  }
  const models = Object.keys(history[0].probabilities).sort();
  const span = Math.max(history.length - 1, 1);
  for (const model of models) {
    const points = history
      .map((entry, index) => {
        const x = PAD + (index / span) * (WIDTH - 2 * PAD);
        const y = PAD + (1 - entry.probabilities[model]) * (HEIGHT - 2 * PAD);
        return `${x.toFixed(2)},${y.toFixed(2)}`;
      })
      .join(" ");
    svg.appendChild(
      svgElement("polyline", {
        points,
        fill: "none",
        "stroke-width": "2",
        stroke: MODEL_COLORS[model] ?? "#333333",
        "data-model": model,
        class: "model-line",
      }),
    );
  }
  return svg;
}
