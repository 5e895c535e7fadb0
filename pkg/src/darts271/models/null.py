"""Score-difference baseline: ignores who is playing entirely."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class NullModel:
    """P(p1 wins) = 1/2 * (1 + (s1 - s2) / divisor), truncated to [0, 1].

    With the default divisor of 100, each point of lead is worth half a
    percentage point. A divisor of 85 gives the variant whose marginal effect
    per point matches the fitted score-dependent ratings.
    """

    divisor: float = 100.0
    name: str = "null"

    def __post_init__(self):
        if self.divisor <= 0:
            raise ValueError("divisor must be positive")

    def predict(self, p1: str, p2: str, s1: float, s2: float) -> float:
        raw = 0.5 * (1.0 + (s1 - s2) / self.divisor)
        return min(1.0, max(0.0, raw))
