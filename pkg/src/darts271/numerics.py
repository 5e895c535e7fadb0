"""Numerical kernels: least squares, 1-D regression, logistic fitting, and a
counter-based random source.

The random source is deliberately counter-based (SplitMix64-style mixing of a
key plus a draw index) so that Monte Carlo replicas can each be handed an
independent substream keyed by replica index. Replica results then do not
depend on evaluation order, and the vectorized simulation engine can compute
the i-th replica's j-th uniform directly without sequential state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)  # SplitMix64 increment
STREAM_GAMMA = np.uint64(0xD1342543DE82EF95)  # substream increment, decoupled from draws
_M64 = 0xFFFFFFFFFFFFFFFF


class NumericsError(Exception):
    pass


class EmptySystem(NumericsError):
    pass


class DegenerateInput(NumericsError):
    pass


class InvalidWeights(NumericsError):
    pass


class NonConvergence(NumericsError):
    def __init__(self, iterations: int, grad_norm: float):
        super().__init__(
            f"logistic fit did not reach tolerance after {iterations} iterations "
            f"(gradient norm {grad_norm:.3e})"
        )
        self.iterations = iterations
        self.grad_norm = grad_norm


def _mix64(z: np.ndarray) -> np.ndarray:
    # Stafford variant 13 finalizer; modular uint64 arithmetic, vectorized.
    z = np.asarray(z, dtype=np.uint64).copy()
    z ^= z >> np.uint64(30)
    z *= np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z *= np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z


def _mix64_int(z: int) -> int:
    # Same finalizer on plain Python ints; bit-identical to the array path.
    z &= _M64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _M64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _M64
    z ^= z >> 31
    return z


def _key_for(seed: int, stream: int) -> np.uint64:
    s = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    t = np.uint64(stream & 0xFFFFFFFFFFFFFFFF)
    base = np.array([s], dtype=np.uint64) * GOLDEN + np.uint64(1)
    mixed = _mix64(base) + np.array([t], dtype=np.uint64) * STREAM_GAMMA
    return _mix64(mixed)[0]


def uniforms_from_counters(key: np.uint64, counters: np.ndarray) -> np.ndarray:
    """Uniforms in [0, 1) for arbitrary draw indices of the stream ``key``."""
    z = _mix64(key + (counters.astype(np.uint64) + np.uint64(1)) * GOLDEN)
    return (z >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def uniforms_grid(keys: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """Uniforms for many streams at once: shape keys.shape + counters.shape.

    Entry [i, j] equals the counters[j]-th draw of the stream keys[i], i.e.
    exactly what a sequential RandomSource with that key would produce.
    """
    keys = np.asarray(keys, dtype=np.uint64)
    counters = np.asarray(counters, dtype=np.uint64)
    z = _mix64(
        keys.reshape(keys.shape + (1,) * counters.ndim)
        + (counters + np.uint64(1)) * GOLDEN
    )
    return (z >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def substream_keys(key: np.uint64, n: int, offset: int = 0) -> np.ndarray:
    """Keys of substreams ``offset .. offset+n-1`` of the stream ``key``."""
    idx = np.arange(offset, offset + n, dtype=np.uint64)
    return _mix64(key + (idx + np.uint64(1)) * STREAM_GAMMA)


class RandomSource:
    """Seeded, stream-splittable uniform source.

    Identical (seed, stream) pairs produce identical draw sequences; the n-th
    uniform is a pure function of (seed, stream, n).
    """

    __slots__ = ("seed", "stream", "_key", "_count")

    def __init__(self, seed: int, stream: int = 0, _key: np.uint64 | None = None):
        self.seed = seed
        self.stream = stream
        self._key = _key_for(seed, stream) if _key is None else _key
        self._count = 0

    @property
    def key(self) -> np.uint64:
        return self._key

    def substream(self, index: int) -> "RandomSource":
        """An independent child stream; used to key Monte Carlo replicas."""
        child = RandomSource.__new__(RandomSource)
        child.seed = self.seed
        child.stream = index
        child._key = substream_keys(self._key, 1, offset=index)[0]
        child._count = 0
        return child

    def next_float(self) -> float:
        z = _mix64_int(int(self._key) + (self._count + 1) * 0x9E3779B97F4A7C15)
        self._count += 1
        return (z >> 11) * (2.0 ** -53)

    def next_floats(self, n: int) -> np.ndarray:
        counters = np.arange(self._count, self._count + n, dtype=np.uint64)
        self._count += n
        return uniforms_from_counters(self._key, counters)


def sample_categorical(source: RandomSource, weights: Sequence[float]) -> int:
    """Index i with probability weights[i]; weights must sum to 1 within 1e-9."""
    w = [float(x) for x in weights]
    if not w or any(x < 0 for x in w) or abs(sum(w) - 1.0) > 1e-9:
        raise InvalidWeights(f"not a probability vector: {weights!r}")
    u = source.next_float()
    acc = 0.0
    for index, x in enumerate(w):
        acc += x
        if u < acc:
            return index
    return len(w) - 1  # u fell into the float gap below the forced total of 1


@dataclass
class LinearSystem:
    """Sparse rows (index -> coefficient) with right-hand sides."""

    rows: list[tuple[dict[int, float], float]]
    n_unknowns: int

    def add(self, coefficients: Mapping[int, float], rhs: float) -> None:
        for idx in coefficients:
            if not 0 <= idx < self.n_unknowns:
                raise NumericsError(f"coefficient index {idx} out of range")
        self.rows.append((dict(coefficients), float(rhs)))

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        X = np.zeros((len(self.rows), self.n_unknowns))
        y = np.zeros(len(self.rows))
        for r, (coeffs, rhs) in enumerate(self.rows):
            for idx, c in coeffs.items():
                X[r, idx] = c
            y[r] = rhs
        return X, y


def least_squares_min_norm(system: LinearSystem) -> np.ndarray:
    """Minimum-Euclidean-norm minimizer of ||Xr - y||.

    Minimum-norm solutions are orthogonal to the kernel of X, so systems whose
    kernel contains the all-ones vector come back with a zero coordinate sum
    without any explicit constraint row.
    """
    if system.n_unknowns < 1 or not system.rows:
        raise EmptySystem("system has no rows or no unknowns")
    X, y = system.dense()
    solution, *_ = np.linalg.lstsq(X, y, rcond=None)
    return solution


def linear_regression_1d(points: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Ordinary least-squares line through (t, y) points -> (slope, intercept)."""
    if len(points) < 2:
        raise DegenerateInput("need at least 2 points")
    t = np.array([p[0] for p in points], dtype=np.float64)
    y = np.array([p[1] for p in points], dtype=np.float64)
    t_centered = t - t.mean()
    denom = float(t_centered @ t_centered)
    if denom == 0.0:
        raise DegenerateInput("all t values are equal")
    slope = float(t_centered @ (y - y.mean())) / denom
    intercept = float(y.mean() - slope * t.mean())
    return slope, intercept


def densify(
    observations: Sequence[tuple[Mapping[int, float], int]], n_features: int
) -> tuple[np.ndarray, np.ndarray]:
    X = np.zeros((len(observations), n_features))
    y = np.zeros(len(observations))
    for r, (features, label) in enumerate(observations):
        for idx, value in features.items():
            X[r, idx] = value
        y[r] = label
    return X, y


def logistic_objective(
    X: np.ndarray, y: np.ndarray, w: np.ndarray, l2: float
) -> tuple[float, np.ndarray]:
    """Per-observation negative penalized log-likelihood and its gradient.

    The 1/n scaling leaves the optimum unchanged but keeps the objective and
    gradient on an O(1) scale, so the convergence tolerance is meaningful for
    any dataset size.
    """
    n = len(y)
    z = X @ w
    # log(1 + e^z) computed stably for both signs of z
    log1pexp = np.where(z > 0, z + np.log1p(np.exp(-np.abs(z))), np.log1p(np.exp(z)))
    nll = (float(np.sum(log1pexp - y * z)) + 0.5 * l2 * float(w @ w)) / n
    p = 1.0 / (1.0 + np.exp(-z))
    grad = (X.T @ (p - y) + l2 * w) / n
    return nll, grad


def fit_logistic(
    observations: Sequence[tuple[Mapping[int, float], int]],
    l2: float = 1e-3,
    n_features: int | None = None,
    tol: float = 1e-8,
    max_iter: int = 500,
    history: list | None = None,
) -> np.ndarray:
    """Maximize the L2-penalized Bernoulli log-likelihood with a logistic link.

    Damped Newton iteration from a zero start; deterministic. The penalty is
    0.5 * l2 * ||w||^2 against the total log-likelihood, so any l2 > 0 keeps
    quasi-separated data bounded. Convergence is declared at per-observation
    gradient max-norm <= tol. When ``history`` is supplied, the objective
    value is appended for every accepted iterate (it never increases beyond
    float roundoff thanks to the backtracking line search).
    """
    if not observations:
        raise NumericsError("no observations")
    if l2 < 0:
        raise NumericsError("l2 must be >= 0")
    if n_features is None:
        n_features = 1 + max(max(f, default=-1) for f, _ in observations)
    if n_features <= 0:
        return np.zeros(0)
    X, y = densify(observations, n_features)
    n = len(y)

    w = np.zeros(n_features)
    nll, grad = logistic_objective(X, y, w, l2)
    if history is not None:
        history.append(nll)
    for _ in range(max_iter):
        if np.max(np.abs(grad)) <= tol:
            return w
        z = X @ w
        p = 1.0 / (1.0 + np.exp(-z))
        curvature = p * (1.0 - p)
        H = (X.T @ (curvature[:, None] * X) + l2 * np.eye(n_features)) / n
        # Levenberg damping keeps the step well-posed when curvature collapses
        step = np.linalg.solve(H + 1e-12 * np.eye(n_features), -grad)
        # Backtracking line search: accept any non-increase (up to roundoff)
        slack = 1e-12 * (1.0 + abs(nll))
        scale = 1.0
        for _ in range(60):
            w_new = w + scale * step
            nll_new, grad_new = logistic_objective(X, y, w_new, l2)
            if nll_new <= nll + slack:
                break
            scale *= 0.5
        else:
            break
        w, nll, grad = w_new, nll_new, grad_new
        if history is not None:
            history.append(nll)
    grad_norm = float(np.max(np.abs(grad)))
    if grad_norm <= tol:
        return w
    raise NonConvergence(max_iter, grad_norm)
