"""Distribution functions, decreasing rearrangements and maximal averages of
functions given by weighted samples."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SampledFunction",
    "QuantileFunction",
    "distribution",
    "rearrange",
    "maximal_average",
    "median",
    "gradient_integral_above",
    "step_rearrangement",
    "lebesgue_rearrangement",
]

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class SampledFunction:
    """A function on a probability space, known through weighted atoms.

    ``values[i] = f(x_i)``, ``grads[i] = |grad f|(x_i)`` and ``weights[i]``
    is the mass of the atom.  Weights must be positive and sum to one.
    """

    values: np.ndarray
    grads: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=float).ravel()
        g = np.ascontiguousarray(self.grads, dtype=float).ravel()
        w = np.ascontiguousarray(self.weights, dtype=float).ravel()
        if not (v.size == g.size == w.size) or v.size == 0:
            raise ValueError("values, grads and weights must be non-empty and of equal length")
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(g)) and np.all(np.isfinite(w))):
            raise ValueError("sampled function contains non-finite entries")
        if np.any(g < 0):
            raise ValueError("gradient moduli must be non-negative")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        if abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights must sum to 1 (got {w.sum()!r})")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "grads", g)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, values, grads) -> "SampledFunction":
        values = np.asarray(values, dtype=float).ravel()
        return cls(values, grads, np.full(values.size, 1.0 / values.size))

    @classmethod
    def normalized(cls, values, grads, weights) -> "SampledFunction":
        """Build from unnormalized positive weights; zero-weight atoms are dropped."""
        w = np.asarray(weights, dtype=float).ravel()
        keep = w > 0
        w = w[keep]
        return cls(np.asarray(values, dtype=float).ravel()[keep],
                   np.asarray(grads, dtype=float).ravel()[keep], w / w.sum())

    def __len__(self):
        return self.values.size

    def scaled(self, c: float) -> "SampledFunction":
        """``c * f``; gradients scale by ``|c|``."""
        return SampledFunction(c * self.values, abs(c) * self.grads, self.weights)

    def shifted(self, c: float) -> "SampledFunction":
        """``f + c``; gradients are unchanged."""
        return SampledFunction(self.values + c, self.grads, self.weights)

    def mean(self) -> float:
        return float(np.dot(self.weights, self.values))

    @property
    def scale(self) -> float:
        """Magnitude used to set absolute tolerances."""
        return float(np.max(np.abs(self.values)) + np.max(self.grads))

    def gradient_function(self) -> "SampledFunction":
        """``|grad f|`` as a sampled function in its own right."""
        return SampledFunction(self.grads, np.zeros_like(self.grads), self.weights)


@dataclass(frozen=True)
class QuantileFunction:
    """Non-increasing, non-negative step function on (0, 1].

    ``breaks = [0, s_1, ..., s_m]`` and ``values = [v_1, ..., v_m]`` with
    value ``v_j`` on ``[s_{j-1}, s_j)``.  Beyond ``s_m`` the function is 0;
    ``s_m`` is normally 1 (up to the rounding of the source weights).
    """

    breaks: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.breaks, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if b.ndim != 1 or v.ndim != 1 or b.size != v.size + 1:
            raise ValueError("need len(breaks) == len(values) + 1")
        if b[0] != 0.0 or np.any(np.diff(b) <= 0):
            raise ValueError("breaks must start at 0 and increase strictly")
        if np.any(v < 0) or np.any(np.diff(v) > 0):
            raise ValueError("values must be non-negative and non-increasing")
        object.__setattr__(self, "breaks", b)
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, c: float = 1.0, support: float = 1.0) -> "QuantileFunction":
        """``c`` on ``(0, support)``, zero afterwards."""
        if support >= 1.0:
            return cls(np.array([0.0, 1.0]), np.array([float(c)]))
        return cls(np.array([0.0, support, 1.0]), np.array([float(c), 0.0]))

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.breaks)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        idx = np.searchsorted(self.breaks[1:], s, side="right")
        vals = np.append(self.values, 0.0)
        out = vals[np.minimum(idx, self.values.size)]
        # lambda_f(0) <= 1 always, so f*(1) = 0 whatever the rounding of s_m
        out = np.where(s >= 1.0, 0.0, out)
        return float(out) if out.ndim == 0 else out

    def cumulative(self) -> np.ndarray:
        """``int_0^{s_j}`` at every break."""
        return np.concatenate([[0.0], np.cumsum(self.values * self.lengths)])

    def integral(self, t):
        """``int_0^t`` of the step function, exact."""
        t = np.asarray(t, dtype=float)
        cum = self.cumulative()
        idx = np.clip(np.searchsorted(self.breaks, t, side="right") - 1, 0, self.values.size)
        vals = np.append(self.values, 0.0)
        start = np.append(self.breaks[:-1], self.breaks[-1])
        out = cum[idx] + vals[idx] * (np.minimum(t, self.breaks[-1]) - start[idx])
        out = np.where(t >= self.breaks[-1], cum[-1], out)
        return float(out) if out.ndim == 0 else out

    def total(self) -> float:
        return float(self.cumulative()[-1])

    def maximal_average(self, t):
        return maximal_average(self, t)

    def scaled(self, c: float) -> "QuantileFunction":
        if c < 0:
            raise ValueError("scale factor must be non-negative")
        if c == 0:
            return QuantileFunction(np.array([0.0, 1.0]), np.array([0.0]))
        return QuantileFunction(self.breaks, c * self.values)


def distribution(f: SampledFunction, t):
    """``lambda_f(t) = mu{|f| > t}``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("distribution function is defined for t >= 0")
    a = np.abs(f.values)
    order = np.argsort(a)
    a_sorted = a[order]
    # mass strictly above each threshold, summed from the top
    tail = np.concatenate([np.cumsum(f.weights[order][::-1])[::-1], [0.0]])
    idx = np.searchsorted(a_sorted, t, side="right")
    out = tail[idx]
    return float(out) if out.ndim == 0 else out


def _grouped_descending(values: np.ndarray, weights: np.ndarray, extra=None):
    """Sort ``values`` descending and merge ties; returns distinct levels,
    summed weights and (optionally) summed ``extra`` per level."""
    order = np.argsort(-values, kind="stable")
    v = values[order]
    w = weights[order]
    starts = np.flatnonzero(np.concatenate([[True], v[1:] != v[:-1]]))
    levels = v[starts]
    wsum = np.add.reduceat(w, starts)
    if extra is None:
        return levels, wsum, None
    return levels, wsum, np.add.reduceat(extra[order], starts)


def step_rearrangement(values, weights) -> QuantileFunction:
    """Decreasing rearrangement of ``|values|`` under the atomic measure
    ``weights`` (which need not sum exactly to one)."""
    values = np.abs(np.asarray(values, dtype=float).ravel())
    weights = np.asarray(weights, dtype=float).ravel()
    levels, wsum, _ = _grouped_descending(values, weights)
    breaks = np.concatenate([[0.0], np.cumsum(wsum)])
    # pieces lighter than the rounding of the running sum have zero length
    keep = np.diff(breaks) > 0
    if not np.all(keep):
        levels = levels[keep]
        breaks = np.concatenate([[0.0], breaks[1:][keep]])
    return QuantileFunction(breaks, levels)


def rearrange(f: SampledFunction) -> QuantileFunction:
    """``f*(s) = inf{t >= 0 : lambda_f(t) <= s}`` as a step function.

    Atoms with equal ``|f|`` are merged into a single step.
    """
    return step_rearrangement(f.values, f.weights)


def maximal_average(q: QuantileFunction, t):
    """``f**(t) = (1/t) int_0^t f*``."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("maximal average requires t > 0")
    out = q.integral(t) / t
    return float(out) if np.ndim(out) == 0 else out


def median(f: SampledFunction) -> float:
    """Smallest attained ``m`` with ``mu(f >= m) >= 1/2`` and ``mu(f <= m) >= 1/2``."""
    order = np.argsort(f.values, kind="stable")
    v = f.values[order]
    w = f.weights[order]
    total = w.sum()
    cum = np.cumsum(w)
    starts = np.flatnonzero(np.concatenate([[True], v[1:] != v[:-1]]))
    ends = np.concatenate([starts[1:], [v.size]]) - 1
    le = cum[ends]                                  # mu(f <= level)
    ge = total - np.concatenate([[0.0], cum])[starts]  # mu(f >= level)
    ok = (le >= 0.5 * total) & (ge >= 0.5 * total)
    return float(v[starts[np.argmax(ok)]])


def gradient_integral_above(f: SampledFunction, level):
    """``int_{|f| > level} |grad f| dmu``; negative levels act like 0."""
    level = np.maximum(np.asarray(level, dtype=float), 0.0)
    a = np.abs(f.values)
    order = np.argsort(a)
    mass = f.weights[order] * f.grads[order]
    tail = np.concatenate([np.cumsum(mass[::-1])[::-1], [0.0]])
    idx = np.searchsorted(a[order], level, side="right")
    out = tail[idx]
    return float(out) if out.ndim == 0 else out


def lebesgue_rearrangement(func, edges, order: int = 4) -> QuantileFunction:
    """Decreasing rearrangement of ``|func|`` on (0, 1) w.r.t. Lebesgue measure.

    ``func`` is sampled at ``order`` Gauss-Legendre nodes in every cell of
    ``edges``; each node carries its quadrature weight as mass, so integrals
    of ``F(func)`` against the result reproduce the Gauss-Legendre rule.
    The part of (0, 1) not covered by ``edges`` is treated as a zero.
    """
    edges = np.unique(np.clip(np.asarray(edges, dtype=float), 0.0, 1.0))
    x, w = np.polynomial.legendre.leggauss(order)
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b))[:, None] + half[:, None] * x[None, :]
    masses = half[:, None] * w[None, :]
    vals = np.abs(np.asarray(func(nodes.ravel()), dtype=float))
    masses = masses.ravel()
    uncovered = 1.0 - (edges[-1] - edges[0])
    if uncovered > 0:
        vals = np.append(vals, 0.0)
        masses = np.append(masses, uncovered)
    return step_rearrangement(vals, masses)
