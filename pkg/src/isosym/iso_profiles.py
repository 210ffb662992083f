"""Profile-weighted integrals on (0, 1):

    kernel:  t -> int_t^1 f(s) ds / I(s)
    Q_I f(t) = (I(t)/t) * int_t^1 f(s) ds / I(s)

``1/I`` is not integrable at either endpoint for the ``mu_r`` profiles, so
every evaluation point must satisfy ``0 < t < 1`` and the result is
``inf`` whenever ``f`` stays positive up to ``s = 1``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .model_measures import IsoProfile, profile_grid
from .rearrangement import QuantileFunction
from .ri_norms import RINormSpec, norm, weighted_rearrangement

__all__ = [
    "ProfileWeightedOperator",
    "kernel_integral",
    "q_operator",
    "estimate_operator_norm",
    "power_tester",
    "power_testers",
    "maximal_function_ratio",
    "function_norm",
]


@dataclass
class ProfileWeightedOperator:
    """The profile ``I`` together with the grids used to evaluate ``Q_I``.

    ``tmin`` bounds the grid used for norms (endpoint-refined, so the
    singular behaviour at 0 is resolved); ``scan_tmin`` bounds the grid for
    pointwise scans and CSV export.
    """

    profile: IsoProfile
    grid: int = 4096
    tmin: float = 1e-12
    scan_tmin: float = 1e-6

    def scan_grid(self) -> np.ndarray:
        return profile_grid(self.grid, self.scan_tmin)


def _piece_integrals(profile: IsoProfile, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``int_a^b ds / I(s)`` for arrays of intervals inside [0, 1]."""
    out = np.zeros(a.shape, dtype=float)
    nonempty = b > a
    if not np.any(nonempty):
        return out
    P = profile.reciprocal_primitive
    if P is not None:
        lo, hi = a[nonempty], b[nonempty]
        with np.errstate(invalid="ignore"):
            out[nonempty] = _primitive(P, hi) - _primitive(P, lo)
        return out
    for i in np.flatnonzero(nonempty):
        out[i] = _quad_reciprocal(profile, a[i], b[i])
    return out


def _primitive(P, x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    lo, hi = x <= 0.0, x >= 1.0
    out[lo] = -np.inf
    out[hi] = np.inf
    mid = ~(lo | hi)
    if np.any(mid):
        out[mid] = P(x[mid])
    return out


def _quad_reciprocal(profile: IsoProfile, a: float, b: float) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(lambda s: 1.0 / profile(s), a, b,
                                      epsabs=0.0, epsrel=1e-10, limit=400)
        except (integrate.IntegrationWarning, ZeroDivisionError):
            return math.inf
    return val if math.isfinite(val) else math.inf


def kernel_integral(op: ProfileWeightedOperator, f: QuantileFunction, t):
    """``int_t^1 f(s) ds / I(s)`` for ``t`` in (0, 1) (scalar or array)."""
    t = np.asarray(t, dtype=float)
    if np.any(~((t > 0.0) & (t < 1.0))):
        raise ValueError("kernel integral requires 0 < t < 1")
    if np.any(f.values < 0):
        raise ValueError("kernel integral requires a non-negative function")
    b = np.minimum(f.breaks, 1.0)
    v = f.values
    # right tails R_j = int_{b_j}^1 f / I, from the last break backwards
    piece = np.zeros(v.size)
    pos = v > 0
    piece[pos] = v[pos] * _piece_integrals(op.profile, b[:-1][pos], b[1:][pos])
    with np.errstate(invalid="ignore"):
        right = np.concatenate([np.cumsum(piece[::-1])[::-1], [0.0]])
    flat = np.atleast_1d(t)
    idx = np.searchsorted(b, flat, side="right") - 1     # piece containing t
    out = np.empty_like(flat)
    inside = idx < v.size
    j = idx[inside]
    partial = np.zeros(j.size)
    vj = v[j]
    active = vj > 0
    if np.any(active):
        partial[active] = vj[active] * _piece_integrals(
            op.profile, flat[inside][active], b[j + 1][active])
    out[inside] = right[j + 1] + partial
    out[~inside] = 0.0
    return float(out[0]) if t.ndim == 0 else out.reshape(t.shape)


def q_operator(op: ProfileWeightedOperator, f: QuantileFunction, t):
    """``Q_I f(t) = (I(t)/t) * int_t^1 f(s) ds / I(s)``."""
    k = kernel_integral(op, f, t)
    t = np.asarray(t, dtype=float)
    with np.errstate(invalid="ignore"):
        out = np.where(k == 0.0, 0.0, op.profile(t) / t * k)
    return float(out) if out.ndim == 0 else out


def function_norm(op: ProfileWeightedOperator, space: RINormSpec, func, breaks) -> float:
    """``||func||`` on (0, 1) (Lebesgue rearrangement on the operator grid)."""
    star = weighted_rearrangement(func, breaks, grid=op.grid, tmin=op.tmin)
    if not np.all(np.isfinite(star.values)):
        return math.inf
    return norm(space, star)


def estimate_operator_norm(op: ProfileWeightedOperator, space: RINormSpec,
                           testers) -> float:
    """Lower bound ``max_f ||Q_I f||_X / ||f||_X`` over the tester family.

    Only a lower bound on the operator norm: the supremum is taken over the
    supplied testers and nothing else.
    """
    best = None
    for f in testers:
        if np.any(f.values < 0) or np.any(np.diff(f.values) > 0):
            raise ValueError("testers must be non-negative and non-increasing")
        denom = norm(space, f)
        if denom == 0.0:
            continue
        num = function_norm(op, space, lambda t, f=f: q_operator(op, f, t), f.breaks)
        ratio = num / denom
        best = ratio if best is None else max(best, ratio)
    if best is None:
        raise ValueError("no admissible tester")
    return float(best)


def power_tester(beta: float, support: float = 0.5, pieces: int = 256,
                 smallest: float = 1e-12) -> QuantileFunction:
    """Step approximation from below of ``s^{-beta}`` on ``(0, support)``.

    Geometric pieces from ``smallest`` to ``support``; each piece carries the
    value at its right end, the first piece ``(0, smallest)`` the value at
    ``smallest``.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    edges = np.geomspace(smallest, support, pieces)
    vals = edges ** (-beta)
    breaks = np.concatenate([[0.0], edges])
    if support < 1.0:
        breaks = np.append(breaks, 1.0)
        vals = np.append(vals, 0.0)
    return QuantileFunction(breaks, vals)


def power_testers(p: float, count: int = 6, support: float = 0.5):
    """The family ``s^{-beta} chi_(0, support)`` with ``0 <= beta < 1/p``."""
    if math.isinf(p):
        betas = [0.0]
    else:
        betas = np.linspace(0.0, 1.0 / p, count + 1)[:-1]
    return [power_tester(float(b), support=support) for b in betas]


def maximal_function_ratio(space: RINormSpec, testers, grid: int = 4096) -> float:
    """``max ||f**||_X / ||f*||_X`` over testers: a diagnostic for whether
    ``||f||_X`` is comparable to ``||f**||_X`` on the supplied family."""
    best = 0.0
    for f in testers:
        denom = norm(space, f)
        if denom == 0.0:
            continue
        star = weighted_rearrangement(lambda t, f=f: f.integral(t) / t, f.breaks, grid=grid)
        best = max(best, norm(space, star) / denom)
    return best
