"""Analytic test functions on R^n with Euclidean gradient moduli, and the
sampled suite the checkers run over.

Each :class:`TestFunction` maps an ``(N, n)`` array of points to
``(values, |grad|)``.  On clamped pieces the gradient is that of the active
branch (zero where the clamp is active), which is the a.e. gradient.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .model_measures import ModelMeasure, sample
from .rearrangement import SampledFunction

__all__ = [
    "TestFunction",
    "coordinate",
    "diagonal",
    "smoothed_half_line",
    "clamped_ramp",
    "radial_bump",
    "clamped_quadratic",
    "constant",
    "default_family",
    "sampled",
    "suite",
    "sample_points",
]


@dataclass(frozen=True)
class TestFunction:
    name: str
    func: Callable[[np.ndarray], tuple]

    # keep pytest from collecting this class
    __test__ = False

    def __call__(self, x: np.ndarray):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        v, g = self.func(x)
        return np.asarray(v, dtype=float), np.asarray(g, dtype=float)


def constant(c: float = 1.0) -> TestFunction:
    return TestFunction(f"constant({c:g})",
                        lambda x: (np.full(x.shape[0], float(c)), np.zeros(x.shape[0])))


def coordinate(k: int = 0) -> TestFunction:
    """``x_k``."""
    return TestFunction(f"x{k + 1}", lambda x: (x[:, k].copy(), np.ones(x.shape[0])))


def diagonal() -> TestFunction:
    """``(x_1 + ... + x_n) / sqrt(n)``.

    Not part of the default family: for ``r < 2`` and ``n >= 2`` its level
    sets beat the one-dimensional profile (the product profile is smaller by
    a dimension-free factor), so it is a counterexample, not a test case.
    """
    def f(x):
        n = x.shape[1]
        return x.sum(axis=1) / np.sqrt(n), np.ones(x.shape[0])

    return TestFunction("diagonal", f)


def smoothed_half_line(eps: float, a: float = 0.0) -> TestFunction:
    """``clamp((x_1 - a)/eps + 1, 0, 1)``: 1 on ``x_1 >= a``, 0 below ``a - eps``."""
    if not eps > 0:
        raise ValueError("eps must be positive")

    def f(x):
        u = (x[:, 0] - a) / eps + 1.0
        inside = (u > 0.0) & (u < 1.0)
        return np.clip(u, 0.0, 1.0), np.where(inside, 1.0 / eps, 0.0)

    return TestFunction(f"half_line(eps={eps:g},a={a:g})", f)


def clamped_ramp(bound: float = 1.0) -> TestFunction:
    """``clamp(x_1, -bound, bound)``."""
    def f(x):
        u = x[:, 0]
        return np.clip(u, -bound, bound), (np.abs(u) < bound).astype(float)

    return TestFunction(f"ramp({bound:g})", f)


def radial_bump() -> TestFunction:
    """``(1 - |x|^2)_+``."""
    def f(x):
        s = np.einsum("ij,ij->i", x, x)
        inside = s < 1.0
        return np.where(inside, 1.0 - s, 0.0), np.where(inside, 2.0 * np.sqrt(s), 0.0)

    return TestFunction("radial_bump", f)


def clamped_quadratic(dim: int, seed: int = 0, bound: float = 2.0) -> TestFunction:
    """``clamp(c + b.x + x.A.x, -bound, bound)`` with seeded standard normal
    coefficients (``A`` scaled by 1/2 and symmetrized)."""
    rng = np.random.default_rng(seed)
    c = rng.standard_normal()
    b = rng.standard_normal(dim)
    A = rng.standard_normal((dim, dim)) / 2.0
    A = 0.5 * (A + A.T)

    def f(x):
        if x.shape[1] != dim:
            raise ValueError(f"polynomial was drawn for dimension {dim}")
        p = c + x @ b + np.einsum("ij,jk,ik->i", x, A, x)
        grad = b[None, :] + 2.0 * x @ A
        inside = np.abs(p) < bound
        return np.clip(p, -bound, bound), np.where(inside, np.linalg.norm(grad, axis=1), 0.0)

    return TestFunction(f"quadratic(seed={seed})", f)


def default_family(dim: int):
    """The analytic family used by the property runs."""
    fam = [coordinate(0)]
    if dim > 1:
        fam.append(coordinate(dim - 1))
    fam += [smoothed_half_line(e) for e in (1e-1, 1e-2, 1e-3)]
    fam += [clamped_ramp(), radial_bump(), clamped_quadratic(dim, seed=1),
            clamped_quadratic(dim, seed=2)]
    return fam


@lru_cache(maxsize=16)
def _points(r: float, dim: int, count: int, seed: int):
    pts, w = sample(ModelMeasure(r, dim), count, seed)
    pts.setflags(write=False)
    return pts, w


def sample_points(r: float, dim: int, count: int, seed: int):
    """Cached ``sample``; coordinates are shared across ``dim`` for a seed."""
    return _points(float(r), int(dim), int(count), int(seed))


def sampled(tf: TestFunction, points: np.ndarray, weights: np.ndarray) -> SampledFunction:
    v, g = tf(points)
    return SampledFunction(v, g, weights)


def suite(r_values=(1.2, 1.5, 2.0), dims=(1, 2, 3), count: int = 100_000, seed: int = 7):
    """Yield ``(r, dim, TestFunction, SampledFunction)`` over the default family."""
    for r in r_values:
        for n in dims:
            pts, w = sample_points(r, n, count, seed)
            for tf in default_family(n):
                yield r, n, tf, sampled(tf, pts, w)
