"""Brute-force counterparts on finite metric measure spaces.

On a finite space the liminf defining the perimeter vanishes identically,
so perimeters are taken at a fixed resolution ``h``:

    Per_h(A) = (mu(A^h) - mu(A)) / h,   A^h = {x : d(x, A) <= h},

i.e. the limit of the strict ``eps``-extension as ``eps`` decreases to
``h``.  On a grid of spacing ``h`` this converges to the continuum
perimeter under refinement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .rearrangement import SampledFunction

__all__ = [
    "DiscreteMetricSpace",
    "extension",
    "perimeter_h",
    "iso_profile_bruteforce",
    "continuum_crosscheck",
    "closed_extension",
    "rearrange_by_definition",
    "lip_modulus",
    "grid_space",
    "MAX_ENUMERATION",
]

MAX_ENUMERATION = 22
# closed balls absorb rounding in grid coordinates (0.501 - 0.5 > 0.001)
CLOSED_RTOL = 1e-9


@dataclass
class DiscreteMetricSpace:
    """Finite metric measure space given by a distance matrix or by
    coordinates (Euclidean distance, neighbour queries through a k-d tree)."""

    weights: np.ndarray
    h: float
    dist: Optional[np.ndarray] = None
    coords: Optional[np.ndarray] = None
    tags: dict = field(default_factory=dict)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float).ravel()
        if (self.dist is None) == (self.coords is None):
            raise ValueError("give exactly one of a distance matrix or coordinates")
        n = self.weights.size
        if np.any(self.weights <= 0) or abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be positive and sum to 1")
        if not self.h > 0:
            raise ValueError("resolution h must be positive")
        if self.dist is not None:
            d = np.asarray(self.dist, dtype=float)
            if d.shape != (n, n):
                raise ValueError("distance matrix shape does not match weights")
            if np.any(d < 0) or np.any(np.diag(d) != 0) or not np.allclose(d, d.T, rtol=0, atol=0):
                raise ValueError("distance matrix must be symmetric, non-negative, zero on the diagonal")
            _check_triangle(d)
            self.dist = d
        else:
            c = np.asarray(self.coords, dtype=float)
            if c.ndim == 1:
                c = c[:, None]
            if c.shape[0] != n:
                raise ValueError("coordinates do not match weights")
            self.coords = c
            self._tree = cKDTree(c)

    @property
    def size(self) -> int:
        return self.weights.size

    def distances_to(self, subset: np.ndarray) -> np.ndarray:
        """``d(x, A)`` for every point ``x`` (``inf`` when ``A`` is empty)."""
        idx = np.flatnonzero(subset)
        if idx.size == 0:
            return np.full(self.size, np.inf)
        if self.dist is not None:
            return self.dist[:, idx].min(axis=1)
        d, _ = cKDTree(self.coords[idx]).query(self.coords)
        return d

    def neighbour_matrix(self, radius: float, strict: bool = False) -> np.ndarray:
        """Boolean matrix of pairs with ``d < radius`` (strict) or ``d <= radius``."""
        if not strict:
            radius = radius * (1.0 + CLOSED_RTOL)
        if self.dist is not None:
            return self.dist < radius if strict else self.dist <= radius
        n = self.size
        m = np.zeros((n, n), dtype=bool)
        pairs = self._tree.query_pairs(radius, output_type="ndarray")
        if pairs.size:
            if strict:
                d = np.linalg.norm(self.coords[pairs[:, 0]] - self.coords[pairs[:, 1]], axis=1)
                pairs = pairs[d < radius]
            m[pairs[:, 0], pairs[:, 1]] = True
            m[pairs[:, 1], pairs[:, 0]] = True
        np.fill_diagonal(m, True)
        return m


def _check_triangle(d: np.ndarray, tol: float = 1e-12):
    n = d.shape[0]
    scale = max(1.0, float(d.max()))
    for k in range(n):
        if np.any(d > d[:, k:k + 1] + d[k:k + 1, :] + tol * scale):
            raise ValueError("distance matrix violates the triangle inequality")


def _as_mask(sp: DiscreteMetricSpace, subset) -> np.ndarray:
    subset = np.asarray(subset)
    if subset.dtype == bool:
        if subset.size != sp.size:
            raise ValueError("mask length does not match the space")
        return subset
    mask = np.zeros(sp.size, dtype=bool)
    mask[subset.astype(int)] = True
    return mask


def extension(sp: DiscreteMetricSpace, subset, eps: float) -> np.ndarray:
    """``A_eps = {x : exists y in A, d(x, y) < eps}`` as a boolean mask."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    return sp.distances_to(_as_mask(sp, subset)) < eps


def closed_extension(sp: DiscreteMetricSpace, subset, radius: float) -> np.ndarray:
    """``{x : d(x, A) <= radius}`` (up to a relative rounding allowance)."""
    return sp.distances_to(_as_mask(sp, subset)) <= radius * (1.0 + CLOSED_RTOL)


def perimeter_h(sp: DiscreteMetricSpace, subset) -> float:
    """``(mu(A^h) - mu(A)) / h`` with the closed ``h``-neighbourhood."""
    mask = _as_mask(sp, subset)
    if not mask.any() or mask.all():
        return 0.0
    grown = closed_extension(sp, mask, sp.h)
    return float(sp.weights[grown & ~mask].sum() / sp.h)


def iso_profile_bruteforce(sp: DiscreteMetricSpace, buckets: int = 64):
    """Minimal perimeter over all subsets, per measure bucket.

    Returns a list of dicts, one per non-empty bucket ``[k/B, (k+1)/B)``
    (the last one closed):

    ``bucket, lo, hi``
        bucket index and bounds;
    ``measure, perimeter, subset``
        a minimizer of ``perimeter_h`` among subsets with measure in the bucket;
    ``envelope_measure, envelope_perimeter, envelope_subset``
        a minimizer among proper non-empty subsets with
        ``min(mu(A), 1 - mu(A)) >= min(lo, 1 - hi)`` (``None`` if there is none).

    The envelope is the discrete analogue of ``I(t) = inf{Per(A) : t <= mu(A) <= 1 - t}``,
    valid for profiles that increase up to 1/2; it is what gets compared
    against a continuum profile, since single buckets can be reachable only
    by ragged subsets.
    """
    n = sp.size
    if n > MAX_ENUMERATION:
        raise ValueError(f"brute force enumeration is limited to {MAX_ENUMERATION} points, got {n}")
    if buckets < 1:
        raise ValueError("need at least one bucket")
    nb = sp.neighbour_matrix(sp.h)
    nb_bits = (nb.astype(np.int64) << np.arange(n, dtype=np.int64)[None, :]).sum(axis=1)
    total = 1 << n
    measure = np.zeros(total)
    grown = np.zeros(total, dtype=np.int64)
    # subsets containing bit k are the subsets below 2^k with point k added
    for k in range(n):
        lo, hi = 1 << k, 1 << (k + 1)
        measure[lo:hi] = measure[:lo] + sp.weights[k]
        grown[lo:hi] = grown[:lo] | nb_bits[k]
    measure[total - 1] = 1.0
    per = (measure[grown] - measure) / sp.h
    per[0] = 0.0
    per[total - 1] = 0.0
    per = np.maximum(per, 0.0)
    idx = np.minimum((measure * buckets).astype(np.int64), buckets - 1)
    order = np.lexsort((per, idx))
    first = np.flatnonzero(np.concatenate([[True], idx[order][1:] != idx[order][:-1]]))

    # running minimum of the perimeter over proper subsets, by decreasing min(m, 1-m)
    sym = np.minimum(measure, 1.0 - measure)[1:total - 1]
    by_sym = np.argsort(-sym, kind="stable")
    run = np.minimum.accumulate(per[1:total - 1][by_sym])
    arg = by_sym[_running_argmin(per[1:total - 1][by_sym])] + 1
    sym_desc = sym[by_sym]

    def members(s):
        return [k for k in range(n) if (int(s) >> k) & 1]

    out = []
    for pos in first:
        s = order[pos]
        b = int(idx[s])
        lo_b, hi_b = b / buckets, (b + 1) / buckets
        tau = min(lo_b, 1.0 - hi_b)
        # entries with sym >= tau form a prefix of the descending order
        cut = int(np.searchsorted(-sym_desc, -tau, side="right"))
        row = {
            "bucket": b,
            "lo": lo_b,
            "hi": hi_b,
            "measure": float(measure[s]),
            "perimeter": float(per[s]),
            "subset": members(s),
            "envelope_measure": None,
            "envelope_perimeter": None,
            "envelope_subset": None,
        }
        if cut > 0:
            e = arg[cut - 1]
            row.update(envelope_measure=float(measure[e]),
                       envelope_perimeter=float(run[cut - 1]),
                       envelope_subset=members(e))
        out.append(row)
    return out


def _running_argmin(x: np.ndarray) -> np.ndarray:
    """Index of the first minimum of ``x[:i+1]`` for every ``i``."""
    run = np.minimum.accumulate(x)
    new = np.concatenate([[True], run[1:] < run[:-1]])
    pos = np.where(new, np.arange(x.size), 0)
    return np.maximum.accumulate(pos)


def continuum_crosscheck(rows, profile, edge_mass: float):
    """Compare envelope minimizers with a continuum profile.

    For each row whose bucket keeps a distance of at least ``edge_mass``
    (normally the smallest atom) from both endpoints, returns
    ``(bucket, measure, perimeter, I(measure), ratio)`` with the ratio
    ``perimeter / I(measure)`` taken at the minimizer's own measure.
    """
    out = []
    for row in rows:
        if row["envelope_subset"] is None:
            continue
        if min(row["lo"], 1.0 - row["hi"]) < edge_mass:
            continue
        m = row["envelope_measure"]
        ref = float(profile(m))
        out.append((row["bucket"], m, row["envelope_perimeter"], ref,
                    row["envelope_perimeter"] / ref))
    return out


def rearrange_by_definition(f: SampledFunction, probes) -> np.ndarray:
    """``f*(s) = inf{t >= 0 : lambda_f(t) <= s}`` by direct scanning.

    The infimum is attained on ``{0} U {|f_i|}``, so the candidates are
    scanned in increasing order and ``lambda`` is summed from scratch.
    """
    a = np.abs(f.values)
    cands = np.unique(np.concatenate([[0.0], a]))
    lam = np.array([f.weights[a > t].sum() for t in cands])
    probes = np.asarray(probes, dtype=float)
    if np.any((probes <= 0) | (probes > 1)):
        raise ValueError("probes must lie in (0, 1]")
    out = np.empty(probes.size)
    for i, s in enumerate(probes.ravel()):
        # lambda_f(0) <= mu(X) = 1 exactly, even when the float sum says otherwise
        out[i] = 0.0 if s >= 1.0 else cands[np.argmax(lam <= s)]
    return out.reshape(probes.shape)


def lip_modulus(sp: DiscreteMetricSpace, values, radius: float) -> np.ndarray:
    """``max_{0 < d(x,y) <= radius} |f(x) - f(y)| / d(x,y)`` at every point."""
    values = np.asarray(values, dtype=float).ravel()
    if values.size != sp.size:
        raise ValueError("values do not match the space")
    if not radius > 0:
        raise ValueError("radius must be positive")
    out = np.zeros(sp.size)
    if sp.dist is not None:
        d = sp.dist
        near = (d > 0) & (d <= radius * (1.0 + CLOSED_RTOL))
        with np.errstate(divide="ignore", invalid="ignore"):
            q = np.where(near, np.abs(values[:, None] - values[None, :]) / np.where(near, d, 1.0), 0.0)
        return q.max(axis=1)
    pairs = sp._tree.query_pairs(radius * (1.0 + CLOSED_RTOL), output_type="ndarray")
    if pairs.size == 0:
        return out
    i, j = pairs[:, 0], pairs[:, 1]
    d = np.linalg.norm(sp.coords[i] - sp.coords[j], axis=1)
    ok = d > 0
    i, j, d = i[ok], j[ok], d[ok]
    q = np.abs(values[i] - values[j]) / d
    np.maximum.at(out, i, q)
    np.maximum.at(out, j, q)
    return out


def grid_space(r: float, count: int, spacing: float, center: float = 0.0,
               h: Optional[float] = None) -> DiscreteMetricSpace:
    """Uniform grid of ``count`` points discretizing ``mu_r`` on the line.

    Each point carries the ``mu_r`` mass of its cell (the end cells absorb
    the tails); ``h`` defaults to the spacing.
    """
    from .model_measures import ModelMeasure, cdf

    m = ModelMeasure(r)
    x = center + spacing * (np.arange(count) - (count - 1) / 2.0)
    mids = 0.5 * (x[1:] + x[:-1])
    cum = np.concatenate([[0.0], cdf(m, mids), [1.0]])
    # upper-tail masses from the survival side keep precision past the median
    upper = np.concatenate([[1.0], m.sf(mids), [0.0]])
    lower_cells = np.diff(cum)
    upper_cells = -np.diff(upper)
    w = np.where(x < 0, lower_cells, upper_cells)
    w = w / w.sum()
    return DiscreteMetricSpace(weights=w, h=spacing if h is None else h, coords=x,
                               tags={"grid": {"r": r, "count": count, "spacing": spacing,
                                              "center": center}})
