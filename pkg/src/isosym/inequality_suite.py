"""Numerical checkers for the rearrangement inequalities attached to an
isoperimetric profile, plus the embeddings and Poincare-type inequalities
derived from them.

Every checker returns an :class:`InequalityReport`.  Two sides are computed
from a :class:`SampledFunction`; the verdict is

* ``pass`` when ``lhs <= rhs (1 + rel_tol) + abs_tol`` at every checked point,
* ``pass (statistical)`` when the excess is within three bootstrap standard
  errors at every violating point,
* ``fail`` otherwise,
* ``recorded`` for statements whose constant is the deliverable.

Monte Carlo samples make the a.e. statements (Talenti-Maz'ya, Polya-Szego)
meaningless atom by atom: consecutive gaps of ``f*`` are exponentially
distributed.  Those two checkers therefore sum the per-piece inequalities over
windows of consecutive pieces, which is implied by the per-piece statement
and averages the gap noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .iso_profiles import ProfileWeightedOperator, function_norm, kernel_integral
from .model_measures import IsoProfile, ModelMeasure, profile_grid
from .rearrangement import QuantileFunction, SampledFunction, median, rearrange
from .ri_norms import RINormSpec, ls_norm, norm, weighted_rearrangement

__all__ = [
    "InequalityReport",
    "Tolerance",
    "check_ledoux",
    "check_talenti_mazya",
    "check_polya_szego",
    "check_main",
    "check_poincare_median",
    "check_concentration",
    "check_linfty_embedding",
    "check_lp_loglq",
    "check_ls_poincare",
    "check_hardy_condition",
    "check_perdida_and_harhar",
    "HARD_STATUSES",
]

PASS = "pass"
PASS_STAT = "pass (statistical)"
FAIL = "fail"
RECORDED = "recorded"
HARD_STATUSES = (PASS, PASS_STAT, FAIL)

SCAN_TMIN = 1e-6


@dataclass(frozen=True)
class Tolerance:
    """``lhs <= rhs (1 + rel_tol) + abs_tol * scale(f)``; ``sigmas`` standard
    errors of slack for the statistical verdict, estimated from
    ``replicates`` Poisson-bootstrap resamples drawn from ``seed``."""

    rel_tol: float = 1e-3
    abs_tol: float = 1e-9
    sigmas: float = 3.0
    replicates: int = 40
    seed: int = 20240601


DEFAULT_TOL = Tolerance()


@dataclass
class InequalityReport:
    name: str
    anchor: str
    lhs: float
    rhs: float
    margin: float
    realized_constant: float
    status: str
    diagnostics: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status in (PASS, PASS_STAT, RECORDED)

    @property
    def hard_failure(self) -> bool:
        return self.status == FAIL

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "margin": _jsonable(self.margin),
            "realized_constant": _jsonable(self.realized_constant),
            "status": self.status,
            "diagnostics": {k: _jsonable(v) for k, v in sorted(self.diagnostics.items())},
            "flags": list(self.flags),
        }


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, np.integer):
        return int(x)
    return x


def _ratio(lhs, rhs):
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(rhs > 0, lhs / np.where(rhs > 0, rhs, 1.0),
                     np.where(lhs > 0, np.inf, 0.0))
    return r


# ---------------------------------------------------------------- verdicts

def _poisson_replicates(f: SampledFunction, tol: Tolerance):
    rng = np.random.default_rng(tol.seed)
    for _ in range(tol.replicates):
        k = rng.poisson(1.0, size=len(f))
        if not np.any(k):
            continue
        yield SampledFunction.normalized(f.values, f.grads, f.weights * k)


def _verdict(f: SampledFunction, lhs, rhs, tol: Tolerance,
             excess_fn: Optional[Callable[[SampledFunction], np.ndarray]]):
    """Status plus standard errors for a family of checked points.

    ``excess_fn(g)`` must return ``lhs - rhs (1 + rel) - abs`` for a resample
    ``g`` at the same points (abs computed from the original ``f``); it is
    only called when the strict check fails.
    """
    lhs = np.atleast_1d(np.asarray(lhs, dtype=float))
    rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
    bound = rhs * (1.0 + tol.rel_tol) + tol.abs_tol * f.scale
    excess = lhs - bound
    bad = excess > 0
    if not np.any(bad):
        return PASS, None
    if excess_fn is None:
        return FAIL, None
    reps = np.array([np.atleast_1d(excess_fn(g)) for g in _poisson_replicates(f, tol)])
    se = reps.std(axis=0, ddof=1) if reps.shape[0] > 1 else np.zeros_like(excess)
    ok = excess[bad] <= tol.sigmas * se[bad]
    return (PASS_STAT if np.all(ok) else FAIL), se


def _abs_tol(f: SampledFunction, tol: Tolerance) -> float:
    return tol.abs_tol * f.scale


def _worst(lhs, rhs, points):
    margins = np.asarray(rhs, dtype=float) - np.asarray(lhs, dtype=float)
    if margins.size == 0:
        return 0.0, None
    i = int(np.argmin(margins))
    return float(margins[i]), (None if points is None else float(np.asarray(points)[i]))


def _report(name, anchor, f, lhs, rhs, tol, excess_fn=None, points=None,
            diagnostics=None, flags=None, constant=None):
    lhs_a = np.atleast_1d(np.asarray(lhs, dtype=float))
    rhs_a = np.atleast_1d(np.asarray(rhs, dtype=float))
    status, se = _verdict(f, lhs_a, rhs_a, tol, excess_fn)
    margin, where = _worst(lhs_a, rhs_a, points)
    diag = dict(diagnostics or {})
    if lhs_a.size:
        ratios = _ratio(lhs_a, rhs_a)
        k = int(np.argmax(ratios))
        worst_lhs, worst_rhs = float(lhs_a[k]), float(rhs_a[k])
        realized = float(ratios[k]) if constant is None else constant
    else:
        worst_lhs = worst_rhs = 0.0
        realized = 0.0 if constant is None else constant
    if where is not None:
        diag["worst_t"] = where
    diag["checked_points"] = int(lhs_a.size)
    if se is not None:
        i = int(np.argmax(lhs_a - rhs_a * (1.0 + tol.rel_tol)))
        diag["bootstrap_se"] = float(se[i])
    return InequalityReport(name=name, anchor=anchor, lhs=worst_lhs, rhs=worst_rhs,
                            margin=margin, realized_constant=realized, status=status,
                            diagnostics=diag, flags=list(flags or []))


def _check_f(f):
    if not isinstance(f, SampledFunction):
        raise TypeError("expected a SampledFunction")


# ---------------------------------------------------------------- Ledoux

def _ledoux_sides(f: SampledFunction, profile: IsoProfile):
    q = rearrange(f)
    v = q.values
    jumps = v - np.append(v[1:], 0.0)
    # lambda_f = s_k on [v_{k+1}, v_k)
    s = np.clip(q.breaks[1:], 0.0, 1.0)
    lhs = float(np.sum(jumps * profile(s)))
    rhs = float(np.dot(f.weights, f.grads))
    return lhs, rhs


def check_ledoux(f: SampledFunction, profile: IsoProfile,
                 tol: Tolerance = DEFAULT_TOL) -> InequalityReport:
    """``int_0^inf I(lambda_f(s)) ds <= int |grad f| dmu``, summed exactly over
    the steps of the distribution function."""
    _check_f(f)
    lhs, rhs = _ledoux_sides(f, profile)
    abs_tol = _abs_tol(f, tol)

    def excess(g):
        a, b = _ledoux_sides(g, profile)
        return a - b * (1.0 + tol.rel_tol) - abs_tol

    return _report("ledoux", "Ledoux inequality", f, lhs, rhs, tol, excess)


# ------------------------------------------------- Talenti-Maz'ya, Polya-Szego

def _piece_profile(profile: IsoProfile, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """``I`` at the left end of each piece; the larger endpoint value for
    pieces reaching past 1/2."""
    il = profile(np.clip(left, 0.0, 1.0))
    past = right > 0.5
    if np.any(past):
        il = il.copy()
        il[past] = np.maximum(il[past], profile(np.clip(right[past], 0.0, 1.0)))
    return il


def _piece_terms(f: SampledFunction, profile: IsoProfile):
    """Per-piece quantities of ``f*``, excluding the last piece (no jump
    inside (0, 1)).  Returns levels, left/right ends, jump * I and the
    gradient mass carried by the atoms at each level."""
    a = np.abs(f.values)
    order = np.argsort(-a, kind="stable")
    av = a[order]
    starts = np.flatnonzero(np.concatenate([[True], av[1:] != av[:-1]]))
    levels = av[starts]
    w = np.add.reduceat(f.weights[order], starts)
    gm = np.add.reduceat((f.weights * f.grads)[order], starts)
    breaks = np.concatenate([[0.0], np.cumsum(w)])
    left, right = breaks[:-1], breaks[1:]
    jumps = levels[:-1] - levels[1:]
    lhs = jumps * _piece_profile(profile, left[:-1], right[:-1])
    return levels[:-1], left[:-1], right[:-1], lhs, gm[:-1]


def _window_edges(count: int, window: Optional[int], atoms: int) -> np.ndarray:
    """Start indices of windows of ``window`` consecutive pieces (default
    ``atoms^(2/3)``); the remainder joins the last full window."""
    if count == 0:
        return np.zeros(0, dtype=int)
    if window is None:
        window = max(1, int(round(atoms ** (2.0 / 3.0))))
    starts = np.arange(0, count, window)
    if starts.size > 1 and count - starts[-1] < window:
        starts = starts[:-1]
    return starts


def _band_index(levels: np.ndarray, band_tops: np.ndarray) -> np.ndarray:
    """Window index of each level, windows given by their top level (descending)."""
    return np.searchsorted(-band_tops, -levels, side="right") - 1


def _talenti_sides(f, profile, band_tops):
    levels, _, _, lhs, gm = _piece_terms(f, profile)
    idx = np.clip(_band_index(levels, band_tops), 0, band_tops.size - 1)
    n = band_tops.size
    return (np.bincount(idx, weights=lhs, minlength=n),
            np.bincount(idx, weights=gm, minlength=n))


def check_talenti_mazya(f: SampledFunction, profile: IsoProfile,
                        tol: Tolerance = DEFAULT_TOL,
                        window: Optional[int] = None) -> InequalityReport:
    """``(-f*)'(s) I(s) <= d/ds int_{|f| > f*(s)} |grad f|`` in summed form.

    On the piece ``[s_j, s_{j+1})`` of ``f*`` the left side is the jump
    ``f*(s_j) - f*(s_{j+1})`` times ``I(s_j)`` and the right side is the
    gradient mass of the atoms at level ``f*(s_j)``.  Both are summed over
    windows of ``window`` consecutive pieces (default: N^(2/3) for N atoms,
    so the relative gap noise per window is about N^(-1/3));
    ``window=1`` checks every piece.
    """
    _check_f(f)
    levels, left, _, lhs, gm = _piece_terms(f, profile)
    starts = _window_edges(levels.size, window, len(f))
    if starts.size == 0:
        return _report("talenti_mazya", "Talenti-Maz'ya inequality", f, [], [], tol,
                       diagnostics={"windows": 0})
    band_tops = levels[starts]
    L, R = _talenti_sides(f, profile, band_tops)
    abs_tol = _abs_tol(f, tol)

    def excess(g):
        a, b = _talenti_sides(g, profile, band_tops)
        return a - b * (1.0 + tol.rel_tol) - abs_tol

    return _report("talenti_mazya", "Talenti-Maz'ya inequality", f, L, R, tol, excess,
                   points=left[starts],
                   diagnostics={"windows": int(starts.size),
                                "pieces_per_window": int(np.diff(np.append(starts, levels.size)).max())})


def _polya_lhs(f, profile, band_tops):
    """Window masses of ``(-f*)' I`` spread uniformly over each window's span."""
    levels, left, right, lhs, _ = _piece_terms(f, profile)
    n = band_tops.size
    idx = np.clip(_band_index(levels, band_tops), 0, n - 1)
    mass = np.bincount(idx, weights=lhs, minlength=n)
    lo = np.full(n, np.inf)
    hi = np.full(n, -np.inf)
    np.minimum.at(lo, idx, left)
    np.maximum.at(hi, idx, right)
    used = np.isfinite(lo)
    span = np.where(used, hi - lo, 0.0)
    dens = np.where(span > 0, mass / np.where(span > 0, span, 1.0), 0.0)
    return _density_cumulative(dens[used], span[used])


def _density_cumulative(dens, span):
    """``t -> int_0^t h*`` for the step density ``dens`` on cells ``span``."""
    order = np.argsort(-dens, kind="stable")
    d, w = dens[order], span[order]
    edges = np.concatenate([[0.0], np.cumsum(w)])
    cum = np.concatenate([[0.0], np.cumsum(d * w)])

    def F(t):
        t = np.asarray(t, dtype=float)
        k = np.clip(np.searchsorted(edges, t, side="right") - 1, 0, d.size)
        dd = np.append(d, 0.0)
        out = cum[np.minimum(k, d.size)] + dd[k] * (np.minimum(t, edges[-1]) - edges[np.minimum(k, d.size)])
        return np.where(t >= edges[-1], cum[-1], out)

    return F, edges


def check_polya_szego(f: SampledFunction, profile: IsoProfile,
                      tol: Tolerance = DEFAULT_TOL, window: Optional[int] = None,
                      grid: int = 4096) -> InequalityReport:
    """``int_0^t ((-f*)' I)*(s) ds <= int_0^t |grad f|*(s) ds`` for all ``t``.

    ``(-f*)' I`` is represented by the summed piece masses of each window
    (as in :func:`check_talenti_mazya`) spread uniformly over the window;
    its rearrangement is taken with respect to Lebesgue measure.  Both sides
    are piecewise linear in ``t``, so checking at the union of their
    breakpoints and the scan grid is exhaustive.
    """
    _check_f(f)
    levels = _piece_terms(f, profile)[0]
    starts = _window_edges(levels.size, window, len(f))
    gq = rearrange(f.gradient_function())
    if starts.size == 0:
        return _report("polya_szego", "Polya-Szego inequality", f, [], [], tol,
                       diagnostics={"windows": 0})
    band_tops = levels[starts]
    F, edges = _polya_lhs(f, profile, band_tops)
    t = np.unique(np.concatenate([edges[1:], gq.breaks[1:], profile_grid(grid, SCAN_TMIN)]))
    t = t[(t > 0) & (t <= 1.0)]
    lhs = F(t)
    rhs = gq.integral(t)
    abs_tol = _abs_tol(f, tol)

    def excess(g):
        Fg, _ = _polya_lhs(g, profile, band_tops)
        return Fg(t) - rearrange(g.gradient_function()).integral(t) * (1.0 + tol.rel_tol) - abs_tol

    return _report("polya_szego", "Polya-Szego inequality", f, lhs, rhs, tol, excess,
                   points=t, diagnostics={"windows": int(starts.size)})


# ---------------------------------------------------------------- main

def _main_sides(f: SampledFunction, profile: IsoProfile, t: np.ndarray):
    q = rearrange(f)
    k = np.maximum(q.integral(t) - t * q(t), 0.0)
    g = k * profile(t) / t ** 2
    rhs = rearrange(f.gradient_function()).integral(t) / t
    return g, rhs


def _scan_points(q: QuantileFunction, grid: int) -> np.ndarray:
    t = np.concatenate([profile_grid(grid, SCAN_TMIN), q.breaks[1:-1]])
    t = np.unique(t)
    return t[(t >= SCAN_TMIN) & (t <= 1.0 - SCAN_TMIN)]


def check_main(f: SampledFunction, profile: IsoProfile, tol: Tolerance = DEFAULT_TOL,
               grid: int = 4096) -> InequalityReport:
    """``f**(t) - f*(t) <= (t / I(t)) |grad f|**(t)`` for ``t`` in [1e-6, 1 - 1e-6].

    Checked in the equivalent form ``(f** - f*)(t) I(t)/t <= |grad f|**(t)``
    on the scan grid merged with the breakpoints of ``f*`` (where the left
    side attains its supremum over each piece).
    """
    _check_f(f)
    t = _scan_points(rearrange(f), grid)
    lhs, rhs = _main_sides(f, profile, t)
    abs_tol = _abs_tol(f, tol)

    def excess(g):
        a, b = _main_sides(g, profile, t)
        return a - b * (1.0 + tol.rel_tol) - abs_tol

    return _report("main", "oscillation inequality", f, lhs, rhs, tol, excess, points=t)


# ---------------------------------------------------------------- consequences

def _median_sides(f, profile):
    m = median(f)
    lhs = float(np.dot(f.weights, np.abs(f.values - m)))
    rhs = float(np.dot(f.weights, f.grads)) / (2.0 * profile(0.5))
    return lhs, rhs


def check_poincare_median(f: SampledFunction, profile: IsoProfile,
                          tol: Tolerance = DEFAULT_TOL) -> InequalityReport:
    """``int |f - m_f| dmu <= (2 I(1/2))^{-1} int |grad f| dmu``."""
    _check_f(f)
    lhs, rhs = _median_sides(f, profile)
    abs_tol = _abs_tol(f, tol)

    def excess(g):
        a, b = _median_sides(g, profile)
        return a - b * (1.0 + tol.rel_tol) - abs_tol

    rep = _report("poincare_median", "median Poincare inequality", f, lhs, rhs, tol, excess)
    rep.diagnostics["median"] = median(f)
    return rep


def _require_r(m: ModelMeasure):
    if not m.r > 1.0:
        raise ValueError("this checker needs r > 1 (finite conjugate exponent)")


def check_concentration(f: SampledFunction, m: ModelMeasure, grid: int = 4096) -> InequalityReport:
    """``C* = sup_{t in [1e-6, 1/2)} (f** - f*)(t) (log 1/t)^{1/q} / ||f||_Lip``
    with ``||f||_Lip = max_i grad_i``."""
    _check_f(f)
    _require_r(m)
    lip = float(np.max(f.grads))
    q = rearrange(f)
    t = _scan_points(q, grid)
    t = t[t < 0.5]
    osc = np.maximum(q.integral(t) - t * q(t), 0.0) / t
    flags = []
    if lip == 0.0:
        if np.ptp(f.values) > 0.0:
            raise ValueError("zero Lipschitz seminorm for a non-constant function")
        return InequalityReport("concentration", "concentration inequality", 0.0, 0.0, 0.0,
                                0.0, RECORDED, {"lip": 0.0}, flags)
    lhs = osc * np.log(1.0 / t) ** (1.0 / m.q)
    k = int(np.argmax(lhs))
    c = float(lhs[k] / lip)
    return InequalityReport("concentration", "concentration inequality", float(lhs[k]), lip,
                            lip - float(lhs[k]), c, RECORDED,
                            {"worst_t": float(t[k]), "lip": lip, "checked_points": int(t.size)},
                            flags)


def _log_kernel(r: float, a, b):
    """``int_a^b ds / (s (log 1/s)^{1/q}) = r [(log 1/a)^{1/r} - (log 1/b)^{1/r}]``."""
    return r * (np.log(1.0 / a) ** (1.0 / r) - np.log(1.0 / b) ** (1.0 / r))


def _linfty_rhs(gq: QuantileFunction, r: float, lower: float) -> float:
    b = np.clip(gq.breaks, lower, 0.5)
    return float(np.sum(gq.values * _log_kernel(r, b[:-1], b[1:])))


def check_linfty_embedding(f: SampledFunction, m: ModelMeasure,
                           lower: float = 1e-8) -> InequalityReport:
    """``||f - m_f||_inf`` against ``int_lower^{1/2} |grad f|*(s) ds / (s (log 1/s)^{1/q})``.

    The integral is exact for the step function ``|grad f|*``.  Taken from 0
    it diverges whenever ``|grad f|*(0+) > 0``, which every sampled
    non-constant function satisfies; the report then carries the flag
    ``rhs-diverges`` and the value at ``lower**2`` for comparison.
    """
    _check_f(f)
    _require_r(m)
    lhs = float(np.max(np.abs(f.values - median(f))))
    gq = rearrange(f.gradient_function())
    rhs = _linfty_rhs(gq, m.r, lower)
    flags, diag = [], {"lower": lower}
    if gq.values[0] > 0.0:
        flags.append("rhs-diverges")
        diag["rhs_at_lower_squared"] = _linfty_rhs(gq, m.r, lower ** 2)
    c = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf)
    return InequalityReport("linfty_embedding", "L-infinity embedding", lhs, rhs, rhs - lhs, c,
                            RECORDED, diag, flags)


def check_lp_loglq(f: SampledFunction, m: ModelMeasure, p: float = 2.0) -> InequalityReport:
    """``int_0^1 f*(s)^p (log 1/s)^{p/q} ds`` against ``int |grad f|^p + int |f|^p``."""
    _check_f(f)
    _require_r(m)
    if not p >= 1.0:
        raise ValueError("p must be at least 1")
    lhs = norm(RINormSpec.LpLogL(p, 1.0 / m.q), rearrange(f)) ** p
    rhs = float(np.dot(f.weights, f.grads ** p) + np.dot(f.weights, np.abs(f.values) ** p))
    c = lhs / rhs if rhs > 0 else 0.0
    return InequalityReport("lp_loglq", "Lp(LogL) embedding", float(lhs), rhs, rhs - lhs, c,
                            RECORDED, {"p": p, "log_exponent": p / m.q})


def _ls_sides(f, profile, space, grid):
    lhs = ls_norm(space, f, profile, grid=grid)
    rhs = norm(space, rearrange(f.gradient_function()))
    return lhs, rhs


def _ls_inf_sides(f, profile, t):
    q = rearrange(f)
    g = np.maximum(q.integral(t) - t * q(t), 0.0) * profile(t) / t ** 2
    return g, np.full(t.size, float(np.max(f.grads)))


def check_ls_poincare(f: SampledFunction, profile: IsoProfile, space: RINormSpec,
                      tol: Tolerance = DEFAULT_TOL, grid: int = 4096) -> InequalityReport:
    """``||f||_{LS(X)} <= ||grad f||_X``.

    For ``X = L^inf`` the supremum is checked pointwise on the points used
    by :func:`check_main` (``(f** - f*) I(t)/t <= max |grad f|``), so both
    checkers share evaluation points and standard errors.  Since
    ``|grad f|**(t) <= max |grad f|``, a pass of :func:`check_main` implies a
    pass here.
    """
    _check_f(f)
    abs_tol = _abs_tol(f, tol)
    if space.kind == "Linf":
        t = _scan_points(rearrange(f), grid)
        lhs, rhs = _ls_inf_sides(f, profile, t)

        def excess(g):
            a, b = _ls_inf_sides(g, profile, t)
            return a - b * (1.0 + tol.rel_tol) - abs_tol

        rep = _report(f"ls_poincare[{space}]", "LS(X) Poincare inequality", f, lhs, rhs, tol,
                      excess, points=t)
    else:
        lhs, rhs = _ls_sides(f, profile, space, grid)

        def excess(g):
            a, b = _ls_sides(g, profile, space, grid)
            return a - b * (1.0 + tol.rel_tol) - abs_tol

        rep = _report(f"ls_poincare[{space}]", "LS(X) Poincare inequality", f, lhs, rhs, tol,
                      excess)
    rep.diagnostics["space"] = str(space)
    return rep


# ---------------------------------------------------------------- profile side

def check_hardy_condition(profile: IsoProfile, X: RINormSpec, Y: RINormSpec, testers,
                          grid: int = 4096, tmin: float = 1e-12) -> InequalityReport:
    """Largest ``||int_t^1 f ds / I(s)||_Y / ||f||_X`` over testers supported
    in (0, 1/2).

    A lower bound on the best constant; ``lhs`` and ``rhs`` are the two
    norms for the maximizing tester.
    """
    op = ProfileWeightedOperator(profile, grid=grid, tmin=tmin)
    best = None
    count = 0
    for f in testers:
        if not isinstance(f, QuantileFunction):
            raise TypeError("testers must be QuantileFunction instances")
        if np.any(f.values[f.breaks[1:] > 0.5] > 0):
            raise ValueError("tester support must lie in (0, 1/2)")
        den = norm(X, f)
        if den == 0.0:
            continue
        count += 1
        num = function_norm(op, Y, lambda t, f=f: kernel_integral(op, f, t), f.breaks)
        if best is None or num / den > best[0]:
            best = (num / den, num, den)
    if best is None:
        raise ValueError("no admissible tester")
    c, num, den = best
    return InequalityReport("hardy_condition", "weighted Hardy condition", num, den, den - num,
                            c, RECORDED, {"X": str(X), "Y": str(Y), "testers": count})


def _weighted_star_norm(q: QuantileFunction, profile: IsoProfile, X: RINormSpec,
                        grid: int, tmin: float) -> float:
    star = weighted_rearrangement(lambda t: q(t) * profile(t) / t, q.breaks[1:-1],
                                  grid=grid, tmin=tmin)
    return norm(X, star)


def check_perdida_and_harhar(f: SampledFunction, profile: IsoProfile, X: RINormSpec,
                             Y: RINormSpec, grid: int = 4096) -> InequalityReport:
    """``||f||_Y`` against ``||f* I(t)/t||_X`` and against ``||f||_{LS(X)} + ||f||_1``.

    No verdict: both constants are recorded.  ``f* I(t)/t`` grows like
    ``(log 1/t)^{1/q}`` at 0, so its norm is computed on grids starting at
    1e-6 and 1e-12; a relative change above 1% raises the flag
    ``weighted-norm-diverges``.
    """
    _check_f(f)
    q = rearrange(f)
    y = norm(Y, q)
    w_coarse = _weighted_star_norm(q, profile, X, grid, 1e-6)
    w_fine = _weighted_star_norm(q, profile, X, grid, 1e-12)
    ls = ls_norm(X, f, profile, grid=grid) + norm(RINormSpec.L1(), q)
    flags = []
    if w_fine > 0 and abs(w_fine - w_coarse) > 1e-2 * w_fine:
        flags.append("weighted-norm-diverges")
    c1 = y / w_fine if w_fine > 0 else 0.0
    c2 = y / ls if ls > 0 else 0.0
    return InequalityReport("perdida_and_harhar", "weighted-norm and LS(X) embeddings",
                            y, w_fine, w_fine - y, c1, RECORDED,
                            {"weighted_norm_coarse": w_coarse, "weighted_norm_fine": w_fine,
                             "ls_plus_l1": ls, "constant_ls": c2, "X": str(X), "Y": str(Y)},
                            flags)
