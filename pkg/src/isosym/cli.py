"""Command-line front end.

    isosym profile   --r 2 --grid 64 --out profile.csv
    isosym verify    --r 2 --dim 2 --points 100000 --seed 7 --out report.json
    isosym oracle    --in space.json --out oracle.json
    isosym rearrange --in f.csv --out fstar.csv
    isosym norms     --in f.csv --norm Lp:2 --norm Linf
    isosym sample    --r 1.5 --dim 2 --points 1000 --function half_line:0.01 --out f.csv

Exit codes: 0 success, 1 a checker failed beyond its statistical allowance,
2 invalid input (bad flags, unreadable files, size limits).
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import io as iox
from .discrete_oracle import continuum_crosscheck, iso_profile_bruteforce
from .inequality_suite import (Tolerance, check_concentration, check_hardy_condition,
                               check_ledoux, check_linfty_embedding, check_lp_loglq, check_main,
                               check_perdida_and_harhar, check_poincare_median,
                               check_polya_szego, check_ls_poincare, check_talenti_mazya)
from .iso_profiles import power_testers
from .model_measures import ModelMeasure, asymptotic_profile, iso_profile, profile_grid
from .rearrangement import rearrange
from .ri_norms import RINormSpec, ls_norm, norm, parse_norm
from . import testfunctions as tfl

__all__ = ["RunConfig", "main", "build_parser", "parse_function"]

DEFAULT_NORMS = ("L1", "Lp:2", "Linf")


@dataclass
class RunConfig:
    command: str
    r: float = 2.0
    dim: int = 1
    points: int = 100_000
    seed: int = 7
    grid: int = 4096
    rel_tol: float = 1e-3
    abs_tol: float = 1e-9
    norms: List[str] = field(default_factory=list)
    inputs: List[str] = field(default_factory=list)
    out: Optional[str] = None
    function: Optional[str] = None
    buckets: int = 64

    def validate(self) -> None:
        if not 1.0 <= self.r <= 2.0:
            raise ValueError(f"--r must lie in [1, 2], got {self.r}")
        if self.dim < 1:
            raise ValueError(f"--dim must be at least 1, got {self.dim}")
        if self.points < 1:
            raise ValueError(f"--points must be at least 1, got {self.points}")
        if self.grid < 16:
            raise ValueError(f"--grid must be at least 16, got {self.grid}")
        if self.rel_tol < 0 or self.abs_tol < 0:
            raise ValueError("tolerances must be non-negative")
        if self.buckets < 1:
            raise ValueError("--buckets must be positive")
        for n in self.norms:
            parse_norm(n)

    @property
    def norm_specs(self):
        return [parse_norm(n) for n in (self.norms or DEFAULT_NORMS)]

    @property
    def tolerance(self) -> Tolerance:
        return Tolerance(rel_tol=self.rel_tol, abs_tol=self.abs_tol)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=float, default=2.0, help="exponent of mu_r, in [1, 2]")
    common.add_argument("--dim", type=int, default=1, help="dimension n of the product measure")
    common.add_argument("--points", type=int, default=100_000, help="Monte Carlo sample size")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--grid", type=int, default=4096, help="evaluation grid size (>= 16)")
    common.add_argument("--rel-tol", type=float, default=1e-3)
    common.add_argument("--abs-tol", type=float, default=1e-9)
    common.add_argument("--norm", action="append", default=[], dest="norms",
                        help='norm spec such as "Lp:2", "Lorentz:2,1", "LpLogL:2,0.5", "Linf", "L1"')
    common.add_argument("--in", action="append", default=[], dest="inputs", metavar="PATH",
                        help="input file (repeatable for verify)")
    common.add_argument("--out", default=None, metavar="PATH", help="output file (default: stdout)")

    p = argparse.ArgumentParser(prog="isosym", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("profile", parents=[common], help="tabulate I, its small-t asymptote and their ratio")
    sub.add_parser("verify", parents=[common], help="run every checker over the test family")
    o = sub.add_parser("oracle", parents=[common], help="brute-force profile of a finite space")
    o.add_argument("--buckets", type=int, default=64)
    sub.add_parser("rearrange", parents=[common], help="decreasing rearrangement as (s, v) CSV")
    sub.add_parser("norms", parents=[common], help="r.i. norms and LS(X) functionals")
    s = sub.add_parser("sample", parents=[common], help="draw points, optionally evaluate a test function")
    s.add_argument("--function", default=None,
                   help="x1, x<k>, diagonal, half_line:<eps>, ramp, bump, quadratic:<seed>, constant:<c>")
    return p


def parse_function(text: str, dim: int) -> tfl.TestFunction:
    name, _, arg = text.partition(":")
    if name.startswith("x") and name[1:].isdigit():
        k = int(name[1:])
        if not 1 <= k <= dim:
            raise ValueError(f"coordinate {name} out of range for dimension {dim}")
        return tfl.coordinate(k - 1)
    table = {
        "diagonal": lambda: tfl.diagonal(),
        "half_line": lambda: tfl.smoothed_half_line(float(arg or 0.01)),
        "ramp": lambda: tfl.clamped_ramp(float(arg or 1.0)),
        "bump": lambda: tfl.radial_bump(),
        "quadratic": lambda: tfl.clamped_quadratic(dim, seed=int(arg or 0)),
        "constant": lambda: tfl.constant(float(arg or 1.0)),
    }
    if name not in table:
        raise ValueError(f"unknown test function {text!r}")
    return table[name]()


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        iox.write_text(out, text)


# ---------------------------------------------------------------- commands

def cmd_profile(cfg: RunConfig) -> int:
    m = ModelMeasure(cfg.r)
    prof = iso_profile(m)
    t = profile_grid(cfg.grid, 1e-12)
    asym = None if m.r == 1.0 else (lambda p: asymptotic_profile(m, p))
    rows = iox.profile_rows(prof, t, asym)
    _emit(iox.write_rows_csv(["t", "I", "asymptotic", "ratio"], rows), cfg.out)
    return 0


def _checker_runs(f, m: ModelMeasure, prof, cfg: RunConfig):
    tol = cfg.tolerance
    reps = [
        check_ledoux(f, prof, tol),
        check_talenti_mazya(f, prof, tol),
        check_polya_szego(f, prof, tol, grid=cfg.grid),
        check_main(f, prof, tol, grid=cfg.grid),
        check_poincare_median(f, prof, tol),
    ]
    reps += [check_ls_poincare(f, prof, X, tol, grid=cfg.grid) for X in cfg.norm_specs]
    if m.r > 1.0:
        reps.append(check_lp_loglq(f, m, 2.0))
        reps.append(check_linfty_embedding(f, m))
        if np.max(f.grads) > 0 or np.ptp(f.values) == 0:
            reps.append(check_concentration(f, m, grid=cfg.grid))
        reps.append(check_perdida_and_harhar(f, prof, RINormSpec.Lp(2.0),
                                             RINormSpec.LpLogL(2.0, 1.0 / m.q), grid=cfg.grid))
    return reps


def cmd_verify(cfg: RunConfig) -> int:
    m = ModelMeasure(cfg.r, cfg.dim)
    prof = iso_profile(m)
    cases = []
    if cfg.inputs:
        for path in cfg.inputs:
            cases.append((Path(path).stem, iox.read_sampled(path)))
    else:
        pts, w = tfl.sample_points(cfg.r, cfg.dim, cfg.points, cfg.seed)
        for tf in tfl.default_family(cfg.dim):
            cases.append((tf.name, tfl.sampled(tf, pts, w)))
    records = []
    for name, f in cases:
        for rep in _checker_runs(f, m, prof, cfg):
            records.append((name, rep))
    if cfg.r > 1.0:
        hardy = check_hardy_condition(prof, RINormSpec.Lp(2.0), RINormSpec.LpLogL(2.0, 1.0 / m.q),
                                      power_testers(2.0), grid=min(cfg.grid, 1024))
        records.append(("profile", hardy))
    records.sort(key=lambda nr: (nr[0], nr[1].name))
    payload = {
        "command": "verify",
        "config": {"r": cfg.r, "dim": cfg.dim, "points": cfg.points, "seed": cfg.seed,
                   "grid": cfg.grid, "rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol,
                   "norms": [str(s) for s in cfg.norm_specs],
                   "inputs": [Path(p).name for p in cfg.inputs]},
        "reports": [{"function": name, "r": cfg.r, "n": cfg.dim, **rep.to_dict()}
                    for name, rep in records],
    }
    csv_text = iox.write_rows_csv(
        ["checker", "function", "r", "n", "realized_constant", "status"],
        [(rep.name, name, cfg.r, cfg.dim, rep.realized_constant, rep.status)
         for name, rep in records])
    _emit(iox.dumps_json(payload), cfg.out)
    if cfg.out is not None:
        iox.write_text(str(Path(cfg.out).with_suffix(".csv")), csv_text)
    failed = [f"{name}:{rep.name}" for name, rep in records if rep.hard_failure]
    if failed:
        print("hard failures: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


def cmd_oracle(cfg: RunConfig) -> int:
    if len(cfg.inputs) != 1:
        raise ValueError("oracle needs exactly one --in space file")
    sp = iox.read_space(cfg.inputs[0])
    rows = iso_profile_bruteforce(sp, cfg.buckets)
    payload = {"command": "oracle", "size": sp.size, "h": sp.h, "buckets": cfg.buckets,
               "perimeter": "closed h-neighbourhood surrogate (mu(A^h) - mu(A)) / h",
               "profile": rows}
    grid = sp.tags.get("grid")
    if grid is not None:
        prof = iso_profile(ModelMeasure(float(grid["r"])))
        cc = continuum_crosscheck(rows, prof, float(sp.weights.min()))
        payload["crosscheck"] = [
            {"bucket": b, "measure": mm, "perimeter": p, "continuum": ref, "ratio": ratio}
            for b, mm, p, ref, ratio in cc]
        payload["max_relative_deviation"] = max((abs(c[4] - 1.0) for c in cc), default=0.0)
    _emit(iox.dumps_json(payload), cfg.out)
    return 0


def cmd_rearrange(cfg: RunConfig) -> int:
    if len(cfg.inputs) != 1:
        raise ValueError("rearrange needs exactly one --in file")
    q = rearrange(iox.read_sampled(cfg.inputs[0]))
    _emit(iox.write_quantile_csv(q), cfg.out)
    return 0


def cmd_norms(cfg: RunConfig) -> int:
    if len(cfg.inputs) != 1:
        raise ValueError("norms needs exactly one --in file")
    f = iox.read_sampled(cfg.inputs[0])
    q = rearrange(f)
    prof = iso_profile(ModelMeasure(cfg.r))
    rows = [(str(X), norm(X, q), ls_norm(X, f, prof, grid=cfg.grid)) for X in cfg.norm_specs]
    _emit(iox.write_rows_csv(["norm", "value", "ls_value"], rows), cfg.out)
    return 0


def cmd_sample(cfg: RunConfig) -> int:
    pts, w = tfl.sample_points(cfg.r, cfg.dim, cfg.points, cfg.seed)
    if cfg.function:
        f = tfl.sampled(parse_function(cfg.function, cfg.dim), pts, w)
        text = iox.write_rows_csv(["value", "grad", "weight"], zip(f.values, f.grads, f.weights))
    else:
        header = [f"x{k + 1}" for k in range(cfg.dim)] + ["weight"]
        text = iox.write_rows_csv(header, (tuple(p) + (wi,) for p, wi in zip(pts, w)))
    _emit(text, cfg.out)
    return 0


COMMANDS = {
    "profile": cmd_profile,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "rearrange": cmd_rearrange,
    "norms": cmd_norms,
    "sample": cmd_sample,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(command=args.command, r=args.r, dim=args.dim, points=args.points,
                    seed=args.seed, grid=args.grid, rel_tol=args.rel_tol, abs_tol=args.abs_tol,
                    norms=list(args.norms), inputs=list(args.inputs), out=args.out,
                    function=getattr(args, "function", None),
                    buckets=getattr(args, "buckets", 64))
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except (ValueError, OSError, KeyError) as exc:
        print(f"isosym {cfg.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
