"""Readers and writers for sampled functions, step functions, profiles and
finite metric spaces.  CSV uses '.' decimals and ``repr`` floats, so a
write/read round trip is exact; JSON is written with sorted keys and no
timestamps, so equal inputs give byte-identical files."""

from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

from .discrete_oracle import DiscreteMetricSpace
from .rearrangement import QuantileFunction, SampledFunction

__all__ = [
    "SCHEMA",
    "read_sampled",
    "write_sampled",
    "read_quantile_csv",
    "write_quantile_csv",
    "profile_rows",
    "write_rows_csv",
    "write_qi_csv",
    "read_space",
    "write_space",
    "dumps_json",
    "write_text",
]

SCHEMA = 1
PathLike = Union[str, Path]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


def write_rows_csv(header, rows: Iterable, path: Optional[PathLike] = None) -> str:
    """Write rows with ``header``; returns the CSV text (also written to
    ``path`` when given)."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    text = buf.getvalue()
    if path is not None:
        write_text(path, text)
    return text


def write_text(path: PathLike, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc


def dumps_json(obj) -> str:
    """Deterministic JSON with the schema tag added to top-level objects."""
    if isinstance(obj, dict) and "schema" not in obj:
        obj = {"schema": SCHEMA, **obj}
    return json.dumps(_clean(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_clean(v) for v in x.tolist()]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


# ---------------------------------------------------------------- sampled functions

def read_sampled(path: PathLike) -> SampledFunction:
    """Load a :class:`SampledFunction` from CSV (columns ``value, grad[, weight]``)
    or JSON (``{"values", "grads"[, "weights"]}`` or a list of records).
    Missing weights mean equal weights."""
    path = Path(path)
    text = _read_text(path)
    if path.suffix.lower() == ".json":
        data = json.loads(text)
        if isinstance(data, list):
            values = [rec["value"] for rec in data]
            grads = [rec["grad"] for rec in data]
            weights = [rec["weight"] for rec in data] if data and "weight" in data[0] else None
        else:
            values, grads = data["values"], data["grads"]
            weights = data.get("weights")
    else:
        reader = csv.DictReader(_io.StringIO(text))
        fields = [f.strip() for f in (reader.fieldnames or [])]
        if "value" not in fields or "grad" not in fields:
            raise ValueError(f"{path}: CSV needs 'value' and 'grad' columns, got {fields}")
        rows = [{k.strip(): v for k, v in row.items()} for row in reader]
        values = [float(r["value"]) for r in rows]
        grads = [float(r["grad"]) for r in rows]
        weights = [float(r["weight"]) for r in rows] if "weight" in fields else None
    if weights is None:
        return SampledFunction.uniform(values, grads)
    return SampledFunction(values, grads, weights)


def write_sampled(f: SampledFunction, path: PathLike) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        write_text(path, dumps_json({"values": f.values, "grads": f.grads, "weights": f.weights}))
    else:
        write_rows_csv(["value", "grad", "weight"], zip(f.values, f.grads, f.weights), path)


# ---------------------------------------------------------------- step functions

def write_quantile_csv(q: QuantileFunction, path: Optional[PathLike] = None) -> str:
    """Rows ``(s, v)``: each left break with the value taken from there on,
    then the last break with value 0."""
    rows = list(zip(q.breaks[:-1], q.values)) + [(q.breaks[-1], 0.0)]
    return write_rows_csv(["s", "v"], rows, path)


def read_quantile_csv(path: PathLike) -> QuantileFunction:
    rows = list(csv.DictReader(_io.StringIO(_read_text(path))))
    s = np.array([float(r["s"]) for r in rows])
    v = np.array([float(r["v"]) for r in rows])
    return QuantileFunction(s, v[:-1])


def profile_rows(profile, t, asymptotic=None):
    """``(t, I(t), asymptotic(t), ratio)`` rows; the asymptotic curve is
    evaluated at ``min(t, 1 - t)`` and left empty where it is undefined."""
    t = np.asarray(t, dtype=float)
    vals = profile(t)
    rows = []
    for ti, vi in zip(t, vals):
        a = None
        p = min(ti, 1.0 - ti)
        if asymptotic is not None and 0.0 < p < 0.5:
            a = float(asymptotic(p))
        ratio = vi / a if a else None
        rows.append((float(ti), float(vi), a, ratio))
    return rows


def write_qi_csv(t, values, path: Optional[PathLike] = None) -> str:
    return write_rows_csv(["t", "Q_I f(t)"], zip(np.asarray(t, float), np.asarray(values, float)),
                          path)


# ---------------------------------------------------------------- spaces

def read_space(path: PathLike) -> DiscreteMetricSpace:
    """Load ``{"weights", "h", "dist" | "coords" | "points"[, "grid"]}``.

    ``points`` is accepted as an alias for 1-D ``coords`` when it holds
    numbers; ``grid`` (a dict with ``r``) tags a discretization of ``mu_r``.
    """
    data = json.loads(_read_text(path))
    weights = np.asarray(data["weights"], dtype=float)
    dist = data.get("dist")
    coords = data.get("coords")
    if dist is None and coords is None and "points" in data:
        coords = data["points"]
    tags = {}
    if "grid" in data:
        tags["grid"] = data["grid"]
    return DiscreteMetricSpace(weights=weights, h=float(data["h"]),
                               dist=None if dist is None else np.asarray(dist, dtype=float),
                               coords=None if coords is None else np.asarray(coords, dtype=float),
                               tags=tags)


def write_space(sp: DiscreteMetricSpace, path: PathLike) -> None:
    out = {"weights": sp.weights, "h": sp.h}
    if sp.dist is not None:
        out["dist"] = sp.dist
    else:
        c = sp.coords
        out["coords"] = c[:, 0] if c.shape[1] == 1 else c
    if "grid" in sp.tags:
        out["grid"] = sp.tags["grid"]
    write_text(path, dumps_json(out))
