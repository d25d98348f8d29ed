"""Curve files, report serialization and deterministic formatting.

Curve files are JSON with either an analytic block (three expression
strings plus a domain) or a sampled block (parameter and point arrays).
All reals are rendered with 17 significant digits so that repeated runs
produce byte-identical artifacts.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .curves import AnalyticCurve, Curve, JetBackedCurve, SampledCurve
from .errors import BertrandKitError

SCHEMA_VERSION = 1
TOOL_VERSION = "bertrand-kit 1.0.0"


class CurveFileError(BertrandKitError):
    """Malformed curve file."""


def fmt(x) -> str:
    """Fixed 17-significant-digit decimal rendering of a real."""
    return format(float(x), ".17g")


def _serialize(obj, out):
    """Minimal deterministic JSON emitter; floats go through ``fmt``."""
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(fmt(obj) if np.isfinite(obj) else "null")
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(k)))
            out.append(": ")
            _serialize(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        items = obj.tolist() if isinstance(obj, np.ndarray) else obj
        for i, v in enumerate(items):
            if i:
                out.append(", ")
            _serialize(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    out = []
    _serialize(obj, out)
    return "".join(out)


# ---------------------------------------------------------------------------
# curve files


def curve_to_dict(curve: Curve) -> dict:
    d = {"schema_version": SCHEMA_VERSION, "label": curve.label or ""}
    if isinstance(curve, AnalyticCurve):
        d["type"] = "analytic"
        d["analytic"] = {
            "x": ex.to_text(curve.x),
            "y": ex.to_text(curve.y),
            "z": ex.to_text(curve.z),
            "domain": [curve.domain[0], curve.domain[1]],
        }
    elif isinstance(curve, (SampledCurve, JetBackedCurve)):
        d["type"] = "sampled"
        d["sampled"] = {
            "t": list(curve.params),
            "points": [list(p) for p in curve.points],
        }
        meta = getattr(curve, "metadata", None)
        if meta:
            d["metadata"] = {
                k: v for k, v in meta.items() if isinstance(v, (str, int, float))
            }
    else:
        raise CurveFileError(f"cannot serialize curve type {type(curve).__name__}")
    return d


def _rebuild_from_metadata(meta):
    """Exact jet-backed curve from a recorded generator recipe, or None.

    Sampled files written by the generator carry enough metadata to rerun
    it, which restores exact differentiation after a round trip instead
    of falling back to finite-difference stencils.
    """
    if not isinstance(meta, dict):
        return None
    from . import bertrand as bt

    try:
        gen = meta.get("generator")
        if gen == "bertrand" and meta.get("seed_label") in bt.SPHERE_PRESETS:
            return bt.generate_bertrand_curve(
                bt.sphere_preset(meta["seed_label"]),
                a=float(meta["a"]),
                omega=float(meta["omega"]),
                n=int(meta["n"]),
            )
        if (
            gen == "normal-offset"
            and meta.get("base_generator") == "bertrand"
            and meta.get("seed_label") in bt.SPHERE_PRESETS
        ):
            base = bt.generate_bertrand_curve(
                bt.sphere_preset(meta["seed_label"]),
                a=float(meta["a"]),
                omega=float(meta["omega"]),
                n=int(meta["base_n"]),
            )
            return bt.construct_mate(base, float(meta["lambda"]), n=int(meta["n"]))
    except (KeyError, TypeError, ValueError):
        return None
    return None


def curve_from_dict(d: dict) -> Curve:
    if not isinstance(d, dict) or "type" not in d:
        raise CurveFileError("curve file must be an object with a 'type' field")
    label = d.get("label", "")
    kind = d["type"]
    if kind == "analytic":
        block = d.get("analytic")
        if not block:
            raise CurveFileError("analytic curve file missing 'analytic' block")
        try:
            dom = block["domain"]
            return AnalyticCurve(block["x"], block["y"], block["z"],
                                 (float(dom[0]), float(dom[1])), label=label)
        except (KeyError, IndexError, TypeError) as e:
            raise CurveFileError(f"bad analytic block: {e}")
    if kind == "sampled":
        block = d.get("sampled")
        if not block:
            raise CurveFileError("sampled curve file missing 'sampled' block")
        try:
            t = np.asarray(block["t"], dtype=float)
            pts = np.asarray(block["points"], dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise CurveFileError(f"bad sampled block: {e}")
        if pts.ndim != 2 or pts.shape != (len(t), 3):
            raise CurveFileError("sampled arrays must be t:(n,), points:(n,3)")
        rebuilt = _rebuild_from_metadata(d.get("metadata"))
        if rebuilt is not None:
            return rebuilt
        try:
            return SampledCurve(t, pts, label=label)
        except ValueError as e:
            raise CurveFileError(str(e))
    raise CurveFileError(f"unknown curve type {kind!r}")


def save_curve(curve: Curve, path: str):
    with open(path, "w") as fh:
        fh.write(dumps(curve_to_dict(curve)))
        fh.write("\n")


def load_curve(path: str) -> Curve:
    try:
        with open(path) as fh:
            d = json.load(fh)
    except json.JSONDecodeError as e:
        raise CurveFileError(f"{path}: {e}")
    return curve_from_dict(d)


def file_hash(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


# ---------------------------------------------------------------------------
# run reports


@dataclass
class RunReport:
    command: str
    inputs: dict = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    masked_intervals: list = field(default_factory=list)
    tool_version: str = TOOL_VERSION

    def to_json(self) -> str:
        return dumps(
            {
                "command": self.command,
                "inputs": self.inputs,
                "parameters": self.parameters,
                "results": self.results,
                "masked_intervals": self.masked_intervals,
                "tool_version": self.tool_version,
            }
        )


def masked_intervals_from_flags(ts, masked) -> list:
    """Contiguous [t_lo, t_hi] runs of masked grid points (may be empty)."""
    runs = []
    start = None
    for i, flag in enumerate(masked):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append([float(ts[start]), float(ts[i - 1])])
            start = None
    if start is not None:
        runs.append([float(ts[start]), float(ts[-1])])
    return runs


def write_csv(path, header, rows):
    """CSV with 17-significant-digit reals; strings pass through."""
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    v if isinstance(v, str) else fmt(v) for v in row
                )
            )
            fh.write("\n")
