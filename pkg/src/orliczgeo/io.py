"""JSON encoding of bodies, Orlicz functions and reports; atomic file output."""

from __future__ import annotations

import csv
import io as _stdio
import json
import os
import re
import tempfile
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .bodies import Ball, ConvexBody, Ellipsoid, HPolytope, SmoothSampled, StarBody, VPolytope
from .errors import OrliczError, ParseError
from .orlicz import OrliczFunction
from .spheregrid import SphereGrid


def body_to_dict(body) -> dict:
    if isinstance(body, VPolytope):
        return {"kind": "vpolytope", "vertices": body.vertices.tolist()}
    if isinstance(body, HPolytope):
        return {"kind": "hpolytope", "normals": body.normals.tolist(),
                "offsets": body.offsets.tolist()}
    if isinstance(body, Ball):
        d = {"kind": "ball", "r": float(body.radius)}
        if body.dim != 2:
            d["dim"] = int(body.dim)
        return d
    if isinstance(body, Ellipsoid):
        return {"kind": "ellipsoid", "matrix": body.matrix.tolist()}
    if isinstance(body, SmoothSampled):
        d = {"kind": "smooth", "grid": body.grid.to_dict(), "h": body.h.tolist()}
        if body.f is not None:
            d["f"] = body.f.tolist()
        return d
    if isinstance(body, StarBody):
        return {"kind": "star", "grid": body.grid.to_dict(), "rho": body.rho.tolist()}
    raise ParseError(f"cannot encode {type(body).__name__}")


def body_from_dict(data: dict) -> Union[ConvexBody, StarBody]:
    if not isinstance(data, dict) or "kind" not in data:
        raise ParseError("body JSON must be an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == "vpolytope":
            return VPolytope(np.array(data["vertices"], dtype=float))
        if kind == "hpolytope":
            return HPolytope(np.array(data["normals"], dtype=float),
                             np.array(data["offsets"], dtype=float))
        if kind == "ball":
            return Ball(float(data.get("r", data.get("radius", 1.0))), int(data.get("dim", 2)))
        if kind == "ellipsoid":
            return Ellipsoid(np.array(data["matrix"], dtype=float))
        if kind == "smooth":
            f = data.get("f")
            return SmoothSampled(SphereGrid.from_dict(data["grid"]),
                                 np.array(data["h"], dtype=float),
                                 None if f is None else np.array(f, dtype=float))
        if kind == "star":
            return StarBody(SphereGrid.from_dict(data["grid"]), np.array(data["rho"], dtype=float))
    except OrliczError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad {kind} body: {exc}") from exc
    raise ParseError(f"unknown body kind {kind!r}")


def load_body(path) -> Union[ConvexBody, StarBody]:
    return body_from_dict(_read_json(path))


_SPEC = re.compile(r"^\s*([a-z_0-9]+)\s*(?:\(\s*([^)]*?)\s*\))?\s*$")


def parse_phi(spec: str, dim: Optional[int] = None) -> OrliczFunction:
    """Parse ``power(2)``, ``constant(3)``, ``log1p_inv_n``, inline JSON or a JSON file."""
    text = spec.strip()
    if text.startswith("{"):
        try:
            return OrliczFunction.from_dict(json.loads(text), dim)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad phi JSON: {exc}") from exc
    m = _SPEC.match(text)
    if m is None or (m.group(2) is None and os.path.exists(text)):
        if os.path.exists(text):
            return OrliczFunction.from_dict(_read_json(text), dim)
        raise ParseError(f"cannot parse phi spec {spec!r}")
    name, arg = m.group(1), m.group(2)
    d = dim if dim is not None else 2
    try:
        if name == "power":
            return OrliczFunction.power(float(arg), d)
        if name == "constant":
            return OrliczFunction.constant(float(arg), d)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{name} needs a numeric argument: {spec!r}") from exc
    if arg:
        raise ParseError(f"{name} takes no argument")
    return OrliczFunction.from_dict({"kind": name}, d)


def phi_to_dict(phi: OrliczFunction) -> dict:
    return phi.to_dict()


def _read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ParseError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg})") from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False, default=_default) + "\n"


def _default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"{type(o).__name__} is not JSON serializable")


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = _stdio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def write_atomic(path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
