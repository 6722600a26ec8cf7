"""JSON file formats for spaces and covers, and byte-stable JSON output."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .covers import Cover, CoverElement, ParametricBallFamily
from .space import FiniteMetricSpace, MetricError, build_space_from_matrix, build_space_from_points


class InputError(ValueError):
    """Malformed input file (as opposed to a well-formed file describing a non-metric)."""


def _read(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    return data


def space_from_dict(data: dict) -> FiniteMetricSpace:
    """Build a space from ``{"labels", "matrix"}`` or ``{"points", "metric"}``.

    Raises InputError for structural problems and MetricError (from the
    builders) when the distances violate the axioms.
    """
    tol = data.get("axiom_tol")
    if tol is not None and not isinstance(tol, (int, float)):
        raise InputError("axiom_tol must be a number")
    try:
        if "matrix" in data:
            matrix = data["matrix"]
            labels = data.get("labels") or [str(i) for i in range(len(matrix))]
            if not all(isinstance(row, list) and len(row) == len(matrix) for row in matrix):
                raise InputError("matrix must be a square list of lists")
            return build_space_from_matrix(labels, matrix, tol)
        if "points" in data:
            return build_space_from_points(data["points"], data.get("metric", "euclidean"), tol, data.get("labels"))
    except MetricError:
        raise
    except (TypeError, IndexError) as exc:
        raise InputError(f"malformed space: {exc}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    raise InputError('space file needs either "matrix" or "points"')


def load_space(path: str | Path) -> FiniteMetricSpace:
    return space_from_dict(_read(path))


def cover_from_dict(data: dict) -> Cover:
    try:
        elements = []
        for el in data.get("elements", []):
            kind = el["kind"]
            if kind == "ball":
                elements.append(CoverElement.ball(el["center"], el["radius"], el.get("label"), el.get("open", True)))
            elif kind == "explicit":
                elements.append(CoverElement.explicit(el["points"], el.get("label")))
            elif kind == "complement":
                elements.append(CoverElement.complement(el["points"], el.get("label")))
            else:
                raise InputError(f"unknown cover element kind {kind!r}")
        families = []
        for k, fam in enumerate(data.get("families", [])):
            radius = fam.get("radius", {})
            families.append(ParametricBallFamily(
                int(fam["range"]), tuple(int(c) for c in fam["centers"]),
                radius.get("type", "harmonic"), float(radius.get("c", 1.0)), fam.get("label", f"F{k}")))
        target = data.get("target")
        return Cover(tuple(elements), tuple(families), None if target is None else tuple(sorted(set(target))))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed cover: {exc!r}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cover_to_dict(cover: Cover) -> dict:
    elements = []
    for el in cover.elements:
        if el.kind == "ball":
            elements.append({"kind": "ball", "center": el.center, "radius": el.radius, "open": el.open,
                             "label": el.label})
        else:
            elements.append({"kind": el.kind, "points": list(el.points), "label": el.label})
    families = [{"range": f.N, "centers": list(f.centers[: f.N]), "label": f.label,
                 "radius": {"type": f.radius_formula, "c": f.c}} for f in cover.families]
    out = {"elements": elements, "families": families}
    if cover.target is not None:
        out["target"] = list(cover.target)
    return out


def load_cover(path: str | Path) -> Cover:
    return cover_from_dict(_read(path))


def _number(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    text = "%.17g" % x
    # keep floats recognisable as floats so readers round-trip the type too
    return text if any(c in text for c in ".en") else text + ".0"


def dumps(obj: Any, indent: int = 2) -> str:
    """Key-sorted JSON with floats at 17 significant digits and non-finite floats as strings."""

    def enc(o: Any, level: int) -> str:
        pad = "\n" + " " * (indent * (level + 1))
        end = "\n" + " " * (indent * level)
        if o is None or isinstance(o, bool):
            return json.dumps(o)
        if isinstance(o, int):
            return str(o)
        if isinstance(o, float):
            return _number(o)
        if hasattr(o, "item") and not isinstance(o, (list, tuple, dict, str)):  # numpy scalars
            return enc(o.item(), level)
        if isinstance(o, str):
            return json.dumps(o, ensure_ascii=False)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = sorted(((str(k), v) for k, v in o.items()), key=lambda kv: kv[0])
            body = ("," + pad).join(f"{json.dumps(k, ensure_ascii=False)}: {enc(v, level + 1)}" for k, v in items)
            return "{" + pad + body + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            if all(isinstance(v, (int, float, str, bool)) or v is None for v in o):
                return "[" + ", ".join(enc(v, level + 1) for v in o) + "]"
            return "[" + pad + ("," + pad).join(enc(v, level + 1) for v in o) + end + "]"
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return enc(obj, 0)
