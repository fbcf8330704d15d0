"""Reading and writing the JSON and text file formats."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .cohomology import PiecewiseElement
from .linalg import format_rational, parse_rational
from .polytope import Facet, LatticePolytope, from_description
from .symbolic import parse


class FormatError(ValueError):
    pass


def format_point(p) -> list:
    return [format_rational(x) for x in p]


def point_str(p) -> str:
    return "(" + ",".join(format_rational(x) for x in p) + ")"


def _rat(x, where):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise FormatError(f"{where}: expected a rational string")
    try:
        q = parse_rational(x)
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from exc
    if isinstance(x, str) and "/" in x and format_rational(q) != x.strip():
        raise FormatError(f"{where}: rational {x!r} is not in lowest terms")
    return q


def polytope_from_dict(data: dict) -> LatticePolytope:
    if not isinstance(data, dict):
        raise FormatError("polytope file must hold a JSON object")
    try:
        n = data["ambient_dim"]
        raw_vertices = data["vertices"]
    except KeyError as exc:
        raise FormatError(f"missing field {exc.args[0]!r}") from exc
    if not isinstance(n, int) or n < 1:
        raise FormatError("ambient_dim must be a positive integer")
    vertices = []
    for i, v in enumerate(raw_vertices):
        if not isinstance(v, list) or len(v) != n:
            raise FormatError(f"vertex {i} must have {n} coordinates")
        vertices.append(tuple(_rat(x, f"vertex {i}") for x in v))
    facets = None
    if "facets" in data:
        facets = []
        for i, f in enumerate(data["facets"]):
            normal = f.get("normal") if isinstance(f, dict) else None
            if not isinstance(normal, list) or len(normal) != n or not all(
                isinstance(c, int) and not isinstance(c, bool) for c in normal
            ):
                raise FormatError(f"facet {i}: normal must be {n} integers")
            facets.append(Facet(tuple(normal), _rat(f.get("offset"), f"facet {i} offset")))
    try:
        return from_description(vertices, facets, name=str(data.get("name", "")))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def polytope_to_dict(P: LatticePolytope) -> dict:
    return {
        "name": P.name,
        "ambient_dim": P.ambient_dim,
        "vertices": [format_point(v) for v in P.vertices],
        "facets": [{"normal": list(f.normal), "offset": format_rational(f.offset)} for f in P.facets],
    }


def load_polytope(path) -> LatticePolytope:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg})") from exc
    return polytope_from_dict(data)


def element_from_dict(data: dict, num_vertices: int | None = None) -> PiecewiseElement:
    try:
        theory = data["theory"]
        ring = data.get("ring", "Q")
        variables = data["variables"]
        assignments = data["assignments"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"element file missing field {exc}") from exc
    if theory not in ("H", "K") or ring not in ("Q", "Z"):
        raise FormatError("theory must be H or K and ring Q or Z")
    if num_vertices is None:
        num_vertices = len(assignments)
    keys = set(assignments)
    if keys != {str(i) for i in range(num_vertices)}:
        raise FormatError(f"assignments must cover vertex indices 0..{num_vertices - 1} exactly")
    values = []
    for i in range(num_vertices):
        text = assignments[str(i)]
        try:
            values.append(parse(text, variables, laurent=theory == "K"))
        except ValueError as exc:
            raise FormatError(f"vertex {i}: {exc}") from exc
    multipliers = {}
    for key, m in data.get("edge_multipliers", {}).items():
        try:
            v, w = sorted(int(x) for x in key.split(","))
        except ValueError as exc:
            raise FormatError(f"bad edge key {key!r}") from exc
        multipliers[(v, w)] = int(m)
    try:
        return PiecewiseElement(theory, ring, tuple(values), multipliers)
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc)) from exc


def element_to_dict(x: PiecewiseElement, variables=None) -> dict:
    n = x.assignments[0].num_vars if x.assignments else 0
    prefix = "u" if x.theory == "H" else "t"
    variables = list(variables or [f"{prefix}{i + 1}" for i in range(n)])
    out = {
        "theory": x.theory,
        "ring": x.ring,
        "variables": variables,
        "assignments": {str(i): p.to_string(variables) for i, p in enumerate(x.assignments)},
    }
    if x.edge_multipliers:
        out["edge_multipliers"] = {f"{v},{w}": m for (v, w), m in x.edge_multipliers.items()}
    return out


def load_element(path, num_vertices: int | None = None) -> PiecewiseElement:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg})") from exc
    return element_from_dict(data, num_vertices)


# ---------------------------------------------------------------------------
# bundled corpus


def corpus_path(name: str):
    """Path of a bundled data file, e.g. ``corpus_path("gz3.json")``."""
    return resources.files("toricstrata") / "data" / name


def corpus(name: str) -> LatticePolytope:
    """Load a bundled polytope by stem, e.g. ``corpus("gz3")``."""
    return load_polytope(corpus_path(f"{name}.json"))


def corpus_element(name: str, num_vertices: int | None = None) -> PiecewiseElement:
    return load_element(corpus_path(f"{name}.json"), num_vertices)
