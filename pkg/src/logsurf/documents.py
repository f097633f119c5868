"""Graph documents: the on-disk JSON format, exact-rational serialization,
DOT emission and the bundled fixture corpus.

Rationals are written as strings "p/q" (or "p"); decimals are rejected
everywhere, by design.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Any

from .errors import ParseError, ValidationError, LogSurfError
from .graph import DualGraph, Edge, LogSurfaceModel, Vertex

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(text: Any, where: str = "") -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise ParseError(f"{where or 'value'}: expected an exact rational 'p/q', got {text!r}")
    return Fraction(text.strip())


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def model_from_dict(doc: dict) -> LogSurfaceModel:
    if not isinstance(doc, dict):
        raise ParseError("document root must be an object")
    try:
        raw_vertices = doc["vertices"]
        raw_edges = doc.get("edges", [])
    except KeyError as exc:
        raise ParseError(f"missing field {exc}") from None
    vertices = []
    for i, rv in enumerate(raw_vertices):
        where = f"vertices[{i}]"
        if "id" not in rv or "weight" not in rv:
            raise ParseError(f"{where}: needs 'id' and 'weight'")
        if not isinstance(rv["weight"], int):
            raise ParseError(f"{where}: weight must be an integer")
        vertices.append(
            Vertex(
                id=str(rv["id"]),
                weight=rv["weight"],
                genus=int(rv.get("genus", 0)),
                decoration=parse_rational(rv.get("decoration", 0), f"{where}.decoration"),
                boundary=parse_rational(rv.get("boundary", 0), f"{where}.boundary"),
            )
        )
    edges = []
    for i, re_ in enumerate(raw_edges):
        where = f"edges[{i}]"
        if "a" not in re_ or "b" not in re_:
            raise ParseError(f"{where}: needs 'a' and 'b'")
        edges.append(Edge(str(re_["a"]), str(re_["b"]), int(re_.get("m", 1))))
    uniform = doc.get("uniform_r")
    r = parse_rational(uniform, "uniform_r") if uniform is not None else None
    try:
        graph = DualGraph(tuple(vertices), tuple(edges))
        return LogSurfaceModel(graph, frozenset(str(c) for c in doc.get("contracted", [])), r)
    except LogSurfError:
        raise
    except Exception as exc:  # malformed in a way the graph layer reports
        raise ValidationError(str(exc)) from exc


def parse_document(text: str) -> LogSurfaceModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    return model_from_dict(doc)


def model_to_dict(model: LogSurfaceModel, name: str = "", reference: str = "") -> dict:
    doc: dict[str, Any] = {}
    if name:
        doc["name"] = name
    if reference:
        doc["reference"] = reference
    doc["vertices"] = [
        {
            "id": v.id,
            "weight": v.weight,
            "genus": v.genus,
            "decoration": format_rational(v.decoration),
            "boundary": format_rational(v.boundary),
        }
        for v in model.graph.vertices
    ]
    doc["edges"] = [{"a": e.a, "b": e.b, "m": e.mult} for e in model.graph.edges]
    doc["contracted"] = sorted(model.contracted)
    doc["uniform_r"] = (
        format_rational(model.uniform_r) if model.uniform_r is not None else None
    )
    return doc


def serialize_model(model: LogSurfaceModel, name: str = "") -> str:
    return json.dumps(model_to_dict(model, name=name), indent=2)


# ---------------------------------------------------------------------------
# DOT


def to_dot(model: LogSurfaceModel, name: str = "graph") -> str:
    """DOT text: labels show -weight, boundary vertices are double circles,
    contracted vertices are grey."""
    lines = [f'graph "{name}" {{']
    for v in model.graph.vertices:
        attrs = [f'label="{v.id}\\n{-v.weight}"']
        if v.boundary > 0:
            attrs.append("shape=doublecircle")
        else:
            attrs.append("shape=circle")
        if v.id in model.contracted:
            attrs.append('style=filled fillcolor=grey')
        if v.genus:
            attrs.append(f'xlabel="g={v.genus}"')
        lines.append(f'  "{v.id}" [{" ".join(attrs)}];')
    for e in sorted(model.graph.edges, key=lambda e: e.pair):
        for _ in range(e.mult):
            lines.append(f'  "{e.a}" -- "{e.b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# fixtures


@dataclass(frozen=True)
class FixtureDocument:
    name: str
    reference: str
    model: LogSurfaceModel
    raw: dict


FIXTURE_NAMES = (
    "peeling_fn",
    "log_terminality",
    "psi_am_order",
    "cuspidal_cubic",
    "optimal_ass_2",
    "amm_not_dlt",
    "amm_not_dlt_2",
    "partially_almost_minimal",
    "ale_r1",
    "composition_of_nef",
    "ale_2nd_type",
    "reordering1",
    "rod_3_2",
    "d4",
)


def load_fixture(name: str) -> FixtureDocument:
    try:
        text = resources.files("logsurf.fixtures").joinpath(f"{name}.json").read_text()
    except FileNotFoundError:
        raise ParseError(f"no bundled fixture named {name!r}") from None
    raw = json.loads(text)
    return FixtureDocument(
        name=raw.get("name", name),
        reference=raw.get("reference", ""),
        model=model_from_dict(raw),
        raw=raw,
    )


def fixture_corpus() -> list[FixtureDocument]:
    """All bundled fixtures; each parses to a valid model."""
    return [load_fixture(n) for n in FIXTURE_NAMES]
