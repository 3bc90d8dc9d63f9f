"""JSON reading and writing of fibre descriptors.

Integers travel as decimal strings; field elements as lists of decimal
strings (coefficients in the residue field's polynomial basis, constant term
first).  Unknown keys are rejected.
"""

from __future__ import annotations

import json
from typing import Any

import jsonschema

from . import ff
from .dualgraph import DualGraph, GraphAut, GraphError, sorted_ids, validate
from .fibre import (Component, CoordTwist, FibreDescriptor, FibreError, ProjectiveLine, SemilinearElt,
                    TraceTable, WeierstrassModel, validate_descriptor)

_INT = {"type": "string", "pattern": r"^-?[0-9]+$"}
_NAT = {"type": "string", "pattern": r"^[0-9]+$"}
_ID = {"type": "string", "pattern": r"^[^*\s]+$"}
_ELEM = {"type": "array", "items": _INT, "minItems": 1}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["residue_field", "components", "graph", "elements", "frobenius", "composition"],
    "properties": {
        "residue_field": {
            "type": "object", "additionalProperties": False, "required": ["p", "n0"],
            "properties": {"p": _NAT, "n0": _NAT},
        },
        "components": {
            "type": "array",
            "items": {
                "type": "object", "additionalProperties": False, "required": ["id", "genus", "model"],
                "properties": {
                    "id": _ID,
                    "genus": _NAT,
                    "model": {"oneOf": [
                        {"type": "object", "additionalProperties": False, "required": ["kind"],
                         "properties": {"kind": {"const": "proj_line"}}},
                        {"type": "object", "additionalProperties": False,
                         "required": ["kind", "a2", "a4", "a6"],
                         "properties": {"kind": {"const": "weierstrass"}, "a2": _ELEM, "a4": _ELEM, "a6": _ELEM}},
                        {"type": "object", "additionalProperties": False, "required": ["kind", "traces"],
                         "properties": {"kind": {"const": "trace_table"},
                                        "traces": {"type": "object",
                                                   "additionalProperties": {"type": "array", "items": _INT}}}},
                    ]},
                },
            },
        },
        "graph": {
            "type": "object", "additionalProperties": False, "required": ["edges", "endpoint_component"],
            "properties": {
                "edges": {"type": "array", "items": {
                    "type": "object", "additionalProperties": False, "required": ["id", "endpoints"],
                    "properties": {"id": _ID, "endpoints": {"type": "array", "items": _ID}}}},
                "endpoint_component": {"type": "object", "additionalProperties": _ID},
            },
        },
        "elements": {
            "type": "array", "minItems": 1,
            "items": {
                "type": "object", "additionalProperties": False,
                "required": ["id", "frob_power", "inertial", "perm_endpoints", "twists"],
                "properties": {
                    "id": _ID,
                    "frob_power": _NAT,
                    "inertial": {"type": "boolean"},
                    "perm_endpoints": {"type": "object", "additionalProperties": _ID},
                    "perm_components": {"type": "object", "additionalProperties": _ID},
                    "twists": {"type": "object", "additionalProperties": {
                        "type": "object", "additionalProperties": False, "required": ["c2", "c3"],
                        "properties": {"c2": _ELEM, "c3": _ELEM}}},
                },
            },
        },
        "frobenius": _ID,
        "composition": {"type": "object", "propertyNames": {"pattern": r"^[^*\s]+\*[^*\s]+$"},
                        "additionalProperties": _ID},
        "tame": {"type": "boolean"},
    },
}


class DescriptorError(ValueError):
    """Schema or consistency violations; ``errors`` is the full list."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


def _schema_errors(doc: Any) -> list[str]:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    out = []
    for err in sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path))):
        where = "/".join(str(x) for x in err.absolute_path) or "<root>"
        out.append(f"{where}: {err.message}")
    return out


def from_dict(doc: Any) -> FibreDescriptor:
    """Parse and validate a descriptor document; raises :class:`DescriptorError`."""
    errors = _schema_errors(doc)
    if errors:
        raise DescriptorError(errors)
    try:
        d = _build(doc)
    except (ff.FieldError, FibreError, GraphError) as exc:
        raise DescriptorError([str(exc)]) from None
    errors = validate_descriptor(d)
    if errors:
        raise DescriptorError(errors)
    return d


def _build(doc: dict) -> FibreDescriptor:
    p, n0 = int(doc["residue_field"]["p"]), int(doc["residue_field"]["n0"])
    fld = ff.make_field(p, n0)

    def elem(v):
        return fld([int(x) for x in v])

    errors = []
    components = {}
    for c in doc["components"]:
        m = c["model"]
        if m["kind"] == "proj_line":
            model = ProjectiveLine(fld)
        elif m["kind"] == "weierstrass":
            model = WeierstrassModel(fld, elem(m["a2"]), elem(m["a4"]), elem(m["a6"]))
        else:
            model = TraceTable({k: tuple(int(x) for x in v) for k, v in m["traces"].items()})
        if c["id"] in components:
            errors.append(f"duplicate component id {c['id']}")
        components[c["id"]] = Component(c["id"], int(c["genus"]), model)
    edges = {}
    for e in doc["graph"]["edges"]:
        if e["id"] in edges:
            errors.append(f"duplicate edge id {e['id']}")
        edges[e["id"]] = tuple(e["endpoints"])
    g = DualGraph.build(list(components), edges, dict(doc["graph"]["endpoint_component"]))
    graph_errors = validate(g)
    if graph_errors:
        raise DescriptorError(errors + [f"graph: {m}" for m in graph_errors])
    elements = {}
    for e in doc["elements"]:
        if e["id"] in elements:
            errors.append(f"duplicate element id {e['id']}")
        try:
            aut = GraphAut.from_endpoint_perm(g, e["perm_endpoints"], e.get("perm_components"))
        except GraphError as exc:
            errors.append(f"element {e['id']}: {exc}")
            continue
        twists = {cid: CoordTwist(elem(t["c2"]), elem(t["c3"])) for cid, t in e["twists"].items()}
        elements[e["id"]] = SemilinearElt(e["id"], int(e["frob_power"]), e["inertial"], aut, twists)
    if errors:
        raise DescriptorError(errors)
    composition = {}
    for key, val in doc["composition"].items():
        a, b = key.split("*")
        composition[(a, b)] = val
    return FibreDescriptor(p, n0, components, g, elements, doc["frobenius"], composition,
                           bool(doc.get("tame", False)))


def loads(text: str) -> FibreDescriptor:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError([f"<root>: invalid JSON: {exc}"]) from None
    return from_dict(doc)


def load(path) -> FibreDescriptor:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def _elem_out(a) -> list[str]:
    return [str(c) for c in a.coeffs]


def to_dict(d: FibreDescriptor) -> dict:
    comps = []
    for cid in sorted_ids(d.components):
        c = d.components[cid]
        m = c.model
        if isinstance(m, ProjectiveLine):
            model = {"kind": "proj_line"}
        elif isinstance(m, WeierstrassModel):
            model = {"kind": "weierstrass", "a2": _elem_out(m.a2), "a4": _elem_out(m.a4), "a6": _elem_out(m.a6)}
        else:
            model = {"kind": "trace_table",
                     "traces": {k: [str(x) for x in v] for k, v in sorted(m.traces.items())}}
        comps.append({"id": cid, "genus": str(c.genus), "model": model})
    g = d.graph
    edges = [{"id": e, "endpoints": g.endpoints_of(e)} for e in g.I]
    # vertices without endpoints cannot be recovered from perm_endpoints
    bare = [v for v in g.J if not any(g.psi[k] == v for k in g.K)]
    elements = []
    for e in d.elements.values():
        entry = {
            "id": e.id,
            "frob_power": str(e.frob_power),
            "inertial": e.inertial,
            "perm_endpoints": {k: v for k, v in e.graph_aut.piK.items() if k != v},
            "twists": {cid: {"c2": _elem_out(t.c2), "c3": _elem_out(t.c3)}
                       for cid, t in sorted(e.twists.items())},
        }
        moved = {v: e.graph_aut.piJ[v] for v in bare if e.graph_aut.piJ[v] != v}
        if moved:
            entry["perm_components"] = moved
        elements.append(entry)
    return {
        "residue_field": {"p": str(d.p), "n0": str(d.n0)},
        "components": comps,
        "graph": {"edges": edges, "endpoint_component": {k: g.psi[k] for k in g.K}},
        "elements": elements,
        "frobenius": d.frobenius,
        "composition": {f"{a}*{b}": c for (a, b), c in d.composition.items()},
        "tame": d.tame,
    }


def dumps(d: FibreDescriptor) -> str:
    return json.dumps(to_dict(d), indent=2, sort_keys=True) + "\n"
