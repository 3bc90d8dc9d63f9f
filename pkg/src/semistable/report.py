"""Reduction reports: assembly from a descriptor, JSON and text rendering.

Every integer in the JSON form is a decimal string.  The ``fibre`` block
depends only on the descriptor, so a descriptor exported by the elliptic
frontend and replayed in descriptor mode produces the same block.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import tate
from .dualgraph import sorted_ids
from .elliptic import ReductionClass
from .exactlin import IntMatrix, IntPoly
from .fibre import FibreDescriptor, FibreError

CONVENTIONS = (
    "cohomology: all traces and matrices are on H^1_et of the curve",
    "cyclotomic: chi_cyc(e) = p^frob_power(e); graph classes carry the factor (1 + chi_cyc)",
    "frobenius: the designated lift fixes p^(1/e) and acts as x -> x^p on residues; "
    "per-element traces depend on this choice, the L-factor and conductor do not",
    "l_factor: det(1 - Frob T) on inertia invariants; weight-2 graph classes never contribute "
    "(nondegenerate monodromy pairing)",
    "tameness: the conductor is the tame formula and is reported only for descriptors flagged tame",
)


@dataclass(frozen=True)
class ReductionReport:
    mode: str
    input: dict
    fibre: dict
    classification: Optional[dict] = None
    conventions: tuple[str, ...] = field(default=CONVENTIONS)

    def to_dict(self) -> dict:
        out = {"mode": self.mode, "input": self.input, "fibre": self.fibre, "conventions": list(self.conventions)}
        if self.classification is not None:
            out["classification"] = self.classification
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ReductionReport:
        doc = json.loads(text)
        return cls(doc["mode"], doc["input"], doc["fibre"], doc.get("classification"),
                   tuple(doc["conventions"]))

    def to_text(self) -> str:
        return render_text(self)


def _mat(m: IntMatrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in m.to_rows()]


def fibre_block(d: FibreDescriptor, trace_elements: Sequence[str] | None = None) -> dict:
    """Everything computed from the descriptor alone."""
    pieces = tate.graded_pieces(d)
    wanted = list(trace_elements) if trace_elements else sorted_ids(d.elements)
    for eid in wanted:
        d.element(eid)
    elements = {}
    for eid in sorted_ids(d.elements):
        e = d.elements[eid]
        entry = {
            "frob_power": str(e.frob_power),
            "inertial": e.inertial,
            "h1_action": _mat(pieces.h1_action[eid]),
            "coh_action": _mat(pieces.coh_action[eid]),
        }
        if eid in wanted:
            try:
                entry["trace"] = str(tate.element_trace(d, eid, pieces))
            except FibreError as exc:
                entry["trace"] = None
                entry["trace_note"] = str(exc)
        elements[eid] = entry
    inv = tate.inertia_invariants(d, pieces=pieces)
    lf = tate.l_factor(d, inv=inv)
    conductor = str(tate.conductor_exponent(d, inv=inv)) if d.tame else None
    violations = tate.duality_check(d, pieces)
    return {
        "residue_field": {"p": str(d.p), "n0": str(d.n0)},
        "graded_ranks": {"toric": str(pieces.toric_rank), "abelian": str(pieces.abelian_rank),
                         "h1": str(pieces.h1_rank)},
        "frobenius": d.frobenius,
        "inertia": sorted_ids(d.inertia),
        "elements": elements,
        "inertia_invariants": {"weight0": str(inv.weight0_dim), "abelian": str(inv.abelian_dim)},
        "l_factor": [str(c) for c in lf.poly.coeffs],
        "conductor": conductor,
        "duality_check": {"ok": not violations, "violations": violations},
    }


def classification_block(rc: ReductionClass) -> dict:
    def opt(x):
        return None if x is None else str(x)

    return {
        "kind": rc.kind,
        "e": str(rc.e),
        "twist_class": rc.twist_class,
        "kodaira": rc.kodaira,
        "components": str(rc.m),
        "minimal_model": [str(a) for a in rc.minimal_model],
        "v_disc": str(rc.v_disc),
        "v_c4": opt(rc.v_c4),
        "v_j": opt(rc.v_j),
    }


def elliptic_report(p: int, coeffs, rc: ReductionClass, d: FibreDescriptor,
                    trace_elements: Sequence[str] | None = None) -> ReductionReport:
    echo = {"p": str(p), "a": [str(a) for a in coeffs]}
    return ReductionReport("elliptic", echo, fibre_block(d, trace_elements), classification_block(rc))


def descriptor_report(path: str, d: FibreDescriptor,
                      trace_elements: Sequence[str] | None = None) -> ReductionReport:
    return ReductionReport("fibre", {"path": str(path)}, fibre_block(d, trace_elements))


def render_text(r: ReductionReport) -> str:
    lines = [f"mode: {r.mode}"]
    lines += [f"input.{k}: {v if isinstance(v, str) else ','.join(v)}" for k, v in sorted(r.input.items())]
    if r.classification:
        c = r.classification
        lines.append(f"reduction: {c['kind']}  Kodaira {c['kodaira']}  components {c['components']}  e {c['e']}"
                     + (f"  twist class {c['twist_class']}" if c["twist_class"] else ""))
        lines.append(f"valuations: v(disc) {c['v_disc']}  v(c4) {c['v_c4'] or 'inf'}  v(j) {c['v_j'] or 'inf'}")
    f = r.fibre
    rf, gr = f["residue_field"], f["graded_ranks"]
    lines.append(f"residue field: F_{rf['p']}^{rf['n0']}")
    lines.append(f"graded ranks: toric {gr['toric']}  abelian {gr['abelian']}  h1 {gr['h1']}")
    lines.append(f"inertia: {', '.join(f['inertia'])}   frobenius: {f['frobenius']}")
    for eid, e in f["elements"].items():
        mat = "; ".join(" ".join(row) for row in e["coh_action"]) or "-"
        tr = e.get("trace", "-")
        if tr is None:
            tr = f"unavailable ({e['trace_note']})"
        lines.append(f"  {eid}: frob_power {e['frob_power']}  H^1(graph) [{mat}]  trace {tr}")
    inv = f["inertia_invariants"]
    lines.append(f"inertia invariants: weight0 {inv['weight0']}  abelian {inv['abelian']}")
    lines.append(f"L-factor: {IntPoly(tuple(int(c) for c in f['l_factor']))}")
    lines.append(f"conductor exponent: {f['conductor'] if f['conductor'] is not None else 'n/a (not tame)'}")
    dc = f["duality_check"]
    lines.append("duality check: ok" if dc["ok"] else "duality check: FAILED " + "; ".join(dc["violations"]))
    lines.append("conventions:")
    lines += [f"  - {c}" for c in r.conventions]
    return "\n".join(lines) + "\n"

