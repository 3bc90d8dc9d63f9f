"""Dual graphs of semistable fibres and the induced action on their homology.

A graph is given by vertices J (components), edges I (double points) and
edge endpoints K (points of the normalisation over the double points), with
``phi: K -> I`` and ``psi: K -> J``.  Loops and multiple edges are allowed.
H_1 is the kernel of ``Z^K -> Z^I x Z^J``, ``k -> e_phi(k) - e_psi(k)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .exactlin import IntMatrix, kernel_basis, permutation_matrix, restrict_action


class GraphError(ValueError):
    pass


def id_key(x: str):
    """Natural sort key: digit runs compare numerically."""
    return [(0, int(t), "") if t.isdigit() else (1, 0, t) for t in re.findall(r"\d+|\D+", str(x))]


def sorted_ids(ids) -> list[str]:
    return sorted(ids, key=id_key)


@dataclass(frozen=True)
class DualGraph:
    J: tuple[str, ...]
    I: tuple[str, ...]
    K: tuple[str, ...]
    phi: Mapping[str, str]
    psi: Mapping[str, str]

    @classmethod
    def build(cls, vertices, edges: Mapping[str, Sequence[str]],
              endpoint_component: Mapping[str, str]) -> DualGraph:
        """From ``edges: id -> endpoints`` and ``endpoint_component: k -> vertex``."""
        phi = {}
        for e, ends in edges.items():
            for k in ends:
                if k in phi:
                    raise GraphError(f"endpoint {k} listed on two edges")
                phi[k] = e
        K = set(phi) | set(endpoint_component)
        return cls(tuple(sorted_ids(vertices)), tuple(sorted_ids(edges)), tuple(sorted_ids(K)),
                   dict(phi), dict(endpoint_component))

    def endpoints_of(self, edge: str) -> list[str]:
        return [k for k in self.K if self.phi.get(k) == edge]

    def connected_components(self) -> int:
        parent = {v: v for v in self.J}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in self.I:
            vs = [self.psi[k] for k in self.endpoints_of(e)]
            for v in vs[1:]:
                parent[find(v)] = find(vs[0])
        return len({find(v) for v in self.J})


def validate(g: DualGraph) -> list[str]:
    """List of violated constraints (empty when the graph is well formed)."""
    errors = []
    for name, ids in (("vertex", g.J), ("edge", g.I), ("endpoint", g.K)):
        if len(set(ids)) != len(ids):
            errors.append(f"duplicate {name} identifiers")
    Jset, Iset = set(g.J), set(g.I)
    for k in g.K:
        if k not in g.phi:
            errors.append(f"endpoint {k} lies on no edge")
        elif g.phi[k] not in Iset:
            errors.append(f"endpoint {k} lies on unknown edge {g.phi[k]}")
        if k not in g.psi:
            errors.append(f"endpoint {k} lies on no component")
        elif g.psi[k] not in Jset:
            errors.append(f"endpoint {k} lies on unknown component {g.psi[k]}")
    for e in g.I:
        n = sum(1 for k in g.K if g.phi.get(k) == e)
        if n != 2:
            errors.append(f"edge {e} has {n} endpoints")
    return errors


def _require_valid(g: DualGraph):
    errs = validate(g)
    if errs:
        raise GraphError("; ".join(errs))


@dataclass(frozen=True)
class GraphAut:
    piK: Mapping[str, str]
    piI: Mapping[str, str]
    piJ: Mapping[str, str]

    @classmethod
    def identity(cls, g: DualGraph) -> GraphAut:
        return cls({k: k for k in g.K}, {i: i for i in g.I}, {j: j for j in g.J})

    @classmethod
    def from_endpoint_perm(cls, g: DualGraph, piK: Mapping[str, str],
                           piJ: Mapping[str, str] | None = None) -> GraphAut:
        """Derive the edge and vertex bijections from an endpoint permutation.

        Vertices carrying no endpoints take their image from ``piJ`` (default:
        fixed).  Endpoints missing from ``piK`` are fixed.
        """
        pk = {k: piK.get(k, k) for k in g.K}
        pi, pj = {}, dict(piJ or {})
        for k, t in pk.items():
            if k not in g.phi or t not in g.phi or k not in g.psi or t not in g.psi:
                raise GraphError(f"endpoint {k} or its image {t} is not in the graph")
            if pi.setdefault(g.phi[k], g.phi[t]) != g.phi[t]:
                raise GraphError(f"endpoint permutation splits edge {g.phi[k]}")
            if pj.setdefault(g.psi[k], g.psi[t]) != g.psi[t]:
                raise GraphError(f"endpoint permutation splits component {g.psi[k]}")
        for i in g.I:
            pi.setdefault(i, i)
        for j in g.J:
            pj.setdefault(j, j)
        return cls(pk, pi, pj)

    def compose(self, other: GraphAut) -> GraphAut:
        """``self o other`` (apply ``other`` first)."""
        return GraphAut({k: self.piK[v] for k, v in other.piK.items()},
                        {k: self.piI[v] for k, v in other.piI.items()},
                        {k: self.piJ[v] for k, v in other.piJ.items()})

    def inverse(self) -> GraphAut:
        return GraphAut({v: k for k, v in self.piK.items()},
                        {v: k for k, v in self.piI.items()},
                        {v: k for k, v in self.piJ.items()})

    def is_identity(self) -> bool:
        return all(k == v for m in (self.piK, self.piI, self.piJ) for k, v in m.items())


def validate_aut(g: DualGraph, a: GraphAut) -> list[str]:
    errors = []
    for name, pi, ids in (("endpoints", a.piK, g.K), ("edges", a.piI, g.I), ("components", a.piJ, g.J)):
        if set(pi) != set(ids) or set(pi.values()) != set(ids):
            errors.append(f"map on {name} is not a bijection")
    if errors:
        return errors
    for k in g.K:
        if g.phi[a.piK[k]] != a.piI[g.phi[k]]:
            errors.append(f"endpoint map does not commute with phi at {k}")
        if g.psi[a.piK[k]] != a.piJ[g.psi[k]]:
            errors.append(f"endpoint map does not commute with psi at {k}")
    return errors


def boundary_matrix(g: DualGraph) -> IntMatrix:
    """Rows indexed by K, columns by I then J: ``k -> e_phi(k) - e_psi(k)``."""
    _require_valid(g)
    col = {e: n for n, e in enumerate(g.I)}
    col.update({v: len(g.I) + n for n, v in enumerate(g.J)})
    width = len(g.I) + len(g.J)
    rows = []
    for k in g.K:
        r = [0] * width
        r[col[g.phi[k]]] += 1
        r[col[g.psi[k]]] -= 1
        rows.append(r)
    return IntMatrix.from_rows(rows, cols=width)


@dataclass(frozen=True)
class H1Lattice:
    graph: DualGraph
    basis: IntMatrix  # rows are cycles in Z^K
    boundary: IntMatrix = field(repr=False)

    @property
    def rank(self) -> int:
        return self.basis.rows


def h1_lattice(g: DualGraph) -> H1Lattice:
    b = boundary_matrix(g)
    return H1Lattice(g, kernel_basis(b), b)


def endpoint_permutation_matrix(g: DualGraph, a: GraphAut) -> IntMatrix:
    pos = {k: n for n, k in enumerate(g.K)}
    return permutation_matrix([pos[a.piK[k]] for k in g.K])


def action_on_h1(g: DualGraph, a: GraphAut, lattice: H1Lattice | None = None) -> IntMatrix:
    """Matrix of ``a`` on H_1 acting on coordinate columns in the lattice basis.

    Column convention makes ``a -> matrix`` a homomorphism:
    ``action(a o b) == action(a) @ action(b)``.
    """
    errs = validate_aut(g, a)
    if errs:
        raise GraphError("; ".join(errs))
    lattice = lattice or h1_lattice(g)
    return restrict_action(endpoint_permutation_matrix(g, a), lattice.basis).T


def coaction(h1_matrix: IntMatrix) -> IntMatrix:
    """Contragredient action on H^1 = Hom(H_1, Z): the inverse transpose."""
    return h1_matrix.inverse().T


@dataclass(frozen=True)
class Orbit:
    members: tuple[str, ...]
    representative: str
    stabilizer: tuple[int, ...]  # positions in the supplied element list


def component_orbits(g: DualGraph, elts: Sequence[GraphAut]) -> list[Orbit]:
    """Orbits of the vertex set under the group generated by ``elts``."""
    for n, a in enumerate(elts):
        if validate_aut(g, a):
            raise GraphError(f"element {n} does not validate")
    parent = {v: v for v in g.J}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a in elts:
        for v, w in a.piJ.items():
            parent[find(w)] = find(v)
    groups: dict[str, list[str]] = {}
    for v in g.J:
        groups.setdefault(find(v), []).append(v)
    out = []
    for members in groups.values():
        members = sorted_ids(members)
        rep = members[0]
        stab = tuple(n for n, a in enumerate(elts) if a.piJ[rep] == rep)
        out.append(Orbit(tuple(members), rep, stab))
    return sorted(out, key=lambda o: id_key(o.representative))


# -- standard shapes --------------------------------------------------------------

def ngon(n: int, prefix: str = "") -> DualGraph:
    """Cycle of ``n`` vertices ``v0..v{n-1}``; edge ``e{i}`` joins ``v{i}`` to ``v{i+1}``.

    Edge ``e{i}`` has endpoints ``k{i}a`` (on ``v{i}``) and ``k{i}b`` (on ``v{i+1}``);
    ``n == 1`` is the single vertex with a loop.
    """
    if n < 1:
        raise GraphError("a polygon needs at least one vertex")
    vs = [f"{prefix}v{i}" for i in range(n)]
    edges, comp = {}, {}
    for i in range(n):
        a, b = f"{prefix}k{i}a", f"{prefix}k{i}b"
        edges[f"{prefix}e{i}"] = (a, b)
        comp[a] = vs[i]
        comp[b] = vs[(i + 1) % n]
    return DualGraph.build(vs, edges, comp)


def ngon_reflection(g: DualGraph, n: int, prefix: str = "") -> GraphAut:
    """Orientation reversal ``v_i -> v_{-i}`` of :func:`ngon` (reverses every edge)."""
    piK = {}
    for i in range(n):
        j = (-i - 1) % n
        piK[f"{prefix}k{i}a"] = f"{prefix}k{j}b"
        piK[f"{prefix}k{i}b"] = f"{prefix}k{j}a"
    return GraphAut.from_endpoint_perm(g, piK)
