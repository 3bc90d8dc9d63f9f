"""Exhaustive small multigraphs (loops allowed) and all their automorphisms."""

from __future__ import annotations

import itertools

from semistable.dualgraph import DualGraph, GraphAut


def build(nv: int, edges) -> DualGraph:
    vs = [f"v{i}" for i in range(nv)]
    emap, comp = {}, {}
    for j, (a, b) in enumerate(edges):
        emap[f"e{j}"] = (f"k{j}a", f"k{j}b")
        comp[f"k{j}a"], comp[f"k{j}b"] = f"v{a}", f"v{b}"
    return DualGraph.build(vs, emap, comp)


def _connected(nv, edges):
    seen, stack = {0}, [0]
    adj = {i: set() for i in range(nv)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    while stack:
        v = stack.pop()
        for w in adj[v] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == nv


def _canon(nv, edges):
    best = None
    for perm in itertools.permutations(range(nv)):
        key = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges))
        if best is None or key < best:
            best = key
    return best


def connected_multigraphs(max_edges: int):
    """Isomorphism classes of connected multigraphs with 1..max_edges edges (plus the single vertex)."""
    yield 1, ()
    for ne in range(1, max_edges + 1):
        for nv in range(1, ne + 2):
            pairs = [(a, b) for a in range(nv) for b in range(a, nv)]
            seen = set()
            for edges in itertools.combinations_with_replacement(pairs, ne):
                if not _connected(nv, edges):
                    continue
                c = _canon(nv, edges)
                if c in seen:
                    continue
                seen.add(c)
                yield nv, c


def automorphisms(nv: int, edges) -> list[GraphAut]:
    """Every endpoint permutation commuting with the incidence maps."""
    g = build(nv, edges)
    out = []
    for perm in itertools.permutations(range(nv)):
        # candidate images for each edge: edges with the same (unordered) mapped ends
        images = []
        for a, b in edges:
            target = sorted((perm[a], perm[b]))
            images.append([j for j, (c, d) in enumerate(edges) if sorted((c, d)) == target])
        for choice in itertools.product(*images):
            if len(set(choice)) != len(edges):
                continue
            per_edge = []
            for j, t in enumerate(choice):
                a, b = edges[j]
                c, d = edges[t]
                opts = []
                if (perm[a], perm[b]) == (c, d):
                    opts.append((f"k{t}a", f"k{t}b"))
                if (perm[a], perm[b]) == (d, c):
                    opts.append((f"k{t}b", f"k{t}a"))
                per_edge.append(opts)
            for flips in itertools.product(*per_edge):
                piK = {}
                for j, (ia, ib) in enumerate(flips):
                    piK[f"k{j}a"], piK[f"k{j}b"] = ia, ib
                piJ = {f"v{i}": f"v{perm[i]}" for i in range(nv)}
                out.append(GraphAut.from_endpoint_perm(g, piK, piJ))
    return out
