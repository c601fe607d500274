"""Explicit graphs: expansion from cotrees, recognition, and the edge-list file format."""
from __future__ import annotations

import io
import os
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .cotree import JOIN, LEAF, UNION, Cotree

__all__ = [
    "Graph",
    "GraphError",
    "NotACograph",
    "to_graph",
    "from_graph",
    "is_induced_p4",
    "read_graph",
    "format_graph",
]


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``; edges stored as ``(u, v)`` with ``u < v``."""

    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("vertex count must be non-negative")
        norm = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) outside vertex range [0, {self.n})")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "Graph":
        norm = [(min(u, v), max(u, v)) for u, v in edges]
        if len(set(norm)) != len(norm):
            raise GraphError("duplicate edges")
        return cls(n, frozenset(norm))

    def neighbors(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    @property
    def m(self) -> int:
        return len(self.edges)

    def complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2


@dataclass(frozen=True)
class NotACograph:
    """Recognition result for a graph with an induced path ``a-b-c-d``."""

    witness: tuple[int, int, int, int]


def to_graph(tree: Cotree) -> Graph:
    """Expand a cotree: two leaves are adjacent iff their lowest common ancestor is a join."""
    leaves: list[list[int] | None] = [None] * tree.n_nodes
    edges: list[tuple[int, int]] = []
    for v in range(tree.n_nodes - 1, -1, -1):
        k = tree.kind[v]
        if k == LEAF:
            leaves[v] = [int(tree.label[v])]
            continue
        groups = [leaves[c] for c in tree.children(v)]
        if k == JOIN:
            for i in range(len(groups)):
                for j in range(i + 1, len(groups)):
                    edges.extend((x, y) if x < y else (y, x) for x in groups[i] for y in groups[j])
        merged: list[int] = []
        for c in tree.children(v):
            merged.extend(leaves[c])
            leaves[c] = None
        leaves[v] = merged
    return Graph(tree.n_leaves, frozenset(edges))


def _components(verts: list[int], adj: list[set[int]], complement: bool) -> list[list[int]]:
    remaining = set(verts)
    comps = []
    while remaining:
        start = remaining.pop()
        comp = [start]
        queue = [start]
        while queue:
            u = queue.pop()
            if complement:
                nxt = [w for w in remaining if w not in adj[u]]
            else:
                nxt = [w for w in adj[u] if w in remaining]
            for w in nxt:
                remaining.discard(w)
                comp.append(w)
                queue.append(w)
        comps.append(sorted(comp))
    comps.sort()
    return comps


def _find_p4(verts: list[int], adj: list[set[int]]) -> tuple[int, int, int, int]:
    s = set(verts)
    for b in verts:
        for c in adj[b]:
            if c not in s or c == b:
                continue
            left = [a for a in adj[b] if a in s and a != c and a not in adj[c]]
            if not left:
                continue
            right = [d for d in adj[c] if d in s and d != b and d not in adj[b]]
            for a in left:
                for d in right:
                    if d != a and d not in adj[a]:
                        return (a, b, c, d)
    raise AssertionError("prime module without an induced P4")  # cannot happen


def from_graph(g: Graph) -> Cotree | NotACograph:
    """Recognize a cograph by recursive complement decomposition.

    Returns the minimal cotree whose leaf labels are the vertex ids of ``g``
    (so ``to_graph`` reproduces ``g`` exactly), or :class:`NotACograph` with
    an induced ``P4`` witness. Quadratic per level; meant for desk-scale graphs.
    """
    if not isinstance(g, Graph):
        raise GraphError("from_graph expects a Graph")
    if g.n == 0:
        raise GraphError("empty graph has no cotree")
    adj = g.neighbors()
    kinds: list[int] = []
    children: list[list[int]] = []
    labels: list[int] = []
    stack: list[tuple[list[int], int]] = [(list(range(g.n)), -1)]
    while stack:
        verts, par = stack.pop()
        me = len(kinds)
        children.append([])
        if par >= 0:
            children[par].append(me)
        if len(verts) == 1:
            kinds.append(LEAF)
            labels.append(verts[0])
            continue
        labels.append(-1)
        comps = _components(verts, adj, complement=False)
        if len(comps) > 1:
            kinds.append(UNION)
        else:
            comps = _components(verts, adj, complement=True)
            if len(comps) == 1:
                return NotACograph(_find_p4(verts, adj))
            kinds.append(JOIN)
        for comp in reversed(comps):
            stack.append((comp, me))
    return Cotree.from_children(kinds, children, labels=labels)


def is_induced_p4(g: Graph, path: tuple[int, ...]) -> bool:
    """True iff ``path`` lists 4 distinct vertices inducing the path a-b-c-d in ``g``."""
    if len(path) != 4 or len(set(path)) != 4:
        return False
    e = g.edges
    want = {(0, 1), (1, 2), (2, 3)}
    for i, j in combinations(range(4), 2):
        u, v = path[i], path[j]
        has = (min(u, v), max(u, v)) in e
        if has != ((i, j) in want):
            return False
    return True


def read_graph(source) -> Graph:
    """Read ``n m`` then ``m`` lines ``u v`` (0-based); ``#`` starts a comment.

    ``source`` is a path or an open text stream.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return read_graph(fh)
    rows = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected two integers, got {line!r}")
        try:
            rows.append((int(parts[0]), int(parts[1]), lineno))
        except ValueError:
            raise GraphError(f"line {lineno}: expected two integers, got {line!r}") from None
    if not rows:
        raise GraphError("missing header line 'n m'")
    n, m, _ = rows[0]
    body = rows[1:]
    if len(body) != m:
        raise GraphError(f"header declares {m} edges but {len(body)} edge lines follow")
    edges = []
    seen = set()
    for u, v, lineno in body:
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError(f"line {lineno}: duplicate edge {u} {v}")
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"line {lineno}: invalid edge {u} {v} for n={n}")
        seen.add(key)
        edges.append(key)
    return Graph(n, frozenset(edges))


def format_graph(g: Graph) -> str:
    out = io.StringIO()
    out.write(f"{g.n} {g.m}\n")
    for u, v in sorted(g.edges):
        out.write(f"{u} {v}\n")
    return out.getvalue()
