"""Cotree data model, builders and normalization.

A cotree is stored as a flat arena of numpy arrays in breadth-first order,
so node ``0`` is always the root and the children of a node occupy a
contiguous id range ``first_child[v] : first_child[v] + n_children[v]``.
Leaves carry a vertex label in ``[0, n_leaves)``.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "NodeKind",
    "LEAF",
    "UNION",
    "JOIN",
    "Cotree",
    "CotreeError",
    "BalancedSpec",
    "normalize",
    "build",
    "build_balanced",
    "build_family_kab",
    "build_family_pk2",
    "kab_spec",
    "pk2_spec",
    "canonical_form",
    "random_cotree",
    "permute_children",
]


class NodeKind(IntEnum):
    LEAF = 0
    UNION = 1
    JOIN = 2

    @property
    def symbol(self) -> str:
        return "LUJ"[self]

    def flip(self) -> "NodeKind":
        if self is NodeKind.LEAF:
            raise ValueError("a leaf has no complementary kind")
        return NodeKind.JOIN if self is NodeKind.UNION else NodeKind.UNION


LEAF, UNION, JOIN = NodeKind.LEAF, NodeKind.UNION, NodeKind.JOIN


class CotreeError(ValueError):
    """Raised for structurally invalid cotrees or generator parameters."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Cotree:
    """Immutable cotree arena in BFS order (root is node 0)."""

    kind: np.ndarray
    parent: np.ndarray
    first_child: np.ndarray
    n_children: np.ndarray
    label: np.ndarray

    # -- construction -------------------------------------------------

    @classmethod
    def from_children(
        cls,
        kinds: Sequence[int],
        children: Sequence[Sequence[int]],
        root: int = 0,
        labels: Sequence[int] | None = None,
    ) -> "Cotree":
        """Build a cotree from per-node kinds and ordered child lists.

        The input may be non-minimal (same-kind nesting, one-child interior
        nodes). Raises :class:`CotreeError` on cycles, shared children,
        unreachable nodes, leaves with children or childless interior nodes.
        ``labels[v]`` gives the vertex id of leaf ``v``; by default leaves are
        numbered in BFS order.
        """
        m = len(kinds)
        if len(children) != m:
            raise CotreeError("kinds and children differ in length")
        if not 0 <= root < m:
            raise CotreeError(f"root {root} out of range")
        new_id = np.full(m, -1, dtype=np.int64)
        order = [root]
        new_id[root] = 0
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            k = kinds[v]
            ch = children[v]
            if k == LEAF:
                if len(ch):
                    raise CotreeError(f"leaf {v} has children")
                continue
            if k not in (UNION, JOIN):
                raise CotreeError(f"node {v} has unknown kind {k!r}")
            if not len(ch):
                raise CotreeError(f"interior node {v} has no children")
            for c in ch:
                if not 0 <= c < m:
                    raise CotreeError(f"child id {c} out of range")
                if new_id[c] != -1:
                    raise CotreeError(f"node {c} reached twice (cycle or shared child)")
                new_id[c] = len(order)
                order.append(c)
        if len(order) != m:
            raise CotreeError(f"{m - len(order)} node(s) unreachable from the root")

        order_arr = np.asarray(order, dtype=np.int64)
        kind = np.asarray(kinds, dtype=np.int8)[order_arr]
        n_children = np.fromiter((len(children[v]) for v in order), dtype=np.int64, count=m)
        first_child = np.empty(m, dtype=np.int64)
        parent = np.full(m, -1, dtype=np.int64)
        nxt = 1
        for i, v in enumerate(order):
            first_child[i] = nxt
            if n_children[i]:
                parent[nxt : nxt + n_children[i]] = i
                nxt += n_children[i]
        leaves = np.flatnonzero(kind == LEAF)
        label = np.full(m, -1, dtype=np.int64)
        if labels is None:
            label[leaves] = np.arange(len(leaves))
        else:
            lab = np.asarray(labels, dtype=np.int64)[order_arr]
            label[leaves] = lab[leaves]
            if sorted(label[leaves].tolist()) != list(range(len(leaves))):
                raise CotreeError("leaf labels must be a permutation of 0..n-1")
        return cls._from_arrays(kind, parent, first_child, n_children, label)

    @classmethod
    def _from_arrays(cls, kind, parent, first_child, n_children, label) -> "Cotree":
        return cls(
            _readonly(np.ascontiguousarray(kind, dtype=np.int8)),
            _readonly(np.ascontiguousarray(parent, dtype=np.int64)),
            _readonly(np.ascontiguousarray(first_child, dtype=np.int64)),
            _readonly(np.ascontiguousarray(n_children, dtype=np.int64)),
            _readonly(np.ascontiguousarray(label, dtype=np.int64)),
        )

    @classmethod
    def single_leaf(cls) -> "Cotree":
        return cls.from_children([LEAF], [[]])

    # -- basic queries ------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self.kind)

    @cached_property
    def n_leaves(self) -> int:
        return int(np.count_nonzero(self.kind == LEAF))

    @property
    def root_kind(self) -> NodeKind:
        return NodeKind(int(self.kind[0]))

    def children(self, v: int) -> range:
        s = int(self.first_child[v])
        return range(s, s + int(self.n_children[v]))

    def interior_nodes(self) -> Iterator[int]:
        return (int(v) for v in np.flatnonzero(self.kind != LEAF))

    @cached_property
    def depth(self) -> np.ndarray:
        d = np.zeros(self.n_nodes, dtype=np.int64)
        for v in range(1, self.n_nodes):
            d[v] = d[self.parent[v]] + 1
        return _readonly(d)

    @cached_property
    def n_leaf_children(self) -> np.ndarray:
        """Number of leaf children of every node (0 for leaves)."""
        cnt = np.zeros(self.n_nodes, dtype=np.int64)
        leaves = np.flatnonzero(self.kind == LEAF)
        leaves = leaves[leaves != 0]
        np.add.at(cnt, self.parent[leaves], 1)
        return _readonly(cnt)

    def is_minimal(self) -> bool:
        """True when every interior node has >= 2 children and kinds alternate."""
        interior = self.kind != LEAF
        if np.any(self.n_children[interior] < 2):
            return False
        nonroot = np.arange(1, self.n_nodes)
        same = (self.kind[nonroot] == self.kind[self.parent[nonroot]]) & interior[nonroot]
        return not bool(np.any(same))

    def check_invariants(self) -> None:
        """Raise :class:`CotreeError` unless this is a valid minimal cotree."""
        m = self.n_nodes
        if m == 0:
            raise CotreeError("empty cotree")
        if self.parent[0] != -1:
            raise CotreeError("root has a parent")
        for v in range(m):
            k = self.kind[v]
            if k == LEAF and self.n_children[v]:
                raise CotreeError(f"leaf {v} has children")
            for c in self.children(v):
                if self.parent[c] != v:
                    raise CotreeError(f"parent link of {c} inconsistent")
        if np.any(self.parent[1:] >= np.arange(1, m)):
            raise CotreeError("parent ids must precede children in BFS order")
        if not self.is_minimal():
            raise CotreeError("cotree is not minimal")
        leaves = np.flatnonzero(self.kind == LEAF)
        if sorted(self.label[leaves].tolist()) != list(range(len(leaves))):
            raise CotreeError("leaf labels are not a permutation of 0..n-1")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cotree):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, f), getattr(other, f))
            for f in ("kind", "parent", "first_child", "n_children", "label")
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Cotree(n_leaves={self.n_leaves}, n_nodes={self.n_nodes}, root={self.root_kind.name})"

    def child_lists(self) -> list[list[int]]:
        return [list(self.children(v)) for v in range(self.n_nodes)]

    def to_nested(self):
        """Return the tree as nested tuples: ``"L"`` or ``("U"|"J", child, ...)``."""
        out: list = [None] * self.n_nodes
        for v in range(self.n_nodes - 1, -1, -1):
            k = NodeKind(int(self.kind[v]))
            if k is LEAF:
                out[v] = "L"
            else:
                out[v] = (k.symbol, *(out[c] for c in self.children(v)))
        return out[0]

    def to_expression(self) -> str:
        """Render in the ``+``/``*`` expression grammar (round-trips through the parser)."""
        out: list[str] = [""] * self.n_nodes
        for v in range(self.n_nodes - 1, -1, -1):
            k = self.kind[v]
            if k == LEAF:
                out[v] = "1"
            else:
                op = "+" if k == UNION else "*"
                out[v] = "(" + op.join(out[c] for c in self.children(v)) + ")"
        return out[0]

    def to_dot(self) -> str:
        lines = ["graph cotree {"]
        for v in range(self.n_nodes):
            if self.kind[v] == LEAF:
                lines.append(f'  n{v} [label="{self.label[v]}", shape=circle];')
            else:
                sym = "U" if self.kind[v] == UNION else "J"
                lines.append(f'  n{v} [label="{sym}", shape=box];')
        for v in range(1, self.n_nodes):
            lines.append(f"  n{self.parent[v]} -- n{v};")
        lines.append("}")
        return "\n".join(lines)


# -- normalization --------------------------------------------------------


def normalize(tree: Cotree) -> Cotree:
    """Return the minimal cotree of the same cograph.

    One-child interior nodes are spliced out and same-kind parent/child pairs
    are merged. Leaf labels are kept. A tree that is already minimal comes
    back unchanged.
    """
    kind = tree.kind
    nc = tree.n_children
    fc = tree.first_child

    def resolve(v: int) -> int:
        while kind[v] != LEAF and nc[v] == 1:
            v = int(fc[v])
        return v

    root = resolve(0)
    new_kinds: list[int] = []
    new_children: list[list[int]] = []
    new_labels: list[int] = []
    index: dict[int, int] = {}

    def add(v: int) -> int:
        index[v] = len(new_kinds)
        new_kinds.append(int(kind[v]))
        new_children.append([])
        new_labels.append(int(tree.label[v]))
        return index[v]

    add(root)
    todo = [root]
    while todo:
        v = todo.pop()
        me = index[v]
        k = kind[v]
        if k == LEAF:
            continue
        # expand same-kind descendants in order, keeping child order stable
        stack = [iter(range(int(fc[v]), int(fc[v] + nc[v])))]
        while stack:
            c = next(stack[-1], None)
            if c is None:
                stack.pop()
                continue
            c = resolve(c)
            if kind[c] == k:
                stack.append(iter(range(int(fc[c]), int(fc[c] + nc[c]))))
                continue
            new_children[me].append(add(c))
            if kind[c] != LEAF:
                todo.append(c)
    return Cotree.from_children(new_kinds, new_children, root=0, labels=new_labels)


# -- builders -------------------------------------------------------------


def build(nested, labels: str = "dfs") -> Cotree:
    """Build a minimal cotree from nested tuples.

    Leaves are written ``"L"``; interior nodes ``("U", ...)`` or ``("J", ...)``.
    Leaves are labelled in left-to-right (DFS preorder) order.
    """
    kinds: list[int] = []
    children: list[list[int]] = []
    leaf_labels: list[int] = []
    n_leaf = 0
    stack = [(nested, -1)]
    while stack:
        node, par = stack.pop()
        me = len(kinds)
        if par >= 0:
            children[par].append(me)
        if node == "L":
            kinds.append(LEAF)
            children.append([])
            leaf_labels.append(n_leaf)
            n_leaf += 1
            continue
        if not isinstance(node, tuple) or not node or node[0] not in ("U", "J"):
            raise CotreeError(f"bad nested cotree node {node!r}")
        kinds.append(UNION if node[0] == "U" else JOIN)
        children.append([])
        leaf_labels.append(-1)
        for ch in reversed(node[1:]):
            stack.append((ch, me))
    return normalize(Cotree.from_children(kinds, children, labels=leaf_labels))


def canonical_form(tree: Cotree) -> str:
    """Child-order invariant encoding: ``L`` or ``(U ...)``/``(J ...)`` with sorted children."""
    enc: list[str] = [""] * tree.n_nodes
    for v in range(tree.n_nodes - 1, -1, -1):
        k = tree.kind[v]
        if k == LEAF:
            enc[v] = "L"
        else:
            parts = sorted(enc[c] for c in tree.children(v))
            enc[v] = "(" + ("U " if k == UNION else "J ") + " ".join(parts) + ")"
            for c in tree.children(v):
                enc[c] = ""
    return enc[0]


_SPEC_RE = re.compile(
    r"^\s*T\s*\(\s*([0-9,\s]*)\|\s*([0-9,\s]*)\)\s*(?:@\s*([UJuj]))?\s*$"
)


@dataclass(frozen=True)
class BalancedSpec:
    """Level parameters ``T(a_1..a_r | b_1..b_r)`` of a balanced cotree.

    A node at depth ``i`` (root depth 0) has ``a[i]`` interior children and
    ``b[i]`` leaf children; interior kinds alternate starting at ``root_kind``.
    """

    a: tuple[int, ...]
    b: tuple[int, ...]
    root_kind: NodeKind = JOIN

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        object.__setattr__(self, "root_kind", NodeKind(self.root_kind))
        a, b = self.a, self.b
        if not a or len(a) != len(b):
            raise CotreeError(f"a and b must be non-empty and equally long, got {a} | {b}")
        if self.root_kind is LEAF:
            raise CotreeError("root_kind must be UNION or JOIN")
        if a[-1] != 0:
            raise CotreeError("a_r must be 0")
        if any(x < 1 for x in a[:-1]):
            raise CotreeError("a_1..a_{r-1} must be positive")
        if any(x < 0 for x in b):
            raise CotreeError("b_i must be non-negative")
        if b[-1] < 2:
            raise CotreeError("b_r must be at least 2")

    @classmethod
    def parse(cls, text: str) -> "BalancedSpec":
        """Parse ``T(a1,...,ar|b1,...,br)`` with optional ``@U``/``@J`` suffix."""
        m = _SPEC_RE.match(text)
        if not m:
            raise CotreeError(f"malformed balanced spec {text!r}; expected T(a1,...,ar|b1,...,br)[@U|@J]")

        def ints(s: str) -> tuple[int, ...]:
            s = s.strip()
            if not s:
                return ()
            try:
                return tuple(int(t) for t in s.split(","))
            except ValueError:
                raise CotreeError(f"malformed integer list {s!r} in {text!r}") from None

        kind = JOIN if (m.group(3) or "J").upper() == "J" else UNION
        return cls(ints(m.group(1)), ints(m.group(2)), kind)

    def __str__(self) -> str:
        return "T({}|{})@{}".format(
            ",".join(map(str, self.a)), ",".join(map(str, self.b)), self.root_kind.symbol
        )

    @property
    def r(self) -> int:
        return len(self.a)

    def level_kind(self, i: int) -> NodeKind:
        """Kind of the interior nodes at depth ``i``."""
        return self.root_kind if i % 2 == 0 else self.root_kind.flip()

    @property
    def deepest_kind(self) -> NodeKind:
        return self.level_kind(self.r - 1)

    def regular(self) -> bool:
        return all(x == 0 for x in self.b[:-1])

    def proper(self) -> bool:
        """Every interior level has at least two children, so the built tree is already minimal."""
        return all(ai + bi >= 2 for ai, bi in zip(self.a[:-1], self.b[:-1]))

    def nonregular_admissible(self) -> bool:
        r, b = self.r, self.b
        for i in range(1, r):  # 1-based level index
            if i % 2 == r % 2:
                if b[i - 1] < b[-1]:
                    return False
            elif b[i - 1] != 0:
                return False
        return True

    def n_leaves(self) -> int:
        total, width = 0, 1
        for ai, bi in zip(self.a, self.b):
            total += width * bi
            width *= ai
        return total

    def product_a(self, upto: int) -> int:
        """``a_1 * ... * a_upto`` (empty product is 1)."""
        p = 1
        for x in self.a[: max(upto, 0)]:
            p *= x
        return p


def build_balanced(spec: BalancedSpec) -> Cotree:
    """Build the balanced cotree described by ``spec``.

    Nodes at depth ``i`` get ``b[i]`` leaves followed by ``a[i]`` interior
    children. Levels with a single child are spliced out by normalization.
    Construction is vectorized per level, so million-leaf trees are cheap.
    """
    kinds = [np.array([spec.root_kind], dtype=np.int8)]
    parents = [np.array([-1], dtype=np.int64)]
    level_interior = np.array([0], dtype=np.int64)
    offset = 1
    for i, (ai, bi) in enumerate(zip(spec.a, spec.b)):
        width = len(level_interior)
        per = ai + bi
        if per == 0 or width == 0:
            break
        child_kind = spec.level_kind(i + 1) if ai else LEAF
        pattern = np.array([LEAF] * bi + [child_kind] * ai, dtype=np.int8)
        kinds.append(np.tile(pattern, width))
        parents.append(np.repeat(level_interior, per))
        ids = offset + np.arange(width * per, dtype=np.int64)
        level_interior = ids.reshape(width, per)[:, bi:].ravel()
        offset += width * per
    kind = np.concatenate(kinds)
    parent = np.concatenate(parents)
    m = len(kind)
    n_children = np.bincount(parent[1:], minlength=m).astype(np.int64)
    first_child = np.empty(m, dtype=np.int64)
    first_child[0] = 1
    first_child[1:] = 1 + np.cumsum(n_children)[:-1]
    label = np.full(m, -1, dtype=np.int64)
    leaves = np.flatnonzero(kind == LEAF)
    label[leaves] = np.arange(len(leaves))
    tree = Cotree._from_arrays(kind, parent, first_child, n_children, label)
    if any(ai + bi < 2 for ai, bi in zip(spec.a, spec.b)):
        return normalize(tree)
    return tree


def kab_spec(a: int, b: int) -> BalancedSpec:
    if b < 2 or a < b:
        raise CotreeError(f"family kab needs a >= b >= 2, got a={a}, b={b}")
    return BalancedSpec((1, (a - 1) * (b - 1), 0), (a, 0, b), JOIN)


def pk2_spec(p: int) -> BalancedSpec:
    if p < 1:
        raise CotreeError(f"family pk2 needs p >= 1, got p={p}")
    return BalancedSpec((2, p + 1, 0), (0, 0, 2), JOIN)


def build_family_kab(a: int, b: int) -> Cotree:
    """``K_a`` joined with ``(a-1)(b-1)`` disjoint copies of ``K_b``."""
    return build_balanced(kab_spec(a, b))


def build_family_pk2(p: int) -> Cotree:
    """``(p+1)K_2`` joined with ``(p+1)K_2``; ``4p + 4`` vertices."""
    return build_balanced(pk2_spec(p))


# -- random generation ----------------------------------------------------


def random_cotree(
    n_leaves: int,
    seed: int | None = None,
    branching: float = 0.5,
    max_children: int | None = None,
    root_kind: NodeKind | None = None,
) -> Cotree:
    """Random minimal cotree with exactly ``n_leaves`` leaves.

    Each interior node splits its leaf budget into ``k`` positive parts, where
    ``k - 2`` is geometric with success probability ``branching`` (truncated
    to the budget and ``max_children``). Parts of size one become leaves.
    Kinds alternate by depth; the root kind is drawn at random unless given.
    """
    if n_leaves < 1:
        raise CotreeError("n_leaves must be >= 1")
    if not 0 < branching <= 1:
        raise CotreeError("branching must be in (0, 1]")
    rng = np.random.default_rng(seed)
    if n_leaves == 1:
        return Cotree.single_leaf()
    if root_kind is None:
        root_kind = UNION if rng.random() < 0.5 else JOIN
    kinds: list[int] = [int(root_kind)]
    children: list[list[int]] = [[]]
    todo = deque([(0, n_leaves)])
    while todo:
        v, size = todo.popleft()
        hi = size if max_children is None else min(size, max_children)
        k = min(1 + int(rng.geometric(branching)), hi)
        cuts = np.sort(rng.choice(size - 1, size=k - 1, replace=False)) + 1
        parts = np.diff(np.concatenate(([0], cuts, [size])))
        child_kind = NodeKind(kinds[v]).flip()
        for s in parts.tolist():
            c = len(kinds)
            children[v].append(c)
            children.append([])
            if s == 1:
                kinds.append(LEAF)
            else:
                kinds.append(int(child_kind))
                todo.append((c, s))
    return Cotree.from_children(kinds, children)


def permute_children(tree: Cotree, seed: int | None = None) -> Cotree:
    """Shuffle the child order of every interior node (same cograph, same labels)."""
    rng = np.random.default_rng(seed)
    children = tree.child_lists()
    for ch in children:
        rng.shuffle(ch)
    return Cotree.from_children(tree.kind.tolist(), children, labels=tree.label.tolist())
