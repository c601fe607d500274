"""Linear-time congruence diagonalization of ``A + xI`` on a cotree.

Every leaf starts with diagonal value ``x``. Interior nodes are processed
deepest first; at each node the values of its leaf children and the values
promoted from its interior children are folded pairwise. Each pairwise step
fixes the value of one removed vertex (two in subcases 1c/2c); the last value
left at a node moves up to its parent. By Sylvester's law of inertia the sign
counts of the final diagonal give the number of eigenvalues above, at and
below ``-x``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import _kernels
from .cotree import JOIN, LEAF, UNION, Cotree, NodeKind

__all__ = [
    "as_rational",
    "format_rational",
    "DiagnosisResult",
    "EigenCounts",
    "pair_step",
    "reduce_pairwise",
    "batch_reduce_equal_children",
    "diagonalize",
    "eigen_counts",
    "multiplicity",
    "count_in_interval",
]

ONE = Fraction(1)
ZERO = Fraction(0)


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction (floats are rejected)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, float)):
        raise TypeError(f"expected an exact rational, got {type(value).__name__} {value!r}")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a rational number: {value!r}") from None
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _sign_counts(values: Iterable[Fraction]) -> tuple[int, int, int]:
    kp = kz = km = 0
    for d in values:
        if d > 0:
            kp += 1
        elif d < 0:
            km += 1
        else:
            kz += 1
    return kp, kz, km


@dataclass(frozen=True)
class DiagnosisResult:
    diagonal: tuple[Fraction, ...]
    k_plus: int
    k_zero: int
    k_minus: int
    x: Fraction

    @property
    def inertia(self) -> tuple[int, int, int]:
        return (self.k_plus, self.k_zero, self.k_minus)

    def to_json(self, include_diagonal: bool = False) -> dict:
        out = {
            "x": format_rational(self.x),
            "k_plus": self.k_plus,
            "k_zero": self.k_zero,
            "k_minus": self.k_minus,
        }
        if include_diagonal:
            out["diagonal"] = [format_rational(d) for d in self.diagonal]
        return out


@dataclass(frozen=True)
class EigenCounts:
    greater: int
    equal: int
    less: int
    at: Fraction

    def to_json(self) -> dict:
        return {"at": format_rational(self.at), "greater": self.greater, "equal": self.equal, "less": self.less}


def pair_step(kind: NodeKind, alpha: Fraction, beta: Fraction):
    """Process one (co)duplicate pair with values ``alpha`` (removed) and ``beta`` (kept).

    Returns ``(subcase, remaining, removed)`` where ``remaining`` is ``None``
    when both vertices leave the tree.
    """
    if kind == JOIN:
        s = alpha + beta
        if s != 2:
            return "1a", (alpha * beta - 1) / (s - 2), (s - 2,)
        if beta == 1:
            return "1b", ONE, (ZERO,)
        return "1c", None, (-(1 - beta) ** 2, ONE)
    if kind == UNION:
        s = alpha + beta
        if s != 0:
            return "2a", alpha * beta / s, (s,)
        if beta == 0:
            return "2b", ZERO, (ZERO,)
        return "2c", None, (-beta, beta)
    raise ValueError(f"pair_step needs a UNION or JOIN parent, got {kind!r}")


def reduce_pairwise(values: Iterable[Fraction], kind: NodeKind, trace: list | None = None):
    """Fold sibling values one pair at a time.

    Returns ``(remaining, removed)``; ``remaining`` is ``None`` if the last
    step removed both vertices of its pair.
    """
    cur = None
    removed: list[Fraction] = []
    for v in values:
        if cur is None:
            cur = v
            continue
        sub, cur, out = pair_step(kind, v, cur)
        removed.extend(out)
        if trace is not None:
            trace.append(sub)
    return cur, removed


def batch_reduce_equal_children(y, m: int, parent_kind: NodeKind):
    """Closed form for ``m`` siblings that all hold value ``y``.

    Join parent (``y != 1``): the ``j``-th removed value is ``(j+1)/j * (y-1)``
    and ``(y + m - 1)/m`` remains. Union parent (``y != 0``): removed values are
    ``(j+1)/j * y`` and ``y/m`` remains. Raises ``ValueError`` when the
    precondition fails; callers then fall back to :func:`reduce_pairwise`.
    """
    y = as_rational(y)
    if m < 1:
        raise ValueError("m must be >= 1")
    if parent_kind == JOIN:
        if y == 1:
            raise ValueError("join batch needs y != 1")
        base = y - 1
        remaining = (y + m - 1) / m
    elif parent_kind == UNION:
        if y == 0:
            raise ValueError("union batch needs y != 0")
        base = y
        remaining = y / m
    else:
        raise ValueError(f"parent_kind must be UNION or JOIN, got {parent_kind!r}")
    removed = [Fraction(j + 1, j) * base for j in range(1, m)]
    return remaining, removed


def _batch_ok(kind: int, y: Fraction) -> bool:
    return y != 1 if kind == JOIN else y != 0


def diagonalize(tree: Cotree, x) -> DiagnosisResult:
    """Diagonal matrix congruent to ``A + xI`` for the cograph of ``tree``.

    Exact over the rationals; the result always holds ``n`` values.
    """
    x = as_rational(x)
    kind = tree.kind
    nleaf = tree.n_leaf_children
    if tree.n_nodes == 1:
        diag = [x]
    else:
        diag = []
        carry: list[Fraction | None] = [None] * tree.n_nodes
        for v in range(tree.n_nodes - 1, -1, -1):
            k = int(kind[v])
            if k == LEAF:
                continue
            cur = None
            t = int(nleaf[v])
            if t:
                if _batch_ok(k, x):
                    cur, out = batch_reduce_equal_children(x, t, k)
                else:
                    cur, out = reduce_pairwise([x] * t, k)
                diag.extend(out)
            for c in tree.children(v):
                val = carry[c]
                if val is None:
                    continue
                carry[c] = None
                if cur is None:
                    cur = val
                else:
                    _, cur, out = pair_step(k, val, cur)
                    diag.extend(out)
            carry[v] = cur
        if carry[0] is not None:
            diag.append(carry[0])
    kp, kz, km = _sign_counts(diag)
    return DiagnosisResult(tuple(diag), kp, kz, km, x)


def eigen_counts(tree: Cotree, x, backend: str = "exact") -> EigenCounts:
    """Count eigenvalues of the cograph greater than, equal to and less than ``x``.

    ``backend="float"`` runs the machine-precision kernel and exists for
    benchmarking only; its ``equal`` count is not a certified multiplicity.
    """
    if backend == "exact":
        x = as_rational(x)
        d = diagonalize(tree, -x)
        return EigenCounts(d.k_plus, d.k_zero, d.k_minus, x)
    if backend == "float":
        at = Fraction(x) if isinstance(x, float) else as_rational(x)
        kp, kz, km = _kernels.diag_counts_float(
            tree.kind, tree.first_child, tree.n_children, tree.n_leaf_children, -float(at)
        )
        return EigenCounts(int(kp), int(kz), int(km), at)
    raise ValueError(f"unknown backend {backend!r}; expected 'exact' or 'float'")


def multiplicity(tree: Cotree, lam) -> int:
    """Multiplicity of ``lam`` as an adjacency eigenvalue (0 if it is not one)."""
    return eigen_counts(tree, lam).equal


def count_in_interval(tree: Cotree, lo, hi, include_lo: bool = True, include_hi: bool = True) -> int:
    """Number of eigenvalues in the interval between ``lo`` and ``hi``."""
    lo, hi = as_rational(lo), as_rational(hi)
    if lo > hi:
        raise ValueError(f"empty interval: lo={lo} > hi={hi}")
    at_hi = eigen_counts(tree, hi)
    upto_hi = at_hi.less + (at_hi.equal if include_hi else 0)
    if lo == hi:
        return at_hi.equal if (include_lo and include_hi) else 0
    at_lo = eigen_counts(tree, lo)
    below_lo = at_lo.less + (0 if include_lo else at_lo.equal)
    return upto_hi - below_lo
