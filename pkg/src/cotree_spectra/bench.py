"""Timing of eigenvalue counting as the cotree grows."""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, asdict
from fractions import Fraction

from .cotree import Cotree, CotreeError, build_family_kab, build_family_pk2, random_cotree
from .diagonalize import eigen_counts

__all__ = ["BenchRow", "EXACT_CEILING", "SHAPES", "tree_for_size", "bench", "to_csv"]

EXACT_CEILING = 100_000
SHAPES = ("pk2", "kab", "random")
# fixed probes: one at a special eigenvalue, one in the forbidden gap, one irrational-free point
SHIFTS = (Fraction(-1), Fraction(-1, 2), Fraction(3, 2))


@dataclass(frozen=True)
class BenchRow:
    size: int
    n: int
    backend: str
    shape: str
    seconds: float
    per_leaf_ns: float


def tree_for_size(shape: str, size: int, seed: int = 0) -> Cotree:
    """A cotree of the given shape with about ``size`` leaves.

    ``pk2`` rounds to ``4p + 4`` leaves and ``kab`` (with ``b = 2``) to
    ``3a - 2`` leaves.
    """
    if size < 1:
        raise CotreeError(f"size must be positive, got {size}")
    if shape == "pk2":
        return build_family_pk2(max(1, round(size / 4) - 1))
    if shape == "kab":
        return build_family_kab(max(2, round((size + 2) / 3)), 2)
    if shape == "random":
        return random_cotree(size, seed)
    raise CotreeError(f"unknown shape {shape!r}; expected one of {', '.join(SHAPES)}")


def _time_once(tree: Cotree, backend: str) -> float:
    t0 = time.perf_counter()
    for x in SHIFTS:
        eigen_counts(tree, x, backend=backend)
    return time.perf_counter() - t0


def bench(
    sizes,
    backend: str = "float",
    shape: str = "pk2",
    repeat: int = 3,
    exact_ceiling: int = EXACT_CEILING,
    seed: int = 0,
) -> list[BenchRow]:
    """Best-of-``repeat`` wall time for :data:`SHIFTS` at each size.

    The float kernel is warmed up first so compilation is not timed.
    """
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ValueError("sizes must not be empty")
    if sizes != sorted(sizes):
        raise ValueError(f"sizes must be ascending, got {sizes}")
    if backend not in ("exact", "float"):
        raise ValueError(f"unknown backend {backend!r}; expected 'exact' or 'float'")
    if backend == "exact" and sizes[-1] > exact_ceiling:
        raise ValueError(f"exact backend refused for size {sizes[-1]} above the ceiling {exact_ceiling}")
    if backend == "float":
        _time_once(tree_for_size(shape, 8, seed), backend)
    rows = []
    for size in sizes:
        tree = tree_for_size(shape, size, seed)
        best = min(_time_once(tree, backend) for _ in range(max(1, repeat)))
        rows.append(BenchRow(size, tree.n_leaves, backend, shape, best, 1e9 * best / tree.n_leaves))
    return rows


def to_csv(rows: list[BenchRow]) -> str:
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=list(BenchRow.__dataclass_fields__), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(asdict(row))
    return out.getvalue()
