"""Seeded cross-check of the cotree algorithms against the dense oracle."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import oracle
from .cotree import Cotree, random_cotree
from .diagonalize import diagonalize, format_rational, multiplicity
from .graph import to_graph

__all__ = ["Mismatch", "VerifyReport", "random_corpus", "rational_shifts", "check_tree", "verify_corpus"]


@dataclass(frozen=True)
class Mismatch:
    case: int
    n: int
    shift: Fraction
    what: str
    cotree: object
    oracle: object

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "n": self.n,
            "shift": format_rational(self.shift),
            "what": self.what,
            "cotree": str(self.cotree),
            "oracle": str(self.oracle),
        }


@dataclass
class VerifyReport:
    cases: int = 0
    shifts: int = 0
    seconds: float = 0.0
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "cases": self.cases,
            "shifts_checked": self.shifts,
            "seconds": round(self.seconds, 3),
            "mismatches": len(self.mismatches),
            "details": [m.to_json() for m in self.mismatches[:20]],
        }


def random_corpus(seed: int, cases: int, max_n: int) -> list[Cotree]:
    """``cases`` random cotrees with ``n`` uniform in ``[1, max_n]``, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    sizes = rng.integers(1, max_n + 1, size=cases)
    seeds = rng.integers(0, 2**63 - 1, size=cases)
    return [random_cotree(int(n), int(s)) for n, s in zip(sizes, seeds)]


def rational_shifts(rng: np.random.Generator, n: int, count: int) -> list[Fraction]:
    """Non-integer rationals ``p/q`` with ``2 <= q <= 12`` inside ``(-n, n)``."""
    out = []
    while len(out) < count:
        q = int(rng.integers(2, 13))
        p = int(rng.integers(-n * q + 1, n * q))
        x = Fraction(p, q)
        if x.denominator != 1:
            out.append(x)
    return out


def check_tree(tree: Cotree, shifts, case: int = 0) -> tuple[int, list[Mismatch]]:
    """Compare inertia and multiplicity with the oracle at every shift."""
    n = tree.n_leaves
    a = oracle.adjacency(to_graph(tree))
    bad = []
    for x in shifts:
        got = diagonalize(tree, x).inertia
        want = oracle.inertia_exact(a, x)
        if got != want:
            bad.append(Mismatch(case, n, x, "inertia", got, want))
        m_got = multiplicity(tree, x)
        m_want = n - oracle.rank_exact(a, x)
        if m_got != m_want:
            bad.append(Mismatch(case, n, x, "multiplicity", m_got, m_want))
    return len(shifts), bad


def verify_corpus(seed: int = 0, cases: int = 200, max_n: int = 64, n_rational: int = 5) -> VerifyReport:
    """Every integer shift in ``[-n, n]`` plus ``n_rational`` random rationals per cotree."""
    t0 = time.perf_counter()
    report = VerifyReport()
    rng = np.random.default_rng([seed, 1])
    for i, tree in enumerate(random_corpus(seed, cases, max_n)):
        n = tree.n_leaves
        shifts = [Fraction(k) for k in range(-n, n + 1)] + rational_shifts(rng, n, n_rational)
        checked, bad = check_tree(tree, shifts, i)
        report.cases += 1
        report.shifts += checked
        report.mismatches.extend(bad)
    report.seconds = time.perf_counter() - t0
    return report
