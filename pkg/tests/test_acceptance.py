"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line; the lines are printed in the terminal
summary (see ``conftest.py``) and also when the file is run directly.
"""
import itertools
import time
from fractions import Fraction as F

import numpy as np
import pytest

from cotree_spectra import oracle
from cotree_spectra.bench import bench
from cotree_spectra.cotree import (
    JOIN,
    UNION,
    BalancedSpec,
    CotreeError,
    build_balanced,
    build_family_kab,
    build_family_pk2,
    canonical_form,
    normalize,
)
from cotree_spectra.diagonalize import batch_reduce_equal_children, count_in_interval, eigen_counts, multiplicity, reduce_pairwise
from cotree_spectra.graph import Graph, NotACograph, from_graph, is_induced_p4, to_graph
from cotree_spectra.spectra import (
    count_excluding_special,
    full_spectrum,
    integer_multiplicities,
    is_borderenergetic,
    mult_minus_one,
    mult_upper_bound,
    mult_zero,
    special_eigenvalue_nonregular,
    special_eigenvalue_regular,
    spectrum_kab,
    spectrum_pk2,
    twin_eigenvalue_regular,
)
from cotree_spectra.verification import random_corpus, verify_corpus

RESULTS: dict[int, str] = {}
KAB_PAIRS = [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3), (4, 4)]
CORPUS_SEED = 2024


def record(num: int, ok: bool, detail: str) -> None:
    RESULTS[num] = f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2}: {detail}"
    print(RESULTS[num])
    assert ok, detail


def dense(tree):
    return oracle.adjacency(to_graph(tree))


@pytest.fixture(scope="module")
def corpus64():
    return random_corpus(CORPUS_SEED, 200, 64)


def test_criterion_01_kab_spectra():
    t0 = time.perf_counter()
    bad = []
    for a, b in KAB_PAIRS:
        t = build_family_kab(a, b)
        want = spectrum_kab(a, b)
        if full_spectrum(t) != want:
            bad.append((a, b, "full_spectrum"))
        m = dense(t)
        for lam, mult in want.exact_pairs():
            if t.n_leaves - oracle.rank_exact(m, lam) != mult:
                bad.append((a, b, f"oracle at {lam}"))
    dt = time.perf_counter() - t0
    record(1, not bad and dt < 10, f"kab spectra exact for {len(KAB_PAIRS)} pairs, {len(bad)} mismatches, {dt:.2f}s (< 10s)")


def test_criterion_02_kab_energy():
    bad = []
    for a, b in KAB_PAIRS:
        r = is_borderenergetic(build_family_kab(a, b))
        n = a + b * (a - 1) * (b - 1)
        want_cospectral = (a, b) == (2, 2)
        if not (r.verdict and r.energy.exact == 2 * (n - 1) and r.cospectral_to_complete == want_cospectral):
            bad.append((a, b))
    record(2, not bad, f"kab energy = 2(n-1) with expected cospectral flags, {len(bad)} mismatches")


def test_criterion_03_pk2():
    t0 = time.perf_counter()
    bad = []
    for p in range(1, 6):
        t = build_family_pk2(p)
        rep = full_spectrum(t)
        want = [(-(2 * p + 1), 1), (-1, 2 * (p + 1)), (1, 2 * p), (2 * p + 3, 1)]
        got = [(e.value, e.mult) for e in rep.entries]
        e = is_borderenergetic(t).energy
        if got != want or rep != spectrum_pk2(p) or e.exact != 8 * p + 6 or e.exact != 2 * (t.n_leaves - 1):
            bad.append(p)
    dt = time.perf_counter() - t0
    record(3, not bad and dt < 5, f"pk2 spectra and energy 8p+6 for p=1..5, {len(bad)} mismatches, {dt:.2f}s (< 5s)")


def test_criterion_04_balanced_closed_forms():
    t0 = time.perf_counter()
    violations = specs = 0
    for r in (2, 3, 4):
        for a in itertools.product((2, 3, 4), repeat=r - 1):
            for br in (2, 3):
                spec = BalancedSpec(a + (0,), (0,) * (r - 1) + (br,), JOIN)
                t = build_balanced(spec)
                n = t.n_leaves
                specs += 1
                lam, m = twin_eigenvalue_regular(spec)
                violations += multiplicity(t, lam) != m
                lam, m = special_eigenvalue_regular(spec)
                violations += multiplicity(t, lam) != m
                violations += n - twin_eigenvalue_regular(spec)[1] != count_excluding_special(spec)
                found = integer_multiplicities(t, -n, n)
                for k in range(-n, n + 1):
                    try:
                        bound = mult_upper_bound(spec, k)
                    except CotreeError:
                        continue
                    violations += found.get(k, 0) > bound
    dt = time.perf_counter() - t0
    record(4, violations == 0 and dt < 60, f"{specs} regular specs, {violations} violations, {dt:.2f}s (< 60s)")


def _nonregular_specs(count: int) -> list[BalancedSpec]:
    out = [BalancedSpec((1, 2, 0), (3, 0, 2), JOIN)]
    for r in (3, 4, 5):
        for a in itertools.product((1, 2, 3), repeat=r - 1):
            for b in itertools.product((0, 2, 3), repeat=r - 1):
                spec = BalancedSpec(a + (0,), b + (2,), JOIN if sum(a) % 2 else UNION)
                if spec.regular() or not spec.nonregular_admissible() or spec in out:
                    continue
                if spec.n_leaves() <= 120:
                    out.append(spec)
                if len(out) == count:
                    return out
    return out


def test_criterion_05_nonregular():
    specs = _nonregular_specs(25)
    bad = []
    for spec in specs:
        lam, m = special_eigenvalue_nonregular(spec)
        t = build_balanced(spec)
        want = spec.product_a(spec.r - 2) * (spec.a[spec.r - 2] - 1)
        if m != want or multiplicity(t, lam) != m or t.n_leaves - oracle.rank_exact(dense(t), lam) != m:
            bad.append(str(spec))
    ok = len(specs) == 25 and not bad and str(specs[0]) == "T(1,2,0|3,0,2)@J"
    record(5, ok, f"{len(specs)} admissible non-regular specs incl. T(1,2,0|3,0,2), {len(bad)} mismatches")


def test_criterion_06_oracle_equivalence():
    report = verify_corpus(CORPUS_SEED, cases=200, max_n=64, n_rational=5)
    ok = report.ok and report.cases == 200 and report.seconds < 120
    record(
        6,
        ok,
        f"{report.cases} cotrees, {report.shifts} shifts, {len(report.mismatches)} mismatches, "
        f"{report.seconds:.1f}s (< 120s)",
    )


def test_criterion_07_forbidden_interval(corpus64):
    lams = [F(-1, 2), F(-1, 3), F(-9, 10), F(-1, 10)]
    bad = 0
    for t in corpus64:
        bad += count_in_interval(t, -1, 0, include_lo=False, include_hi=False) != 0
        bad += sum(multiplicity(t, lam) != 0 for lam in lams)
    record(7, bad == 0, f"no eigenvalue in (-1, 0) on {len(corpus64)} cotrees, {bad} violations")


def test_criterion_08_formula_theorems():
    trees = random_corpus(CORPUS_SEED + 1, 500, 100)
    bad = sum(
        mult_minus_one(t) != multiplicity(t, -1) or mult_zero(t) != multiplicity(t, 0) for t in trees
    )
    record(8, bad == 0, f"m(-1) and m(0) formulas on {len(trees)} cotrees (n <= 100), {bad} mismatches")


def test_criterion_09_batch_closed_forms():
    rng = np.random.default_rng(CORPUS_SEED)
    bad = checked = 0
    for kind, forbidden in ((JOIN, 1), (UNION, 0)):
        ys = []
        while len(ys) < 100:
            y = F(int(rng.integers(-60, 61)), int(rng.integers(1, 13)))
            if y != forbidden:
                ys.append(y)
        for y in ys:
            for m in range(1, 21):
                checked += 1
                bad += batch_reduce_equal_children(y, m, kind) != reduce_pairwise([y] * m, kind)
    record(9, bad == 0, f"{checked} batch/pairwise comparisons, {bad} mismatches")


def test_criterion_10_linear_scaling():
    rows = bench([10**4, 10**5, 10**6], "float", "pk2", repeat=5)
    per_leaf = [r.per_leaf_ns for r in rows]
    ratio = max(per_leaf) / min(per_leaf)
    t = build_family_pk2(2499)  # n = 10^4
    t0 = time.perf_counter()
    for x in (-1, F(-1, 2), F(3, 2)):
        eigen_counts(t, x)
    exact_s = (time.perf_counter() - t0) / 3
    ok = ratio < 4 and exact_s < 5 and t.n_leaves == 10**4
    record(
        10,
        ok,
        "float per-leaf ns " + ", ".join(f"{p:.1f}" for p in per_leaf)
        + f" (ratio {ratio:.2f} < 4); exact n=10^4 {exact_s:.3f}s (< 5s)",
    )


def _planted_p4_graph(rng) -> Graph:
    n = int(rng.integers(4, 16))
    upper = np.triu(rng.random((n, n)) < rng.uniform(0.2, 0.8), 1)
    adj = upper | upper.T
    path = rng.permutation(n)[:4]
    for i, j in itertools.combinations(range(4), 2):
        on = j == i + 1
        adj[path[i], path[j]] = adj[path[j], path[i]] = on
    edges = frozenset((int(u), int(v)) for u, v in zip(*np.nonzero(np.triu(adj, 1))))
    return Graph(n, edges)


def test_criterion_11_round_trip():
    trees = random_corpus(CORPUS_SEED + 2, 300, 80)
    bad_trip = sum(canonical_form(from_graph(to_graph(t))) != canonical_form(normalize(t)) for t in trees)
    rng = np.random.default_rng(CORPUS_SEED)
    bad_p4 = 0
    for _ in range(50):
        g = _planted_p4_graph(rng)
        r = from_graph(g)
        bad_p4 += not (isinstance(r, NotACograph) and is_induced_p4(g, r.witness))
    record(
        11,
        bad_trip == 0 and bad_p4 == 0,
        f"round trip on {len(trees)} cotrees ({bad_trip} mismatches); 50 planted-P4 graphs ({bad_p4} missed)",
    )


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
