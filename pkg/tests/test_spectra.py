import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cotree_spectra.cotree import (
    JOIN,
    UNION,
    BalancedSpec,
    CotreeError,
    build,
    build_balanced,
    build_family_kab,
    build_family_pk2,
    random_cotree,
)
from cotree_spectra.diagonalize import eigen_counts, multiplicity
from cotree_spectra.spectra import (
    IndeterminateEnergy,
    SpectrumReport,
    count_excluding_special,
    energy,
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

from conftest import oracle_eigs, oracle_mult

T320 = BalancedSpec((3, 2, 0), (0, 0, 2))
K33 = BalancedSpec((2, 0), (0, 3))
P3 = build(("J", ("U", "L", "L"), "L"))


def complete(n):
    return build(("J",) + ("L",) * n)


def pairs(report):
    return [(e.value, e.mult) for e in report.entries]


# -- m(-1) and m(0) -----------------------------------------------------------------


def test_mult_minus_one_examples(apex9):
    assert mult_minus_one(complete(6)) == 5
    assert mult_minus_one(apex9) == multiplicity(apex9, -1) == oracle_mult(apex9, -1) == 2
    assert mult_minus_one(build_balanced(T320)) == 6


def test_mult_zero_examples(apex9):
    assert mult_zero(build(("U", "L", "L"))) == 2 == oracle_mult(build(("U", "L", "L")), 0)
    assert mult_zero(apex9) == 1
    assert mult_zero(build_balanced(K33)) == 4 == oracle_mult(build_balanced(K33), 0)


@pytest.mark.parametrize("expr", ["1", "3", "1*1", "1+1*1", "2(1*1)+3", "(1+1)*(1+1)+1"])
def test_mult_zero_isolated_vertices(expr):
    from cotree_spectra.parsing import parse_expression

    t = parse_expression(expr)
    assert mult_zero(t) == oracle_mult(t, 0)
    assert mult_minus_one(t) == oracle_mult(t, -1)


@given(seed=st.integers(0, 10**6), n=st.integers(1, 100))
@settings(max_examples=150, deadline=None)
def test_formulas_match_algorithm(seed, n):
    t = random_cotree(n, seed)
    assert mult_minus_one(t) == multiplicity(t, -1)
    assert mult_zero(t) == multiplicity(t, 0)


# -- regular balanced closed forms ----------------------------------------------------


def test_count_excluding_special_examples():
    assert count_excluding_special(T320) == 6
    assert count_excluding_special(K33) == 2
    spec = BalancedSpec((2, 2, 2, 0), (0, 0, 0, 2))
    t = build_balanced(spec)
    # r = 4 under a join root puts unions at the deepest level, so the twin eigenvalue is 0
    assert count_excluding_special(spec) == 8 == t.n_leaves - multiplicity(t, 0)


def test_special_regular_examples():
    assert special_eigenvalue_regular(T320) == (1, 3)
    assert oracle_mult(build_balanced(T320), 1) == 3
    assert special_eigenvalue_regular(K33) == (-3, 1)
    assert special_eigenvalue_regular(BalancedSpec((2, 2, 0), (0, 0, 2))) == (1, 2)


def test_twin_regular_examples():
    assert twin_eigenvalue_regular(T320) == (-1, 6)
    assert twin_eigenvalue_regular(K33) == (0, 4)


def test_special_nonregular_examples():
    kab = BalancedSpec((1, 2, 0), (3, 0, 2))
    assert special_eigenvalue_nonregular(kab) == (1, 1)
    assert multiplicity(build_family_kab(3, 2), 1) == 1 == oracle_mult(build_family_kab(3, 2), 1)
    with pytest.raises(CotreeError, match="b_i"):
        special_eigenvalue_nonregular(BalancedSpec((2, 0), (4, 3), UNION))


def test_mult_upper_bound_examples():
    assert mult_upper_bound(T320, 2) == 3
    assert mult_upper_bound(K33, 3) == 1
    with pytest.raises(CotreeError, match="excluded"):
        mult_upper_bound(T320, -1)
    with pytest.raises(CotreeError, match="excluded"):
        mult_upper_bound(K33, -3)


def test_regular_forms_reject_nonregular():
    kab = BalancedSpec((1, 2, 0), (3, 0, 2))
    for f in (count_excluding_special, special_eigenvalue_regular, twin_eigenvalue_regular):
        with pytest.raises(CotreeError, match="not regular"):
            f(kab)


def test_regular_forms_reject_degenerate_levels():
    with pytest.raises(CotreeError, match="single interior child"):
        special_eigenvalue_regular(BalancedSpec((2, 1, 0), (0, 0, 2)))


def test_union_root_depth_two_has_no_special_formula():
    spec = BalancedSpec((3, 0), (0, 2), UNION)  # 3K_2
    with pytest.raises(CotreeError, match="r >= 3"):
        special_eigenvalue_regular(spec)
    assert twin_eigenvalue_regular(spec) == (-1, 3)
    assert mult_upper_bound(spec, 5) == 1


def _regular_specs(kinds=(JOIN, UNION)):
    for kind in kinds:
        for r in (2, 3, 4):
            for a in itertools.product((2, 3, 4), repeat=r - 1):
                for br in (2, 3, 4):
                    if len(a) == 3 and br == 4:
                        continue
                    yield BalancedSpec(a + (0,), (0,) * (r - 1) + (br,), kind)


@pytest.mark.parametrize("spec", list(_regular_specs()), ids=str)
def test_regular_closed_forms_sweep(spec):
    t = build_balanced(spec)
    n = t.n_leaves
    lam, m = twin_eigenvalue_regular(spec)
    assert multiplicity(t, lam) == m
    assert n - m == count_excluding_special(spec)
    if not (spec.root_kind == UNION and spec.r == 2):
        lam, m = special_eigenvalue_regular(spec)
        assert multiplicity(t, lam) == m
    found = integer_multiplicities(t, -n, n)
    for k in range(-n, n + 1):
        try:
            bound = mult_upper_bound(spec, k)
        except CotreeError:
            continue
        assert found.get(k, 0) <= bound


def _nonregular_specs():
    for kind in (JOIN, UNION):
        for r in (3, 4):
            for a in itertools.product((1, 2, 3), repeat=r - 1):
                for b in itertools.product((0, 2, 3), repeat=r - 1):
                    for br in (2, 3):
                        spec = BalancedSpec(a + (0,), b + (br,), kind)
                        if not spec.regular() and spec.nonregular_admissible():
                            yield spec


@pytest.mark.parametrize("spec", list(_nonregular_specs())[::3], ids=str)
def test_nonregular_special(spec):
    lam, m = special_eigenvalue_nonregular(spec)
    assert multiplicity(build_balanced(spec), lam) == m


# -- full spectrum ------------------------------------------------------------------------


def test_full_spectrum_pk2():
    rep = full_spectrum(build_family_pk2(1), F(1, 1000))
    assert pairs(rep) == [(-3, 1), (-1, 4), (1, 2), (5, 1)]
    assert rep.is_exact and rep.residual_width == 0


def test_full_spectrum_p3():
    rep = full_spectrum(P3, F(1, 1024))
    assert len(rep.entries) == 3
    lo, mid, hi = rep.entries
    assert mid.value == 0 and mid.mult == 1
    r2 = 2 ** 0.5
    assert lo.lo < -r2 < lo.hi and hi.lo < r2 < hi.hi
    assert lo.width <= F(1, 1024) and hi.width <= F(1, 1024)


def test_full_spectrum_k5():
    assert pairs(full_spectrum(complete(5), 1)) == [(-1, 4), (4, 1)]


def test_full_spectrum_rejects_epsilon():
    for eps in (0, -1):
        with pytest.raises(ValueError):
            full_spectrum(P3, eps)


@given(seed=st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_full_spectrum_certified_and_matches_oracle(seed):
    t = random_cotree(1 + seed % 24, seed)
    eps = F(1, 256)
    rep = full_spectrum(t, eps)
    assert sum(e.mult for e in rep.entries) == t.n_leaves
    ev = oracle_eigs(t)
    prev_hi = None
    for e in rep.entries:
        if e.exact:
            assert multiplicity(t, e.value) == e.mult
            assert np.sum(np.abs(ev - float(e.value)) < 1e-8) == e.mult
            edge = e.value
        else:
            assert e.width <= eps
            lo_c, hi_c = eigen_counts(t, e.lo), eigen_counts(t, e.hi)
            assert lo_c.equal == hi_c.equal == 0
            assert hi_c.less - lo_c.less == e.mult
            assert np.sum((ev > float(e.lo)) & (ev < float(e.hi))) == e.mult
            edge = e.lo
        if prev_hi is not None:
            assert prev_hi <= edge
        prev_hi = e.value if e.exact else e.hi
    if rep.is_exact:
        assert sum(v * m for v, m in rep.exact_pairs()) == 0


def test_integer_multiplicities_matches_sweep(apex9):
    n = apex9.n_leaves
    sweep = {k: multiplicity(apex9, k) for k in range(-n, n + 1)}
    assert integer_multiplicities(apex9, -n, n) == {k: m for k, m in sweep.items() if m}
    assert integer_multiplicities(apex9, 3, 2) == {}
    assert integer_multiplicities(apex9, -1, -1) == {-1: 2}


def test_report_json():
    j = full_spectrum(P3, F(1, 8)).to_json()
    assert j["n"] == 3 and j["residual_width"] == "1/8"
    assert {"lo", "hi", "mult", "certified"} <= set(j["entries"][0])
    assert j["entries"][1] == {"value": "0", "mult": 1, "certified": True}


def test_from_pairs_validates():
    with pytest.raises(ValueError, match="sum"):
        SpectrumReport.from_pairs(3, [(1, 1)])


# -- family spectra ---------------------------------------------------------------------------


def test_spectrum_kab_examples():
    assert pairs(spectrum_kab(2, 2)) == [(-1, 3), (3, 1)]
    assert pairs(spectrum_kab(3, 2)) == [(-2, 1), (-1, 4), (1, 1), (5, 1)]
    rep = spectrum_kab(3, 3)
    assert pairs(rep) == [(-4, 1), (-1, 10), (2, 3), (8, 1)] and rep.n == 15


def test_spectrum_pk2_examples():
    assert pairs(spectrum_pk2(1)) == [(-3, 1), (-1, 4), (1, 2), (5, 1)]
    assert pairs(spectrum_pk2(2)) == [(-5, 1), (-1, 6), (1, 4), (7, 1)]
    assert sum(e.mult for e in spectrum_pk2(3).entries) == 16


@pytest.mark.parametrize("a,b", [(a, b) for a in range(2, 6) for b in range(2, a + 1)])
def test_kab_closed_form_matches(a, b):
    t = build_family_kab(a, b)
    rep = spectrum_kab(a, b)
    assert full_spectrum(t) == rep
    for v, m in rep.exact_pairs():
        assert oracle_mult(t, v) == m
    assert sum(v * m for v, m in rep.exact_pairs()) == 0
    assert energy(t).exact == 2 * (rep.n - 1)


@pytest.mark.parametrize("p", range(1, 6))
def test_pk2_closed_form_matches(p):
    t = build_family_pk2(p)
    rep = spectrum_pk2(p)
    assert full_spectrum(t) == rep
    for v, m in rep.exact_pairs():
        assert oracle_mult(t, v) == m
    assert energy(t).exact == 8 * p + 6


def test_family_preconditions():
    with pytest.raises(CotreeError):
        spectrum_kab(2, 3)
    with pytest.raises(CotreeError):
        spectrum_pk2(0)


# -- energy and borderenergetic ------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_energy_complete(n):
    e = energy(complete(n))
    assert e.exact == e.lower == e.upper == 2 * n - 2


def test_energy_pk2():
    assert energy(build_family_pk2(2)).exact == 22


def test_energy_p3_interval():
    e = energy(P3, F(1, 10**6))
    assert e.exact is None
    assert e.lower <= 2 * 2**0.5 <= e.upper
    assert e.upper - e.lower <= F(3, 10**6)


def test_energy_json():
    assert energy(complete(3)).to_json() == {"lower": "4", "upper": "4", "exact": "4"}
    assert energy(P3, F(1, 4)).to_json()["exact"] is None


def test_borderenergetic_examples():
    r = is_borderenergetic(build_family_kab(3, 2))
    assert (r.verdict, r.energy.exact, r.cospectral_to_complete) == (True, 12, False)
    r = is_borderenergetic(build_family_pk2(1))
    assert (r.verdict, r.energy.exact, r.cospectral_to_complete) == (True, 14, False)
    r = is_borderenergetic(complete(6))
    assert (r.verdict, r.energy.exact, r.cospectral_to_complete) == (True, 10, True)


def test_borderenergetic_false_exact_and_interval():
    assert not is_borderenergetic(build(("U", "L", "L"))).verdict  # energy 0 vs 2
    r = is_borderenergetic(P3, F(1, 64))  # 2*sqrt(2) vs 4, bracket excludes 4
    assert not r.verdict and r.energy.exact is None


def test_borderenergetic_indeterminate():
    # 2*sqrt(2) ~ 2.83 against 4: a coarse bracket cannot decide
    with pytest.raises(IndeterminateEnergy, match="epsilon"):
        is_borderenergetic(P3, 1)
