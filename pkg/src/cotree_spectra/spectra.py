"""Multiplicity formulas, spectrum extraction, energy and borderenergetic checks."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .cotree import JOIN, UNION, BalancedSpec, Cotree, CotreeError, kab_spec, pk2_spec
from .diagonalize import as_rational, eigen_counts, format_rational

__all__ = [
    "SpectrumEntry",
    "SpectrumReport",
    "EnergyResult",
    "BorderenergeticResult",
    "IndeterminateEnergy",
    "mult_minus_one",
    "mult_zero",
    "twin_eigenvalue_regular",
    "count_excluding_special",
    "special_eigenvalue_regular",
    "special_eigenvalue_nonregular",
    "mult_upper_bound",
    "integer_multiplicities",
    "full_spectrum",
    "energy",
    "energy_of",
    "spectrum_kab",
    "spectrum_pk2",
    "is_borderenergetic",
]

DEFAULT_EPSILON = Fraction(1, 2**20)


class IndeterminateEnergy(ArithmeticError):
    """The energy interval contains ``2(n-1)`` but the spectrum is not exact."""


@dataclass(frozen=True)
class SpectrumEntry:
    mult: int
    value: Fraction | None = None
    lo: Fraction | None = None
    hi: Fraction | None = None
    certified: bool = True

    @property
    def exact(self) -> bool:
        return self.value is not None

    @property
    def width(self) -> Fraction:
        return Fraction(0) if self.exact else self.hi - self.lo

    def to_json(self) -> dict:
        if self.exact:
            out = {"value": format_rational(self.value)}
        else:
            out = {"lo": format_rational(self.lo), "hi": format_rational(self.hi)}
        out["mult"] = self.mult
        out["certified"] = self.certified
        return out


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues with multiplicities; irrational ones are bracketed by open intervals."""

    n: int
    entries: tuple[SpectrumEntry, ...]
    residual_width: Fraction

    @property
    def is_exact(self) -> bool:
        return all(e.exact for e in self.entries)

    def exact_pairs(self) -> list[tuple[Fraction, int]]:
        return [(e.value, e.mult) for e in self.entries if e.exact]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "entries": [e.to_json() for e in self.entries],
            "residual_width": format_rational(self.residual_width),
        }

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "SpectrumReport":
        """Exact report from ``(value, mult)`` pairs; equal values merge, zero multiplicities drop."""
        acc: dict[Fraction, int] = defaultdict(int)
        for value, mult in pairs:
            acc[as_rational(value)] += int(mult)
        entries = tuple(SpectrumEntry(m, value=v) for v, m in sorted(acc.items()) if m)
        total = sum(e.mult for e in entries)
        if total != n:
            raise ValueError(f"multiplicities sum to {total}, expected {n}")
        return cls(n, entries, Fraction(0))


@dataclass(frozen=True)
class EnergyResult:
    lower: Fraction
    upper: Fraction
    exact: Fraction | None

    def to_json(self) -> dict:
        return {
            "lower": format_rational(self.lower),
            "upper": format_rational(self.upper),
            "exact": None if self.exact is None else format_rational(self.exact),
        }


@dataclass(frozen=True)
class BorderenergeticResult:
    verdict: bool
    energy: EnergyResult
    cospectral_to_complete: bool

    def to_json(self) -> dict:
        return {
            "borderenergetic": self.verdict,
            "energy": self.energy.to_json(),
            "cospectral_to_complete": self.cospectral_to_complete,
        }


# -- formulas read off the cotree ------------------------------------------


def _terminal_excess(tree: Cotree, kind) -> int:
    total = 0
    for v in tree.interior_nodes():
        if tree.kind[v] == kind:
            t = int(tree.n_leaf_children[v])
            if t >= 1:
                total += t - 1
    return total


def mult_minus_one(tree: Cotree) -> int:
    """Multiplicity of -1: sum of ``t - 1`` over join nodes with ``t >= 1`` leaf children."""
    if tree.n_nodes == 1:
        return 0
    return _terminal_excess(tree, JOIN)


def mult_zero(tree: Cotree) -> int:
    """Multiplicity of 0 from the union nodes' leaf counts plus isolated vertices.

    Leaf children of a union root are isolated vertices. They count once each
    (``j``), and the root itself is left out of the ``t - 1`` sum, which would
    otherwise count them twice.
    """
    if tree.n_nodes == 1:
        return 1
    total = _terminal_excess(tree, UNION)
    if tree.kind[0] == UNION:
        t_root = int(tree.n_leaf_children[0])
        if t_root:
            total += 1  # j = t_root replaces the root's (t_root - 1)
    return total


# -- balanced cotree closed forms ------------------------------------------


def _require_regular(spec: BalancedSpec) -> None:
    if not spec.regular():
        raise CotreeError(f"{spec} is not regular (b_1..b_(r-1) must be 0)")
    if not spec.proper():
        raise CotreeError(f"{spec} has a level with a single interior child and no leaves; it is not a minimal cotree")
    if spec.r == 1 and spec.root_kind == UNION:
        raise CotreeError(f"{spec} is an edgeless graph; the balanced formulas assume r >= 2 or a join root")


def twin_eigenvalue_regular(spec: BalancedSpec) -> tuple[Fraction, int]:
    """Eigenvalue -1 (deepest level join) or 0 (deepest level union) with
    multiplicity ``a_1 ... a_(r-1) (b_r - 1)``."""
    _require_regular(spec)
    lam = Fraction(-1) if spec.deepest_kind == JOIN else Fraction(0)
    return lam, spec.product_a(spec.r - 1) * (spec.b[-1] - 1)


def count_excluding_special(spec: BalancedSpec) -> int:
    """Number of eigenvalues (with multiplicity) other than the twin eigenvalue."""
    _require_regular(spec)
    return spec.product_a(spec.r - 1)


def _special(spec: BalancedSpec) -> tuple[Fraction, int]:
    if spec.r < 2:
        raise CotreeError(f"{spec}: needs depth r >= 2")
    if spec.r == 2 and spec.root_kind == UNION:
        # a_1 disjoint copies of K_(b_2): b_2 - 1 has multiplicity a_1, not a_1 - 1
        raise CotreeError(f"{spec}: a union root needs r >= 3 for the special eigenvalue formula")
    br = spec.b[-1]
    lam = Fraction(br - 1) if spec.deepest_kind == JOIN else Fraction(-br)
    return lam, spec.product_a(spec.r - 2) * (spec.a[spec.r - 2] - 1)


def special_eigenvalue_regular(spec: BalancedSpec) -> tuple[Fraction, int]:
    """``(b_r - 1, a_1 ... a_(r-2) (a_(r-1) - 1))`` when the deepest level is a join,
    ``(-b_r, same multiplicity)`` when it is a union.

    With a join root this is the usual split by the parity of ``r``.
    """
    _require_regular(spec)
    return _special(spec)


def special_eigenvalue_nonregular(spec: BalancedSpec) -> tuple[Fraction, int]:
    """Same eigenvalue and multiplicity as the regular case, for leaf patterns
    where only levels of the deepest kind carry leaves, each at least ``b_r``."""
    if not spec.nonregular_admissible():
        raise CotreeError(
            f"{spec}: leaves are only allowed on levels of the deepest kind (b_i = 0 elsewhere) "
            f"and those levels need b_i >= b_r"
        )
    return _special(spec)


def mult_upper_bound(spec: BalancedSpec, lam) -> int:
    """Bound ``a_1 ... a_(r-2)`` on the multiplicity of any other eigenvalue."""
    _require_regular(spec)
    if spec.r < 2:
        raise CotreeError(f"{spec}: needs depth r >= 2")
    lam = as_rational(lam)
    br = spec.b[-1]
    excluded = {twin_eigenvalue_regular(spec)[0], Fraction(br - 1 if spec.deepest_kind == JOIN else -br)}
    if lam in excluded:
        raise CotreeError(f"lambda={format_rational(lam)} is one of the excluded values {sorted(excluded)}")
    return spec.product_a(spec.r - 2)


# -- spectrum extraction -----------------------------------------------------


def integer_multiplicities(tree: Cotree, lo: int, hi: int) -> dict[int, int]:
    """Multiplicity of every integer eigenvalue in ``[lo, hi]`` (nonzero ones only).

    Equivalent to probing each integer, but ranges whose endpoint counts show
    no eigenvalue inside are skipped, so the cost follows the number of
    distinct eigenvalues rather than the width of the range.
    """
    if lo > hi:
        return {}
    found: dict[int, int] = {}
    for k, c, _, _ in _integer_scan(tree, lo, hi):
        if c.equal:
            found[k] = c.equal
    return found


def _integer_scan(tree: Cotree, lo: int, hi: int):
    """Yield ``(k, counts_at_k, next_k, counts_at_next_k)`` for consecutive probed integers.

    Between ``k`` and ``next_k`` there are no integer eigenvalues; the open gap
    may still hold irrational ones.
    """
    c_lo = eigen_counts(tree, lo)
    if lo == hi:
        yield lo, c_lo, None, None
        return
    c_hi = eigen_counts(tree, hi)
    stack = [(lo, c_lo, hi, c_hi)]
    while stack:
        a, ca, b, cb = stack.pop()
        inside = cb.less - ca.less - ca.equal
        if b - a <= 1 or inside == 0:
            yield a, ca, b, cb
            continue
        m = (a + b) // 2
        cm = eigen_counts(tree, m)
        stack.append((m, cm, b, cb))
        stack.append((a, ca, m, cm))
    yield hi, c_hi, None, None


def full_spectrum(tree: Cotree, epsilon=DEFAULT_EPSILON) -> SpectrumReport:
    """All ``n`` eigenvalues: integers found exactly, the rest bracketed.

    Integers in ``[-(n-1), n-1]`` (the spectral radius is at most ``n-1``)
    are resolved exactly first. Eigenvalue counts left strictly between
    integers are split by bisection at dyadic midpoints until each bracket
    is at most ``epsilon`` wide. A non-integer rational is never an
    eigenvalue of an integer matrix, so brackets never need shrinking onto a
    probe.
    """
    epsilon = as_rational(epsilon)
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {format_rational(epsilon)}")
    n = tree.n_leaves
    radius = max(n - 1, 0)
    entries: list[SpectrumEntry] = []
    for k, ck, nxt, cn in _integer_scan(tree, -radius, radius):
        if ck.equal:
            entries.append(SpectrumEntry(ck.equal, value=Fraction(k)))
        if nxt is None:
            continue
        inside = cn.less - ck.less - ck.equal
        if inside:
            entries.extend(_bisect(tree, Fraction(k), Fraction(nxt), ck.less + ck.equal, inside, epsilon))
    entries.sort(key=lambda e: e.value if e.exact else e.lo)
    total = sum(e.mult for e in entries)
    if total != n:  # pragma: no cover - guarded by the inertia theorem
        raise AssertionError(f"accounted for {total} of {n} eigenvalues")
    width = max((e.width for e in entries), default=Fraction(0))
    return SpectrumReport(n, tuple(entries), width)


def _bisect(tree, lo, hi, le_lo, count, epsilon) -> list[SpectrumEntry]:
    out = []
    stack = [(lo, hi, le_lo, count)]
    while stack:
        lo, hi, le_lo, count = stack.pop()
        if hi - lo <= epsilon:
            out.append(SpectrumEntry(count, lo=lo, hi=hi))
            continue
        mid = (lo + hi) / 2
        c = eigen_counts(tree, mid)
        left = c.less - le_lo
        right = count - left - c.equal
        if c.equal:
            out.append(SpectrumEntry(c.equal, value=mid))
        if left:
            stack.append((lo, mid, le_lo, left))
        if right:
            stack.append((mid, hi, c.less + c.equal, right))
    return out


def energy_of(report: SpectrumReport) -> EnergyResult:
    lower = upper = Fraction(0)
    for e in report.entries:
        if e.exact:
            a = abs(e.value) * e.mult
            lower += a
            upper += a
        else:
            lo_abs, hi_abs = abs(e.lo), abs(e.hi)
            near = Fraction(0) if e.lo < 0 < e.hi else min(lo_abs, hi_abs)
            lower += near * e.mult
            upper += max(lo_abs, hi_abs) * e.mult
    return EnergyResult(lower, upper, lower if report.is_exact else None)


def energy(tree: Cotree, epsilon=DEFAULT_EPSILON) -> EnergyResult:
    """Graph energy (sum of absolute eigenvalues), exact or as a bracket."""
    return energy_of(full_spectrum(tree, epsilon))


def spectrum_kab(a: int, b: int) -> SpectrumReport:
    """Closed-form spectrum of ``K_a`` joined with ``(a-1)(b-1)`` copies of ``K_b``."""
    kab_spec(a, b)  # validates a >= b >= 2
    n = a + b * (a - 1) * (b - 1)
    return SpectrumReport.from_pairs(
        n,
        [
            (-(a - 1) * (b - 1), 1),
            (-1, (a - 1) * ((b - 1) ** 2 + 1)),
            (b - 1, (a - 1) * (b - 1) - 1),
            (a * b - 1, 1),
        ],
    )


def spectrum_pk2(p: int) -> SpectrumReport:
    """Closed-form spectrum of ``(p+1)K_2`` joined with ``(p+1)K_2``."""
    pk2_spec(p)
    return SpectrumReport.from_pairs(
        4 * p + 4,
        [(-(2 * p + 1), 1), (-1, 2 * (p + 1)), (1, 2 * p), (2 * p + 3, 1)],
    )


def is_borderenergetic(tree: Cotree, epsilon=DEFAULT_EPSILON) -> BorderenergeticResult:
    """Compare the energy with ``E(K_n) = 2(n-1)``.

    The verdict needs an exact spectrum or a bracket that excludes ``2(n-1)``;
    otherwise :class:`IndeterminateEnergy` asks for a smaller ``epsilon``.
    """
    report = full_spectrum(tree, epsilon)
    e = energy_of(report)
    n = report.n
    target = Fraction(2 * (n - 1))
    if e.exact is not None:
        verdict = e.exact == target
    elif e.lower <= target <= e.upper:
        raise IndeterminateEnergy(
            f"energy in [{format_rational(e.lower)}, {format_rational(e.upper)}] contains {2 * (n - 1)}; "
            f"tighten epsilon below {format_rational(as_rational(epsilon))}"
        )
    else:
        verdict = False
    complete = {Fraction(n - 1): 1, Fraction(-1): n - 1} if n > 1 else {Fraction(0): 1}
    cospectral = report.is_exact and dict(report.exact_pairs()) == complete
    return BorderenergeticResult(verdict, e, cospectral)
