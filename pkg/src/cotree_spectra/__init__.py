"""Eigenvalue location, multiplicity and energy for cographs via their cotrees."""
from ._jit import USE_NUMBA
from .cotree import (
    JOIN,
    LEAF,
    UNION,
    BalancedSpec,
    Cotree,
    CotreeError,
    NodeKind,
    build_balanced,
    build_family_kab,
    build_family_pk2,
    canonical_form,
    normalize,
    random_cotree,
)
from .diagonalize import (
    DiagnosisResult,
    EigenCounts,
    batch_reduce_equal_children,
    count_in_interval,
    diagonalize,
    eigen_counts,
    multiplicity,
)
from .graph import Graph, NotACograph, from_graph, read_graph, to_graph
from .parsing import ParseError, parse_expression
from .spectra import (
    EnergyResult,
    IndeterminateEnergy,
    SpectrumReport,
    count_excluding_special,
    energy,
    full_spectrum,
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

__version__ = "0.1.0"

__all__ = [
    "BalancedSpec",
    "batch_reduce_equal_children",
    "build_balanced",
    "build_family_kab",
    "build_family_pk2",
    "canonical_form",
    "Cotree",
    "CotreeError",
    "count_excluding_special",
    "count_in_interval",
    "DiagnosisResult",
    "diagonalize",
    "eigen_counts",
    "EigenCounts",
    "energy",
    "EnergyResult",
    "from_graph",
    "full_spectrum",
    "Graph",
    "IndeterminateEnergy",
    "is_borderenergetic",
    "JOIN",
    "LEAF",
    "mult_minus_one",
    "mult_upper_bound",
    "mult_zero",
    "multiplicity",
    "NodeKind",
    "normalize",
    "NotACograph",
    "parse_expression",
    "ParseError",
    "random_cotree",
    "read_graph",
    "special_eigenvalue_nonregular",
    "special_eigenvalue_regular",
    "spectrum_kab",
    "spectrum_pk2",
    "SpectrumReport",
    "to_graph",
    "twin_eigenvalue_regular",
    "UNION",
    "USE_NUMBA",
]
