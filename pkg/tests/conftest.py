import sys
from fractions import Fraction

import numpy as np
import pytest

from cotree_spectra import oracle
from cotree_spectra.graph import to_graph
from cotree_spectra.parsing import parse_expression

# nine vertices; the last one is adjacent to all others
APEX9 = "((1+1)*1+1)*((1*1)*1+1)*1"


@pytest.fixture
def apex9():
    return parse_expression(APEX9)


def dense(tree):
    return oracle.adjacency(to_graph(tree))


def oracle_mult(tree, lam) -> int:
    return tree.n_leaves - oracle.rank_exact(dense(tree), Fraction(lam))


def oracle_eigs(tree) -> np.ndarray:
    return oracle.eigenvalues_float(dense(tree))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
