"""Dense desk-scale ground truth for cross-checking the cotree algorithms.

Nothing here looks at a cotree: everything works on the explicit adjacency
matrix, so agreement with :mod:`cotree_spectra.diagonalize` is a genuine
independent check.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np

from . import _kernels
from .diagonalize import as_rational
from .graph import Graph

__all__ = ["adjacency", "eigenvalues_float", "rank_exact", "inertia_exact", "OracleError"]

MAX_ADJACENCY_N = 4096
MAX_FLOAT_N = 512
MAX_EXACT_N = 256
# Mersenne prime 2**31 - 1: products of two residues fit in int64
_CERT_PRIME = 2_147_483_647


class OracleError(ValueError):
    pass


def adjacency(g: Graph) -> np.ndarray:
    """Symmetric 0/1 adjacency matrix (int64) with zero diagonal."""
    if g.n > MAX_ADJACENCY_N:
        raise OracleError(f"n={g.n} exceeds the desk-scale guard of {MAX_ADJACENCY_N}")
    a = np.zeros((g.n, g.n), dtype=np.int64)
    if g.edges:
        e = np.array(sorted(g.edges), dtype=np.int64)
        a[e[:, 0], e[:, 1]] = 1
        a[e[:, 1], e[:, 0]] = 1
    return a


def _check_square_symmetric(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise OracleError(f"expected a square matrix, got shape {m.shape}")
    if not np.array_equal(m, m.T):
        raise OracleError("matrix is not symmetric")


def eigenvalues_float(m: np.ndarray, rtol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations."""
    m = np.asarray(m)
    _check_square_symmetric(m)
    n = m.shape[0]
    if n > MAX_FLOAT_N:
        raise OracleError(f"n={n} exceeds {MAX_FLOAT_N}")
    if n == 0:
        return np.zeros(0)
    work = np.array(m, dtype=np.float64, copy=True)
    vals, _, off = _kernels.jacobi_eigenvalues(work, rtol, max_sweeps)
    if off > rtol * max(np.linalg.norm(m.astype(np.float64)), 1.0):
        raise OracleError(f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {off:.3e})")
    return vals


def _integer_matrix(m: np.ndarray, shift: Fraction, sign: int) -> np.ndarray:
    """Object array of Python ints proportional (positive factor) to ``m + sign*shift*I``."""
    n = m.shape[0]
    if np.issubdtype(m.dtype, np.integer) or m.dtype == bool:
        den = shift.denominator
        out = m.astype(object) * den
    else:
        entries = [[as_rational(v) for v in row] for row in m.tolist()]
        den = shift.denominator
        for row in entries:
            for v in row:
                den = lcm(den, v.denominator)
        out = np.empty((n, n), dtype=object)
        for i, row in enumerate(entries):
            for j, v in enumerate(row):
                out[i, j] = v.numerator * (den // v.denominator)
    step = sign * shift.numerator * (den // shift.denominator)
    for i in range(n):
        out[i, i] += step
    return out


def _rank_mod_p(mi: np.ndarray) -> int:
    red = (mi % _CERT_PRIME).astype(np.int64)
    return int(_kernels.rank_mod_p(red, _CERT_PRIME))


def _bareiss_rank(mi: np.ndarray) -> int:
    m = mi.copy()
    rows, cols = m.shape
    prev = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c] != 0)
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        p = m[r, c]
        m[r + 1 :, c + 1 :] = (p * m[r + 1 :, c + 1 :] - np.outer(m[r + 1 :, c], m[r, c + 1 :])) // prev
        m[r + 1 :, c] = 0
        prev = p
        r += 1
    return r


def rank_exact(m: np.ndarray, shift=0) -> int:
    """Rank of ``m - shift*I`` over the rationals.

    Fraction-free (Bareiss) elimination on an integer multiple of the matrix.
    A rank computed modulo a prime never exceeds the rational rank, so a
    full rank modulo ``2**31 - 1`` is accepted as a proof of full rank and
    the exact elimination is skipped.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise OracleError(f"expected a square matrix, got shape {m.shape}")
    n = m.shape[0]
    if n > MAX_EXACT_N:
        raise OracleError(f"n={n} exceeds {MAX_EXACT_N}")
    if n == 0:
        return 0
    mi = _integer_matrix(m, as_rational(shift), -1)
    if _rank_mod_p(mi) == n:
        return n
    return _bareiss_rank(mi)


def _gershgorin_sign(w: np.ndarray) -> int:
    """+1 / -1 if the integer matrix is strictly diagonally dominant with a
    positive / negative diagonal (hence definite), else 0."""
    diag = w.diagonal()
    radius = np.abs(w).sum(axis=1) - np.abs(diag)
    if np.all(diag > radius):
        return 1
    if np.all(-diag > radius):
        return -1
    return 0


_TRIU: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _triu(r: int) -> tuple[np.ndarray, np.ndarray]:
    if r not in _TRIU:
        _TRIU[r] = np.triu_indices(r)
    return _TRIU[r]


def inertia_exact(m: np.ndarray, shift=0) -> tuple[int, int, int]:
    """Inertia ``(k_plus, k_zero, k_minus)`` of ``m + shift*I``, exactly.

    Symmetric fraction-free elimination: pivots are taken from the diagonal
    with simultaneous row/column swaps. If the remaining diagonal is all zero
    but an off-diagonal entry ``(i, j)`` is not, row and column ``j`` are
    added to row and column ``i`` (a congruence), which makes the new
    diagonal entry ``2 * m[i, j]`` nonzero. Consecutive Bareiss pivots are
    leading principal minors, and the sign of their ratio is the sign of the
    corresponding LDL^T diagonal entry. Strictly diagonally dominant inputs
    are definite and are answered without elimination.
    """
    m = np.asarray(m)
    _check_square_symmetric(m)
    n = m.shape[0]
    if n > MAX_EXACT_N:
        raise OracleError(f"n={n} exceeds {MAX_EXACT_N}")
    w = _integer_matrix(m, as_rational(shift), +1)
    if n:
        definite = _gershgorin_sign(w)
        if definite > 0:
            return n, 0, 0
        if definite < 0:
            return 0, 0, n
    kp = kz = km = 0
    prev = 1
    for k in range(n):
        sub = w[k:, k:]
        nz = np.flatnonzero(sub.diagonal() != 0)
        if len(nz) == 0:
            off = np.argwhere(sub != 0)
            if len(off) == 0:
                kz += n - k
                break
            i, j = (int(t) for t in off[0])
            w[k + i, k:] += w[k + j, k:]
            w[k:, k + i] += w[k:, k + j]
            piv = k + i
        else:
            piv = k + int(nz[0])
        if piv != k:
            w[[k, piv], k:] = w[[piv, k], k:]
            w[k:, [k, piv]] = w[k:, [piv, k]]
        p = w[k, k]
        if (p > 0) == (prev > 0):
            kp += 1
        else:
            km += 1
        r = n - k - 1
        if r:
            # symmetric Schur update on the upper triangle, mirrored
            iu, ju = _triu(r)
            rest = w[k + 1 :, k + 1 :]
            col = w[k, k + 1 :]
            vals = (p * rest[iu, ju] - col[iu] * col[ju]) // prev
            rest[iu, ju] = vals
            rest[ju, iu] = vals
        prev = p
    return kp, kz, km
