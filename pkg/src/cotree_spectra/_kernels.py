"""Numeric hot loops.

Each kernel is plain Python over numpy arrays, compiled by numba unless
``COTREE_SPECTRA_NO_NUMBA`` is set (see :mod:`cotree_spectra._jit`).
"""
import numpy as np

from ._jit import jit

ZERO_RTOL = 1e-12


@jit
def _pair_step_float(join, alpha, beta, tol):
    # returns (n_removed, removed_1, removed_2, keeps_value, remaining)
    s = alpha + beta
    if join:
        if abs(s - 2.0) > tol:
            return 1, s - 2.0, 0.0, True, (alpha * beta - 1.0) / (s - 2.0)
        if abs(beta - 1.0) <= tol:
            return 1, 0.0, 0.0, True, 1.0
        return 2, -(1.0 - beta) ** 2, 1.0, False, 0.0
    if abs(s) > tol:
        return 1, s, 0.0, True, alpha * beta / s
    if abs(beta) <= tol:
        return 1, 0.0, 0.0, True, 0.0
    return 2, -beta, beta, False, 0.0


@jit
def diag_counts_float(kind, first_child, n_children, n_leaf_children, x):
    """Inertia ``(k_plus, k_zero, k_minus)`` of ``A + xI`` in machine precision."""
    m = kind.shape[0]
    tol = ZERO_RTOL * max(1.0, abs(x))
    counts = np.zeros(3, dtype=np.int64)  # plus, zero, minus
    if m == 1:
        counts[0 if x > tol else (2 if x < -tol else 1)] += 1
        return counts[0], counts[1], counts[2]
    carry = np.zeros(m)
    has = np.zeros(m, dtype=np.bool_)
    for v in range(m - 1, -1, -1):
        k = kind[v]
        if k == 0:
            continue
        join = k == 2
        have = False
        cur = 0.0
        t = n_leaf_children[v]
        if t > 0:
            pivot = x - 1.0 if join else x
            if abs(pivot) > tol:
                # closed form for t equal siblings: t-1 removed values share sign(pivot)
                counts[0 if pivot > 0 else 2] += t - 1
                cur = (x + t - 1.0) / t if join else x / t
                have = True
            else:
                for _ in range(t):
                    if not have:
                        cur = x
                        have = True
                        continue
                    nrem, r1, r2, keep, val = _pair_step_float(join, x, cur, tol)
                    counts[0 if r1 > tol else (2 if r1 < -tol else 1)] += 1
                    if nrem == 2:
                        counts[0 if r2 > tol else (2 if r2 < -tol else 1)] += 1
                    have = keep
                    cur = val
        s = first_child[v]
        for c in range(s, s + n_children[v]):
            if not has[c]:
                continue
            if not have:
                cur = carry[c]
                have = True
                continue
            nrem, r1, r2, keep, val = _pair_step_float(join, carry[c], cur, tol)
            counts[0 if r1 > tol else (2 if r1 < -tol else 1)] += 1
            if nrem == 2:
                counts[0 if r2 > tol else (2 if r2 < -tol else 1)] += 1
            have = keep
            cur = val
        if have:
            carry[v] = cur
            has[v] = True
    if has[0]:
        d = carry[0]
        counts[0 if d > tol else (2 if d < -tol else 1)] += 1
    return counts[0], counts[1], counts[2]


@jit
def _off_norm(a):
    # summed directly: ||a||^2 - ||diag||^2 cancels catastrophically near convergence
    n = a.shape[0]
    acc = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            acc += a[i, j] * a[i, j]
    return np.sqrt(2.0 * acc)


@jit
def jacobi_eigenvalues(a, rtol, max_sweeps):
    """Cyclic Jacobi rotations on a symmetric float matrix (overwritten).

    Stops when the off-diagonal Frobenius norm drops below ``rtol * ||a||_F``.
    Returns ``(eigenvalues ascending, sweeps used, final off-diagonal norm)``.
    """
    n = a.shape[0]
    total = np.sqrt(np.sum(a * a))
    target = rtol * total
    sweeps = 0
    for _ in range(max_sweeps):
        off = _off_norm(a)
        if off <= target:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta  # theta**2 would overflow
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
    off = _off_norm(a)
    return np.sort(np.diag(a).copy()), sweeps, off


@jit
def _inv_mod(a, p):
    # a^(p-2) mod p, p prime
    result = 1
    base = a % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


@jit
def rank_mod_p(m, p):
    """Rank of an int64 matrix (entries already reduced into ``[0, p)``) over GF(p).

    ``p`` must be a prime below ``2**31`` so products fit in int64. The matrix
    is overwritten.
    """
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        piv = -1
        for i in range(r, rows):
            if m[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = m[r, j]
                m[r, j] = m[piv, j]
                m[piv, j] = tmp
        inv = _inv_mod(m[r, c], p)
        for i in range(r + 1, rows):
            f = (m[i, c] * inv) % p
            if f == 0:
                continue
            for j in range(c, cols):
                m[i, j] = (m[i, j] - f * m[r, j]) % p
        r += 1
        if r == rows:
            break
    return r
