"""Integer shell enumeration for positive definite forms.

The search kernel walks the standard back-substitution tree with floating
bounds padded by a safety margin; every candidate is accepted or rejected by
an exact int64 evaluation of the doubled gram, so the float layer can only
cost time, never correctness.

The kernel compiles with numba when available.  Set FOCKFORMS_NO_NUMBA=1 to
force the pure path; shell_vectors also takes pure=True for side-by-side
comparison (the benchmark and the oracle tests run both).
"""

from __future__ import annotations

import itertools
import math
import os

import numpy as np

from fockforms.linalg import RatMat, inverse
from fockforms.scalars import QQ

try:
    from numba import njit
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


def numba_enabled():
    return _HAVE_NUMBA and not os.environ.get("FOCKFORMS_NO_NUMBA")


def exact_ldl(gram):
    """G = L D L^T over the rationals; ValueError unless positive definite.

    gram: RatMat.  Returns (L rows, D diagonal) as nested lists of QQ.
    """
    m = gram.nrows
    a = [[gram.entry(i, j) for j in range(m)] for i in range(m)]
    lower = [[QQ(1) if i == j else QQ(0) for j in range(m)] for i in range(m)]
    diag = [QQ(0)] * m
    for k in range(m):
        pivot = a[k][k]
        for s in range(k):
            pivot -= diag[s] * lower[k][s] * lower[k][s]
        if pivot <= 0:
            raise ValueError("form is not positive definite")
        diag[k] = pivot
        for i in range(k + 1, m):
            v = a[i][k]
            for s in range(k):
                v -= diag[s] * lower[i][s] * lower[k][s]
            lower[i][k] = v / pivot
    return lower, diag


def _search(U, D, G2, target, out):
    """Count (and optionally record) integer x with x^T G2 x == target.

    U: float64 upper unit-triangular from the LDL transpose; D: float64
    positive pivots; G2: int64 symmetric; out: int64 (cap, m) buffer, cap may
    be zero for a counting pass.  Returns the number of solutions.
    """
    m = D.shape[0]
    x = np.zeros(m, dtype=np.int64)
    hi = np.zeros(m, dtype=np.int64)
    center = np.zeros(m, dtype=np.float64)
    budget = np.zeros(m, dtype=np.float64)
    found = 0
    cap = out.shape[0]
    i = m - 1
    budget[i] = target + 1e-6
    center[i] = 0.0
    r = math.sqrt(max(budget[i], 0.0) / D[i])
    hi[i] = int(math.floor(-center[i] + r + 1e-9))
    x[i] = int(math.ceil(-center[i] - r - 1e-9)) - 1
    while True:
        x[i] += 1
        if x[i] > hi[i]:
            i += 1
            if i >= m:
                break
            continue
        if i == 0:
            acc = np.int64(0)
            for a in range(m):
                row = np.int64(0)
                for b in range(m):
                    row += G2[a, b] * x[b]
                acc += row * x[a]
            if acc == target:
                if found < cap:
                    for a in range(m):
                        out[found, a] = x[a]
                found += 1
        else:
            step = x[i] + center[i]
            rem = budget[i] - D[i] * step * step
            if rem >= -1e-6:
                i -= 1
                budget[i] = max(rem, 0.0) + 1e-9
                c = 0.0
                for j in range(i + 1, m):
                    c += U[i, j] * x[j]
                center[i] = c
                r = math.sqrt(budget[i] / D[i])
                hi[i] = int(math.floor(-c + r + 1e-9))
                x[i] = int(math.ceil(-c - r - 1e-9)) - 1
    return found


_search_compiled = njit(cache=True)(_search) if _HAVE_NUMBA else None


def shell_vectors(gram2, target, pure=None):
    """All integer vectors with x^T gram2 x == target, rows sorted lex.

    gram2: RatMat, the doubled gram, integral; target: nonnegative integer.
    pure=True runs the uncompiled kernel; default follows numba_enabled().
    """
    m = gram2.nrows
    if target < 0:
        return np.zeros((0, m), dtype=np.int64)
    g2_int = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            v = gram2.entry(i, j)
            if v.denominator != 1:
                raise ValueError("doubled gram must be integral")
            g2_int[i, j] = int(v)
    lower, diag = exact_ldl(gram2)
    U = np.zeros((m, m), dtype=np.float64)
    D = np.zeros(m, dtype=np.float64)
    for i in range(m):
        D[i] = float(diag[i])
        U[i, i] = 1.0
        for j in range(i + 1, m):
            U[i, j] = float(lower[j][i])
    fn = _search if (pure or not numba_enabled()) else _search_compiled
    count = fn(U, D, g2_int, target, np.zeros((0, m), dtype=np.int64))
    out = np.zeros((count, m), dtype=np.int64)
    fn(U, D, g2_int, target, out)
    order = np.lexsort(out.T[::-1])
    return out[order]


def shell_vectors_box(gram2, target):
    """Brute-force oracle: exact dual-diagonal box, exhaustive scan.

    The coordinate bound |x_i|^2 <= target * (gram2^{-1})_{ii} follows from
    Cauchy-Schwarz in the gram2 inner product and never clips a solution.
    """
    m = gram2.nrows
    if target < 0:
        return np.zeros((0, m), dtype=np.int64)
    dual = inverse(gram2)
    radii = []
    for i in range(m):
        bound = QQ(target) * dual.entry(i, i)
        radii.append(_isqrt_rational(bound))
    g2_int = [[int(gram2.entry(i, j)) for j in range(m)] for i in range(m)]
    hits = []
    for x in itertools.product(*[range(-r, r + 1) for r in radii]):
        acc = 0
        for a in range(m):
            row = 0
            for b in range(m):
                row += g2_int[a][b] * x[b]
            acc += row * x[a]
        if acc == target:
            hits.append(x)
    out = np.array(sorted(hits), dtype=np.int64) if hits \
        else np.zeros((0, m), dtype=np.int64)
    return out


def _isqrt_rational(r):
    """floor(sqrt(num/den)) for a nonnegative rational."""
    num, den = int(r.numerator), int(r.denominator)
    if num < 0:
        raise ValueError("negative radicand")
    return math.isqrt(num * den) // den
