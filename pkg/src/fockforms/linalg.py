"""Exact rational matrices, sparse rows over QQ.

A RatMat stores one dict per row mapping column index -> nonzero QQ entry.
Everything here is plain Gaussian elimination; sizes stay in the hundreds,
so exact arithmetic with gmpy2-backed rationals is fast enough.
"""

from __future__ import annotations

from fockforms.scalars import QQ


class RatMat:
    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows, ncols, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else [dict() for _ in range(nrows)]

    @staticmethod
    def zero(nrows, ncols):
        return RatMat(nrows, ncols)

    @staticmethod
    def identity(n):
        return RatMat(n, n, [{i: QQ(1)} for i in range(n)])

    @staticmethod
    def from_rows(entries, ncols=None):
        """entries: list of lists of rationals, or list of dicts."""
        rows = []
        width = ncols
        for row in entries:
            if isinstance(row, dict):
                d = {j: QQ(v) for j, v in row.items() if QQ(v) != 0}
            else:
                d = {j: QQ(v) for j, v in enumerate(row) if QQ(v) != 0}
                if width is None:
                    width = len(row)
            rows.append(d)
        if width is None:
            width = 1 + max((j for d in rows for j in d), default=-1)
        return RatMat(len(rows), width, rows)

    @staticmethod
    def diagonal(values):
        vals = [QQ(v) for v in values]
        n = len(vals)
        return RatMat(n, n, [({i: vals[i]} if vals[i] != 0 else {}) for i in range(n)])

    def copy(self):
        return RatMat(self.nrows, self.ncols, [dict(r) for r in self.rows])

    def entry(self, i, j):
        return self.rows[i].get(j, QQ(0))

    def set_entry(self, i, j, v):
        v = QQ(v)
        if v == 0:
            self.rows[i].pop(j, None)
        else:
            self.rows[i][j] = v

    def __eq__(self, other):
        if not isinstance(other, RatMat):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.rows == other.rows

    def __hash__(self):
        raise TypeError("RatMat not hashable")

    def is_zero(self):
        return all(not r for r in self.rows)

    def __add__(self, other):
        out = self.copy()
        for i, r in enumerate(other.rows):
            tr = out.rows[i]
            for j, v in r.items():
                s = tr.get(j, QQ(0)) + v
                if s == 0:
                    tr.pop(j, None)
                else:
                    tr[j] = s
        return out

    def __sub__(self, other):
        return self + other.scale(QQ(-1))

    def scale(self, c):
        c = QQ(c)
        if c == 0:
            return RatMat.zero(self.nrows, self.ncols)
        return RatMat(self.nrows, self.ncols,
                      [{j: v * c for j, v in r.items()} for r in self.rows])

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = RatMat.zero(self.nrows, other.ncols)
        orows = other.rows
        for i, r in enumerate(self.rows):
            acc = {}
            for k, a in r.items():
                for j, b in orows[k].items():
                    s = acc.get(j, QQ(0)) + a * b
                    if s == 0:
                        acc.pop(j, None)
                    else:
                        acc[j] = s
            out.rows[i] = acc
        return out

    def transpose(self):
        out = RatMat.zero(self.ncols, self.nrows)
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out.rows[j][i] = v
        return out

    def apply(self, vec):
        """Multiply by a column vector given as dict j -> QQ."""
        out = {}
        for i, r in enumerate(self.rows):
            s = QQ(0)
            for j, v in r.items():
                w = vec.get(j)
                if w is not None:
                    s += v * w
            if s != 0:
                out[i] = s
        return out

    def to_lists(self):
        return [[self.entry(i, j) for j in range(self.ncols)] for i in range(self.nrows)]

    def __repr__(self):
        return f"RatMat({self.nrows}x{self.ncols}, nnz={sum(len(r) for r in self.rows)})"


def _eliminate(rows, ncols, augment=None):
    """Row-reduce in place; returns pivot column list.  augment, if given,
    is a parallel list of row dicts receiving the same row operations."""
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i].get(col):
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        if augment is not None:
            augment[rank], augment[piv] = augment[piv], augment[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = {j: v * inv for j, v in rows[rank].items()}
        if augment is not None:
            augment[rank] = {j: v * inv for j, v in augment[rank].items()}
        for i in range(len(rows)):
            if i == rank:
                continue
            f = rows[i].get(col)
            if not f:
                continue
            src = rows[rank]
            dst = rows[i]
            for j, v in src.items():
                s = dst.get(j, QQ(0)) - f * v
                if s == 0:
                    dst.pop(j, None)
                else:
                    dst[j] = s
            if augment is not None:
                srca = augment[rank]
                dsta = augment[i]
                for j, v in srca.items():
                    s = dsta.get(j, QQ(0)) - f * v
                    if s == 0:
                        dsta.pop(j, None)
                    else:
                        dsta[j] = s
        pivots.append(col)
        rank += 1
    return pivots


def rank(mat):
    rows = [dict(r) for r in mat.rows]
    return len(_eliminate(rows, mat.ncols))


def inverse(mat):
    if mat.nrows != mat.ncols:
        raise ValueError("only square matrices invert")
    rows = [dict(r) for r in mat.rows]
    aug = [dict(r) for r in RatMat.identity(mat.nrows).rows]
    pivots = _eliminate(rows, mat.ncols, augment=aug)
    if len(pivots) != mat.nrows:
        raise ValueError("matrix is singular")
    return RatMat(mat.nrows, mat.ncols, aug)


def solve(mat, rhs):
    """Solve mat @ X = rhs for square nonsingular mat; rhs a RatMat."""
    return inverse(mat) @ rhs


def nullspace(mat):
    """Basis of the right kernel, one RatMat column per free variable."""
    rows = [dict(r) for r in mat.rows]
    pivots = _eliminate(rows, mat.ncols)
    pivot_set = set(pivots)
    free = [j for j in range(mat.ncols) if j not in pivot_set]
    basis = RatMat.zero(mat.ncols, len(free))
    for k, j in enumerate(free):
        basis.rows[j][k] = QQ(1)
        for r, pc in enumerate(pivots):
            v = rows[r].get(j)
            if v:
                basis.rows[pc][k] = -v
    return basis
