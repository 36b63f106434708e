"""Genus-n representation numbers and Schur-valued payloads for definite
integral lattices.

Conventions: the gram G pairs coordinate vectors by (x, y) = x^T G y; a
coefficient matrix beta records half norms, (x_i, x_j) = 2 beta_{ij}, so
diagonal entries are integers and off-diagonal entries half-integers.  All
arithmetic on betas and payloads is exact.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from fockforms.enumeration import exact_ldl, shell_vectors
from fockforms.linalg import RatMat, rank
from fockforms.scalars import QQ
from fockforms.schur import harmonic_project_vec, ssyt_enumerate, young_apply_vec


class Lattice:
    """Positive definite integral lattice, optionally with a coset shift."""

    def __init__(self, gram, coset_h=None, modulus=None):
        if isinstance(gram, RatMat):
            self.gram = gram
        else:
            self.gram = RatMat.from_rows(gram)
        m = self.gram.nrows
        if self.gram.ncols != m:
            raise ValueError("gram must be square")
        if self.gram.transpose() != self.gram:
            raise ValueError("gram must be symmetric")
        self.rank = m
        self.gram2 = self.gram.scale(QQ(2))
        for i in range(m):
            for j in range(m):
                if self.gram2.entry(i, j).denominator != 1:
                    raise ValueError("entries must be half-integral")
            if self.gram.entry(i, i).denominator != 1:
                raise ValueError("diagonal must be integral")
        exact_ldl(self.gram)  # positive definite or ValueError
        if (coset_h is None) != (modulus is None):
            raise ValueError("coset needs both shift vectors and modulus")
        if coset_h is not None:
            modulus = int(modulus)
            if modulus < 1:
                raise ValueError("modulus must be a positive integer")
            shifts = tuple(tuple(int(v) % modulus for v in h) for h in coset_h)
            if any(len(h) != m for h in shifts):
                raise ValueError("coset shift length must match the rank")
            self.coset_h = shifts
            self.modulus = modulus
        else:
            self.coset_h = None
            self.modulus = None
        self._shell_cache = {}

    @staticmethod
    def from_json(data):
        if isinstance(data, str):
            data = json.loads(data)
        if data.get("field", "Q") not in ("Q", "QQ"):
            raise ValueError("only rational lattices are supported")
        gram = [[_parse_entry(v) for v in row] for row in data["gram"]]
        coset = data.get("coset")
        if coset is None:
            return Lattice(gram)
        return Lattice(gram, coset_h=coset["h"], modulus=coset["modulus"])

    @staticmethod
    def load(path):
        with open(path, "r", encoding="utf-8") as fh:
            return Lattice.from_json(json.load(fh))

    def shell(self, norm2, column=0):
        """Integer vectors with (x, x) = norm2 in the column's coset.

        norm2 is the doubled beta diagonal entry; result rows are sorted.
        """
        key = (norm2, column if self.coset_h is not None else 0)
        cached = self._shell_cache.get(key)
        if cached is not None:
            return cached
        raw = shell_vectors(self.gram2, 2 * norm2)
        if self.coset_h is not None:
            h = self.coset_h[column]
            b = self.modulus
            keep = np.all(raw % b == np.array(h, dtype=np.int64), axis=1)
            raw = raw[keep]
        raw.setflags(write=False)
        self._shell_cache[key] = raw
        return raw


def _parse_entry(v):
    # accepts ints, "a/b" strings, and floats (half-integers are exact in binary)
    if isinstance(v, str):
        num, _, den = v.partition("/")
        return QQ(int(num), int(den or 1))
    return QQ(v)


class BetaMatrix:
    """Symmetric half-integral coefficient index; stored as doubled integers."""

    def __init__(self, doubled):
        rows = [list(map(int, r)) for r in doubled]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("beta must be square")
        for i in range(n):
            if rows[i][i] % 2:
                raise ValueError("beta diagonal must be integral")
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("beta must be symmetric")
        self.doubled = tuple(tuple(r) for r in rows)
        self.n = n

    @staticmethod
    def from_entries(entries):
        doubled = []
        for row in entries:
            vals = [QQ(2) * _parse_entry(v) for v in row]
            if any(v.denominator != 1 for v in vals):
                raise ValueError("entries must be half-integral")
            doubled.append([int(v) for v in vals])
        return BetaMatrix(doubled)

    @staticmethod
    def diagonal(values):
        n = len(values)
        return BetaMatrix([[2 * values[i] if i == j else 0 for j in range(n)]
                           for i in range(n)])

    def entry(self, i, j):
        return QQ(self.doubled[i][j], 2)

    def trace(self):
        return sum(self.doubled[i][i] for i in range(self.n)) // 2

    def is_psd(self):
        mat = self.doubled
        for size in range(1, self.n + 1):
            for subset in itertools.combinations(range(self.n), size):
                if _det_int([[mat[a][b] for b in subset] for a in subset]) < 0:
                    return False
        return True

    def rank(self):
        return rank(RatMat.from_rows([[QQ(v) for v in row]
                                      for row in self.doubled]))

    def sort_key(self):
        return (self.trace(),) + tuple(itertools.chain.from_iterable(self.doubled))

    def to_json(self):
        return [[_emit_rational(self.entry(i, j)) for j in range(self.n)]
                for i in range(self.n)]

    def __eq__(self, other):
        return isinstance(other, BetaMatrix) and self.doubled == other.doubled

    def __hash__(self):
        return hash(self.doubled)

    def __repr__(self):
        return f"BetaMatrix({self.doubled})"


def _det_int(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        total += (-1) ** j * rows[0][j] * _det_int(minor)
    return total


def _emit_rational(r):
    if r.denominator == 1:
        return int(r)
    return float(r)  # half-integers are exact in binary


# ---------------------------------------------------------------------------
# representation enumeration
# ---------------------------------------------------------------------------

def enumerate_representations(lat, beta, n=None):
    """All ordered tuples (x_1..x_n) with (x_i, x_j) = 2 beta_{ij}.

    Returns a list of n-tuples of coordinate tuples, lexicographically
    ordered.  Negative diagonal targets give the empty list.
    """
    if n is None:
        n = beta.n
    if n != beta.n:
        raise ValueError("genus must match the beta size")
    if lat.coset_h is not None and len(lat.coset_h) != n:
        raise ValueError("coset shift count must match the genus")
    if any(beta.doubled[i][i] < 0 for i in range(n)):
        return []
    g2 = [[int(lat.gram2.entry(i, j)) for j in range(lat.rank)]
          for i in range(lat.rank)]
    shells = [lat.shell(beta.doubled[i][i], column=i) for i in range(n)]
    out = []

    def pair2(x, y):
        acc = 0
        for a in range(lat.rank):
            row = 0
            for b in range(lat.rank):
                row += g2[a][b] * y[b]
            acc += row * x[a]
        return acc

    def extend(chosen):
        k = len(chosen)
        if k == n:
            out.append(tuple(tuple(int(v) for v in x) for x in chosen))
            return
        for cand in shells[k]:
            if all(pair2(chosen[t], cand) == 2 * beta.doubled[t][k]
                   for t in range(k)):
                extend(chosen + [cand])

    extend([])
    return out


# ---------------------------------------------------------------------------
# payload assembly
# ---------------------------------------------------------------------------

@dataclass
class GenusCoefficient:
    beta: BetaMatrix
    count: int
    payload: dict = field(default_factory=dict)

    @property
    def rank_t(self):
        return self.beta.rank()

    def to_json(self):
        payload = {}
        for key in sorted(self.payload):
            terms = self.payload[key]
            payload[key] = [[list(word), [int(c.numerator), int(c.denominator)]]
                            for word, c in sorted(terms.items())]
        return {
            "beta": self.beta.to_json(),
            "rank": self.rank_t,
            "count": self.count,
            "payload": payload,
        }


def filling_key(filling):
    return "|".join(",".join(str(v) for v in row) for row in filling)


def _column_major_values(lam, filling):
    vals = []
    for c in range(lam[0]):
        for r in range(len(lam)):
            if lam[r] > c:
                vals.append(filling[r][c])
    return vals


def moment_tensor(reps, slot_values, m):
    """Sum over tuples of the outer product of the selected columns.

    slot_values: for each tensor slot, which column of the tuple to use
    (1-based).  Exact by int64 accumulation with an overflow guard.
    """
    ell = len(slot_values)
    if not reps:
        return {}
    arrays = [np.array([x[v - 1] for x in reps], dtype=np.int64)
              for v in slot_values]
    biggest = max(int(np.abs(a).max(initial=0)) for a in arrays)
    if len(reps) * (max(biggest, 1) ** ell) >= 2 ** 62:
        raise OverflowError("moment accumulation would overflow int64")
    letters = "abcdefgh"
    spec = ",".join(f"z{letters[s]}" for s in range(ell)) \
        + "->" + "".join(letters[:ell])
    dense = np.einsum(spec, *arrays)
    out = {}
    for idx in itertools.product(range(m), repeat=ell):
        v = int(dense[idx])
        if v:
            out[tuple(i + 1 for i in idx)] = QQ(v)
    return out


def assemble_coefficient(lat, beta, lam=(), n=None):
    """Count plus the harmonic Schur payload for each semistandard filling."""
    lam = tuple(lam)
    if n is None:
        n = beta.n
    if lam and len(lam) > n:
        raise ValueError("shape has more rows than the genus")
    reps = enumerate_representations(lat, beta, n)
    coeff = GenusCoefficient(beta=beta, count=len(reps))
    if not lam:
        return coeff
    for filling in ssyt_enumerate(lam, n):
        slots = _column_major_values(lam, filling)
        raw = moment_tensor(reps, slots, lat.rank)
        shaped = young_apply_vec(lam, raw) if raw else {}
        projected = harmonic_project_vec(shaped, lat.gram, lam) if shaped else {}
        coeff.payload[filling_key(filling)] = projected
    return coeff


def series_betas(n, bound):
    """All PSD half-integral beta with diagonal <= bound, trace-then-lex order."""
    out = []
    diag_choices = itertools.product(range(bound + 1), repeat=n)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for diag in diag_choices:
        ranges = []
        for (i, j) in pairs:
            top = math.isqrt(4 * diag[i] * diag[j])
            ranges.append(range(-top, top + 1))
        for offs in itertools.product(*ranges):
            doubled = [[0] * n for _ in range(n)]
            for i in range(n):
                doubled[i][i] = 2 * diag[i]
            for (i, j), v in zip(pairs, offs):
                doubled[i][j] = doubled[j][i] = v
            cand = BetaMatrix(doubled)
            if cand.is_psd():
                out.append(cand)
    out.sort(key=BetaMatrix.sort_key)
    return out


def series_table(lat, lam=(), n=1, bound=0, jobs=1):
    """Ordered GenusCoefficient list over all PSD beta up to the bound."""
    betas = series_betas(n, bound)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_assemble_star,
                                 [(lat, b, lam, n) for b in betas]))
    else:
        rows = [assemble_coefficient(lat, b, lam, n) for b in betas]
    return rows


def _assemble_star(args):
    return assemble_coefficient(*args)
