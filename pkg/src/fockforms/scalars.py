"""The coefficient ring Q(i, sqrt2)[pi, 1/pi].

A Scalar is a finite Laurent polynomial in a formal symbol pi whose
coefficients are elements of Q(i, sqrt2), stored as quadruples
(a, b, c, d) meaning a + b*i + c*sqrt2 + d*i*sqrt2.  The ring is an
integral domain (Laurent polynomials over a field), so exact zero tests
are honest: a residual is zero iff every stored quadruple is zero.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as QQ  # same arithmetic, much faster
except ImportError:  # pragma: no cover
    QQ = Fraction

_Q0 = QQ(0)
_Q1 = QQ(1)


def _quad_mul(x, y):
    # basis 1, i, r (=sqrt2), ir with i*i = -1, r*r = 2
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    return (
        a1 * a2 - b1 * b2 + 2 * (c1 * c2 - d1 * d2),
        a1 * b2 + b1 * a2 + 2 * (c1 * d2 + d1 * c2),
        a1 * c2 + c1 * a2 - (b1 * d2 + d1 * b2),
        a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
    )


class Scalar:
    """Element of Q(i, sqrt2)[pi, 1/pi], keyed by pi-exponent."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # terms: dict pi_exponent -> (a, b, c, d), zero quadruples dropped
        self.terms = terms if terms is not None else {}

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_rational(r, pi_exp=0):
        r = QQ(r)
        if r == 0:
            return Scalar()
        return Scalar({pi_exp: (r, _Q0, _Q0, _Q0)})

    @staticmethod
    def unit(a=0, b=0, c=0, d=0, pi_exp=0):
        quad = (QQ(a), QQ(b), QQ(c), QQ(d))
        if not any(quad):
            return Scalar()
        return Scalar({pi_exp: quad})

    @staticmethod
    def zero():
        return Scalar()

    @staticmethod
    def one():
        return Scalar.from_rational(1)

    @staticmethod
    def i():
        return Scalar.unit(b=1)

    @staticmethod
    def sqrt2():
        return Scalar.unit(c=1)

    @staticmethod
    def pi_power(k):
        return Scalar.from_rational(1, pi_exp=k)

    @staticmethod
    def two_pow_half(q):
        """2**(q/2) for integer q >= 0: 2**(q//2) times sqrt2 when q is odd."""
        if q < 0:
            raise ValueError("negative half-power of 2")
        base = QQ(2) ** (q // 2)
        if q % 2 == 0:
            return Scalar.unit(a=base)
        return Scalar.unit(c=base)

    @staticmethod
    def minus_i_over(denom, pi_exp=-1):
        """-i / (denom * pi**(-pi_exp)); default is -i/(denom*pi)."""
        return Scalar.unit(b=QQ(-1, denom), pi_exp=pi_exp)

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        out = dict(self.terms)
        for k, q in other.terms.items():
            if k in out:
                p = out[k]
                s = (p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3])
                if any(s):
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = q
        return Scalar(out)

    def __neg__(self):
        return Scalar({k: (-a, -b, -c, -d) for k, (a, b, c, d) in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            return self.scale(other)
        out = {}
        for k1, q1 in self.terms.items():
            for k2, q2 in other.terms.items():
                k = k1 + k2
                prod = _quad_mul(q1, q2)
                if k in out:
                    p = out[k]
                    out[k] = (p[0] + prod[0], p[1] + prod[1], p[2] + prod[2], p[3] + prod[3])
                else:
                    out[k] = prod
        return Scalar({k: q for k, q in out.items() if any(q)})

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, r):
        r = QQ(r)
        if r == 0:
            return Scalar()
        return Scalar({k: (a * r, b * r, c * r, d * r) for k, (a, b, c, d) in self.terms.items()})

    def __pow__(self, n):
        if n < 0:
            inv = self.monomial_inverse()
            return inv ** (-n)
        acc = Scalar.one()
        for _ in range(n):
            acc = acc * self
        return acc

    def monomial_inverse(self):
        """Inverse, defined only for single-term scalars."""
        if len(self.terms) != 1:
            raise ValueError("only monomial scalars are invertible here")
        (k, (a, b, c, d)), = self.terms.items()
        # conjugate over i, then over sqrt2: norm is rational
        # N = (a^2 + b^2 - 2c^2 - 2d^2)^2 + (2*(ac+bd)... ) use two-step conjugation
        c1 = (a, -b, c, -d)  # conj over i
        m1 = _quad_mul((a, b, c, d), c1)  # lies in Q(sqrt2): (x, 0, y, 0)
        x, _, y, _ = m1
        c2 = (x, _Q0, -y, _Q0)
        m2 = _quad_mul(m1, c2)  # rational: (n, 0, 0, 0)
        n = m2[0]
        if n == 0:
            raise ZeroDivisionError("scalar is zero")
        numer = _quad_mul(c1, c2)
        return Scalar({-k: tuple(t / n for t in numer)})

    # -- predicates -----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted((k, tuple(q)) for k, q in self.terms.items())))

    # -- serialization --------------------------------------------------

    def to_json(self):
        out = []
        for k in sorted(self.terms):
            a, b, c, d = self.terms[k]
            row = [k]
            for x in (a, b, c, d):
                row.append(int(x.numerator))
                row.append(int(x.denominator))
            out.append(row)
        return out

    @staticmethod
    def from_json(data):
        terms = {}
        for row in data:
            k = row[0]
            quad = tuple(QQ(row[1 + 2 * j], row[2 + 2 * j]) for j in range(4))
            if any(quad):
                terms[int(k)] = quad
        return Scalar(terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            a, b, c, d = self.terms[k]
            atoms = []
            if a:
                atoms.append(str(a))
            if b:
                atoms.append(f"{b}*i")
            if c:
                atoms.append(f"{c}*r2")
            if d:
                atoms.append(f"{d}*i*r2")
            body = " + ".join(atoms)
            if k == 0:
                parts.append(f"({body})")
            else:
                parts.append(f"({body})*pi^{k}")
        return " + ".join(parts)


ZERO = Scalar.zero()
ONE = Scalar.one()
I = Scalar.i()
MINUS_I_4PI = Scalar.unit(b=QQ(-1, 4), pi_exp=-1)  # -i/(4 pi)


def rational_of(s: Scalar):
    """Extract a pure rational value; raises if s is not rational."""
    if s.is_zero():
        return QQ(0)
    if len(s.terms) != 1 or 0 not in s.terms:
        raise ValueError(f"not rational: {s!r}")
    a, b, c, d = s.terms[0]
    if b or c or d:
        raise ValueError(f"not rational: {s!r}")
    return a
