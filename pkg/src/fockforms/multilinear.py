"""Sparse multilinear algebra on Fock polynomials x exterior algebra x tensor words.

A MixedForm is a finite sum of monomials

    z-monomial  (x)  wedge of generators w_{alpha,mu}  (x)  tensor word in V

with Scalar coefficients.  Keys are canonical tuples, so equality and zero
tests are exact dictionary comparisons.

Index conventions (all 1-based): Fock variables carry (index, column) with
index in 1..m and column in 1..n; exterior generators are pairs (alpha, mu)
with alpha in 1..p and mu in p+1..p+q, ordered lexicographically; tensor
letters live in 1..m.  epsilon(k) = +1 for k <= p and -1 for k > p.
"""

from __future__ import annotations

from dataclasses import dataclass

from fockforms.scalars import QQ, Scalar


@dataclass(frozen=True)
class SpaceParams:
    p: int
    q: int
    n: int = 1

    def __post_init__(self):
        if self.p < 1 or self.q < 1 or self.n < 1:
            raise ValueError("p, q, n must all be >= 1")

    @property
    def m(self):
        return self.p + self.q

    def eps(self, k):
        return 1 if k <= self.p else -1

    def positive(self):
        return range(1, self.p + 1)

    def negative(self):
        return range(self.p + 1, self.p + self.q + 1)

    def letters(self):
        return range(1, self.m + 1)


# ---------------------------------------------------------------------------
# term-key helpers
# ---------------------------------------------------------------------------

def _fock_mul(f1, f2):
    if not f1:
        return f2
    if not f2:
        return f1
    acc = dict(f1)
    for key, e in f2:
        acc[key] = acc.get(key, 0) + e
    return tuple(sorted((k, e) for k, e in acc.items() if e))


def _fock_bump(fock, key, delta):
    acc = dict(fock)
    e = acc.get(key, 0) + delta
    if e:
        acc[key] = e
    else:
        acc.pop(key, None)
    return tuple(sorted(acc.items()))


def _wedge_insert(wedge, gen):
    """Left-multiply by one generator; returns (sign, new_wedge) or None."""
    if gen in wedge:
        return None
    pos = 0
    while pos < len(wedge) and wedge[pos] < gen:
        pos += 1
    sign = -1 if pos % 2 else 1
    return sign, wedge[:pos] + (gen,) + wedge[pos:]


def _wedge_merge(w1, w2):
    """Sign-tracked merge of two sorted generator tuples; None if they collide."""
    sign = 1
    out = list(w1)
    for gen in w2:
        if gen in out:
            return None
        pos = 0
        while pos < len(out) and out[pos] < gen:
            pos += 1
        if (len(out) - pos) % 2:
            sign = -sign
        out.insert(pos, gen)
    return sign, tuple(out)


def _sort_with_sign(gens):
    """Sort an arbitrary generator list, counting transpositions; None on repeat."""
    sign = 1
    out = []
    for gen in gens:
        if gen in out:
            return None
        pos = 0
        while pos < len(out) and out[pos] < gen:
            pos += 1
        if (len(out) - pos) % 2:
            sign = -sign
        out.insert(pos, gen)
    return sign, tuple(out)


# ---------------------------------------------------------------------------
# MixedForm
# ---------------------------------------------------------------------------

class MixedForm:
    """Finite Scalar-linear combination of (fock, wedge, word) monomials."""

    __slots__ = ("params", "terms")

    def __init__(self, params: SpaceParams, terms=None):
        self.params = params
        self.terms = terms if terms is not None else {}

    @staticmethod
    def vacuum(params):
        return MixedForm(params, {((), (), ()): Scalar.one()})

    @staticmethod
    def monomial(params, z=(), w=(), t=(), coeff=None):
        """Build a one-term form; z is a list of (index, column, exponent)."""
        fock = tuple(sorted(((idx, col), e) for idx, col, e in z if e))
        sw = _sort_with_sign(tuple((a, mu) for a, mu in w))
        if sw is None:
            return MixedForm(params)
        sign, wedge = sw
        c = coeff if coeff is not None else Scalar.one()
        if sign < 0:
            c = -c
        if c.is_zero():
            return MixedForm(params)
        return MixedForm(params, {(fock, wedge, tuple(t)): c})

    def _accum(self, key, coeff):
        if coeff.is_zero():
            return
        cur = self.terms.get(key)
        if cur is None:
            self.terms[key] = coeff
        else:
            s = cur + coeff
            if s.is_zero():
                del self.terms[key]
            else:
                self.terms[key] = s

    def __add__(self, other):
        out = MixedForm(self.params, dict(self.terms))
        for key, c in other.terms.items():
            out._accum(key, c)
        return out

    def __sub__(self, other):
        out = MixedForm(self.params, dict(self.terms))
        for key, c in other.terms.items():
            out._accum(key, -c)
        return out

    def __neg__(self):
        return MixedForm(self.params, {k: -c for k, c in self.terms.items()})

    def scale(self, s):
        if not isinstance(s, Scalar):
            s = Scalar.from_rational(QQ(s))
        if s.is_zero():
            return MixedForm(self.params)
        out = MixedForm(self.params)
        for key, c in self.terms.items():
            out._accum(key, c * s)
        return out

    def __mul__(self, other):
        """Graded product: Fock parts multiply, wedges merge, words concatenate."""
        out = MixedForm(self.params)
        for (f1, w1, t1), c1 in self.terms.items():
            for (f2, w2, t2), c2 in other.terms.items():
                merged = _wedge_merge(w1, w2)
                if merged is None:
                    continue
                sign, wedge = merged
                c = c1 * c2
                if sign < 0:
                    c = -c
                out._accum((_fock_mul(f1, f2), wedge, t1 + t2), c)
        return out

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, MixedForm):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        raise TypeError("MixedForm is mutable; not hashable")

    def nnz(self):
        return len(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    # -- serialization ---------------------------------------------------

    def to_json(self):
        out = []
        for (fock, wedge, word), c in self.sorted_terms():
            out.append({
                "z": [[idx, col, e] for (idx, col), e in fock],
                "w": [[a, mu] for a, mu in wedge],
                "t": list(word),
                "c": c.to_json(),
            })
        return out

    @staticmethod
    def from_json(params, data):
        out = MixedForm(params)
        m = params.m
        for item in data:
            for idx, col, e in item["z"]:
                if not (1 <= idx <= m and 1 <= col <= params.n):
                    raise ValueError(f"fock variable ({idx},{col}) outside space")
            for a, mu in item["w"]:
                if not (1 <= a <= params.p and params.p < mu <= m):
                    raise ValueError(f"wedge generator ({a},{mu}) outside space")
            for letter in item["t"]:
                if not 1 <= letter <= m:
                    raise ValueError(f"tensor letter {letter} outside space")
            piece = MixedForm.monomial(
                params,
                z=[tuple(v) for v in item["z"]],
                w=[tuple(g) for g in item["w"]],
                t=item["t"],
                coeff=Scalar.from_json(item["c"]),
            )
            out = out + piece
        return out

    def __repr__(self):
        if not self.terms:
            return "MixedForm(0)"
        bits = []
        for (fock, wedge, word), c in self.sorted_terms()[:8]:
            z = "*".join(
                f"z[{i},{j}]" + (f"^{e}" if e > 1 else "") for (i, j), e in fock
            ) or "1"
            w = "^".join(f"w[{a},{mu}]" for a, mu in wedge) or "1"
            t = "(x)".join(f"e{k}" for k in word) or "1"
            bits.append(f"({c!r}) {z} | {w} | {t}")
        more = "" if len(self.terms) <= 8 else f" ... +{len(self.terms) - 8} terms"
        return " + ".join(bits) + more


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

class LinearOperator:
    """Composable wrapper around a MixedForm endomorphism."""

    __slots__ = ("fn",)

    def __init__(self, fn):
        self.fn = fn

    def __call__(self, form):
        return self.fn(form)

    def __matmul__(self, other):
        # (A @ B)(x) = A(B(x))
        return LinearOperator(lambda form: self.fn(other.fn(form)))

    def __add__(self, other):
        return LinearOperator(lambda form: self.fn(form) + other.fn(form))

    def __sub__(self, other):
        return LinearOperator(lambda form: self.fn(form) - other.fn(form))

    def __neg__(self):
        return LinearOperator(lambda form: -self.fn(form))

    def scaled(self, s):
        return LinearOperator(lambda form: self.fn(form).scale(s))


def identity_op():
    return LinearOperator(lambda form: form)


def zero_op():
    return LinearOperator(lambda form: MixedForm(form.params))


def _lift(term_fn):
    """Promote a per-term rewriter (key, coeff) -> iterable of (key, coeff)."""
    def apply(form):
        out = MixedForm(form.params)
        for key, c in form.terms.items():
            for nkey, nc in term_fn(form.params, key, c):
                out._accum(nkey, nc)
        return out
    return LinearOperator(apply)


def z_mul(idx, col=1):
    """Multiplication by z_{idx,col}."""
    def term(params, key, c):
        fock, wedge, word = key
        yield (_fock_bump(fock, (idx, col), 1), wedge, word), c
    return _lift(term)


def z_del(idx, col=1):
    """The derivation d/dz_{idx,col}."""
    def term(params, key, c):
        fock, wedge, word = key
        for fkey, e in fock:
            if fkey == (idx, col):
                yield (_fock_bump(fock, fkey, -1), wedge, word), c.scale(e)
    return _lift(term)


def wedge_left(alpha, mu):
    """Exterior left multiplication by the generator w_{alpha,mu}."""
    gen = (alpha, mu)
    def term(params, key, c):
        fock, wedge, word = key
        ins = _wedge_insert(wedge, gen)
        if ins is not None:
            sign, nw = ins
            yield (fock, nw, word), (-c if sign < 0 else c)
    return _lift(term)


def interior(alpha, mu):
    """Graded contraction dual to wedge_left; an anti-derivation of degree -1."""
    gen = (alpha, mu)
    def term(params, key, c):
        fock, wedge, word = key
        for s, g in enumerate(wedge):
            if g == gen:
                sign = -1 if s % 2 else 1
                yield (fock, wedge[:s] + wedge[s + 1:], word), (-c if sign < 0 else c)
                break
    return _lift(term)


def _wedge_replace(params, key, c, old_second, new_second, slot_kind):
    """Derivation replacing one index of each matching generator."""
    fock, wedge, word = key
    for s, (a, mu) in enumerate(wedge):
        if slot_kind == "pos" and a == old_second:
            replaced = wedge[:s] + ((new_second, mu),) + wedge[s + 1:]
        elif slot_kind == "neg" and mu == old_second:
            replaced = wedge[:s] + ((a, new_second),) + wedge[s + 1:]
        else:
            continue
        sorted_ = _sort_with_sign(replaced)
        if sorted_ is None:
            continue
        sign, nw = sorted_
        yield (fock, nw, word), (-c if sign < 0 else c)


def deriv_pos(alpha, beta):
    """D_{alpha,beta}: sends w_{beta,mu} to w_{alpha,mu} in each slot."""
    def term(params, key, c):
        yield from _wedge_replace(params, key, c, beta, alpha, "pos")
    return _lift(term)


def deriv_neg(mu, nu):
    """D_{mu,nu}: sends w_{alpha,nu} to w_{alpha,mu} in each slot."""
    def term(params, key, c):
        yield from _wedge_replace(params, key, c, nu, mu, "neg")
    return _lift(term)


def rho_x(alpha, mu):
    """Derivation on tensor words swapping e_alpha <-> e_mu letterwise."""
    def term(params, key, c):
        fock, wedge, word = key
        for s, letter in enumerate(word):
            if letter == alpha:
                yield (fock, wedge, word[:s] + (mu,) + word[s + 1:]), c
            elif letter == mu:
                yield (fock, wedge, word[:s] + (alpha,) + word[s + 1:]), c
    return _lift(term)


def insert_vector(j, coeffs):
    """Insert the vector sum_k coeffs[k-1] e_k at tensor slot j (1-based).

    Letters previously at positions >= j shift right; valid for any operand
    word of length >= j-1.
    """
    pairs = [(k + 1, QQ(c)) for k, c in enumerate(coeffs) if QQ(c) != 0]
    def term(params, key, c):
        fock, wedge, word = key
        if len(word) < j - 1:
            raise ValueError(f"slot {j} out of range for word of length {len(word)}")
        for letter, r in pairs:
            yield (fock, wedge, word[:j - 1] + (letter,) + word[j - 1:]), c.scale(r)
    return _lift(term)


def insert_letter(j, letter):
    def term(params, key, c):
        fock, wedge, word = key
        if len(word) < j - 1:
            raise ValueError(f"slot {j} out of range for word of length {len(word)}")
        yield (fock, wedge, word[:j - 1] + (letter,) + word[j - 1:]), c
    return _lift(term)


def insert_metric(i, j, mode="full"):
    """Insert a metric tensor so its two letters land at result positions i, j.

    mode 'plus' inserts sum_alpha e_alpha (x) e_alpha, 'minus' inserts
    sum_mu e_mu (x) e_mu, and 'full' their difference.  The operand word
    must have length (result length) - 2.
    """
    if i == j:
        raise ValueError("metric insertion needs two distinct positions")
    lo, hi = (i, j) if i < j else (j, i)
    def term(params, key, c):
        fock, wedge, word = key
        if len(word) < hi - 2:
            raise ValueError(f"positions ({i},{j}) out of range")
        for letter in params.letters():
            if mode == "plus" and letter > params.p:
                continue
            if mode == "minus" and letter <= params.p:
                continue
            sign = 1
            if mode == "full" and letter > params.p:
                sign = -1
            nw = word[:lo - 1] + (letter,) + word[lo - 1:hi - 2] + (letter,) + word[hi - 2:]
            yield (fock, wedge, nw), (c if sign > 0 else -c)
    return _lift(term)


def metric_pair_insertion(j, k, mode="full"):
    """The composed insertion A_j(e) A_k(e) summed over the metric letters.

    Literal composition: first insert at slot k of the operand (length L,
    giving L+1), then at slot j of the result (giving L+2).  Requires
    1 <= k <= L+1 and 1 <= j <= L+2.
    """
    def apply(form):
        params = form.params
        out = MixedForm(params)
        for letter in params.letters():
            if mode == "plus" and letter > params.p:
                continue
            if mode == "minus" and letter <= params.p:
                continue
            sign = -1 if (mode == "full" and letter > params.p) else 1
            op = insert_letter(j, letter) @ insert_letter(k, letter)
            piece = op(form)
            out = out + (piece if sign > 0 else -piece)
        return out
    return LinearOperator(apply)


def a_of_f(ell, mode="full"):
    """Total metric insertion into words of result length ell.

    Equals half the double sum of metric_pair_insertion over j in 1..ell,
    k in 1..ell-1; by the j/k symmetry this is the plain sum over unordered
    pairs of result positions, which is how it is computed here.
    """
    def apply(form):
        out = MixedForm(form.params)
        for i in range(1, ell + 1):
            for j in range(i + 1, ell + 1):
                out = out + insert_metric(i, j, mode)(form)
        return out
    return LinearOperator(apply)


def contraction(i, j, invariant_form=True):
    """Pair tensor slots i < j with the bilinear form and remove them.

    With invariant_form=True the signature form (e_k, e_k) = eps(k) is used;
    with False the positive-definite majorant variant pairs (e_k, e_k) = 1.
    """
    if not i < j:
        raise ValueError("contraction wants i < j")
    def term(params, key, c):
        fock, wedge, word = key
        if len(word) < j:
            raise ValueError(f"slots ({i},{j}) out of range for length {len(word)}")
        a, b = word[i - 1], word[j - 1]
        if a != b:
            return
        val = params.eps(a) if invariant_form else 1
        nw = word[:i - 1] + word[i:j - 1] + word[j:]
        yield (fock, wedge, nw), (c if val > 0 else -c)
    return _lift(term)


def expansion(i, j):
    """Adjoint of contraction(i, j): inserts the dual of the invariant form.

    For the signature form the dual tensor is sum_k eps(k) e_k (x) e_k,
    placed at result positions i, j; this coincides with
    insert_metric(i, j, 'full').
    """
    return insert_metric(i, j, "full")


def tensor_permute(perm):
    """Act by a permutation on tensor words: the letter in slot s moves to perm(s).

    perm is a tuple with perm[s-1] = image of s, on words of length len(perm).
    """
    ell = len(perm)
    def term(params, key, c):
        fock, wedge, word = key
        if len(word) != ell:
            raise ValueError("permutation length does not match word")
        nw = [0] * ell
        for s in range(ell):
            nw[perm[s] - 1] = word[s]
        yield (fock, wedge, tuple(nw)), c
    return _lift(term)


def tensor_matrix_apply(form, matrix, ell, alphabet):
    """Apply a word-basis matrix to the tensor slot.

    matrix maps column word -> dict(row word -> rational), over words of
    length ell in letters 1..alphabet; other-length terms pass through only
    if ell matches, else an error is raised.
    """
    out = MixedForm(form.params)
    for (fock, wedge, word), c in form.terms.items():
        if len(word) != ell:
            raise ValueError("tensor matrix applied to word of wrong length")
        col = matrix.get(word)
        if col is None:
            raise ValueError(f"word {word} outside matrix domain")
        for row_word, r in col.items():
            out._accum((fock, wedge, row_word), c.scale(r))
    return out
