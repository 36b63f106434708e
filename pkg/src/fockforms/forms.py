"""Schwartz forms in the Fock model and the exact identity verifiers.

The basic family phi(params, word) maps an input word over column indices
1..n to a MixedForm; phi_nq0 is the scalar-valued base form, phi_0ell the
tensor factor, and their graded product gives the general member.  Every
theorem-level statement about these forms is exposed here as a residual
function returning a MixedForm that must be exactly zero.

All printed constants that the residuals are sensitive to live in the
Conventions record so tests can corrupt one at a time and watch the zero
residuals break.
"""

from __future__ import annotations

import functools
import itertools
import time
from dataclasses import dataclass

from fockforms.linalg import RatMat, inverse
from fockforms.multilinear import (
    LinearOperator,
    MixedForm,
    SpaceParams,
    a_of_f,
    identity_op,
    insert_letter,
    interior,
    metric_pair_insertion,
    rho_x,
    tensor_matrix_apply,
    tensor_permute,
    wedge_left,
    z_del,
    z_mul,
)
from fockforms.scalars import MINUS_I_4PI, QQ, Scalar
from fockforms.schur import (
    matrix_to_word_map,
    schur_harmonic_projector,
    young_apply_vec,
)
from fockforms.weil import LOWERING, omega, omega_kprime


@dataclass(frozen=True)
class Conventions:
    """The printed constants the identity suite is sensitive to."""
    d_second_rat: object = QQ(1, 4)      # rational part of the 1/(4 pi) in d''
    lambda_offset: int = -1              # denominator p + q + ell + offset
    sigma_negative_sign: int = -1        # sign of the negative block in A_j(sigma)
    metric_sign: int = -1                # sign of the metric correction in the recursion
    kprime_weight: object = QQ(1)        # multiplier of the diagonal weight in K'


DEFAULT_CONVENTIONS = Conventions()


# ---------------------------------------------------------------------------
# the forms
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def phi_nq0(params):
    """Scalar-valued base form: one wedge block per column."""
    if params.n > params.p:
        raise ValueError("phi_nq0 needs n <= p")
    p, q, n = params.p, params.q, params.n
    coeff = Scalar.two_pow_half(n * q) * MINUS_I_4PI ** (n * q)
    total = MixedForm(params)
    for alphas in itertools.product(itertools.product(params.positive(), repeat=q), repeat=n):
        z = {}
        w = []
        for i in range(1, n + 1):
            for r in range(1, q + 1):
                a = alphas[i - 1][r - 1]
                z[(a, i)] = z.get((a, i), 0) + 1
                w.append((a, p + r))
        piece = MixedForm.monomial(params,
                                   z=[(idx, col, e) for (idx, col), e in z.items()],
                                   w=w, t=(), coeff=coeff)
        total = total + piece
    return total


@functools.lru_cache(maxsize=None)
def phi_0ell(params, word):
    """Tensor factor: positive-index letters paired against the input columns."""
    for col in word:
        if not 1 <= col <= params.n:
            raise ValueError(f"input column {col} outside 1..{params.n}")
    ell = len(word)
    coeff = MINUS_I_4PI ** ell
    total = MixedForm(params)
    for beta in itertools.product(params.positive(), repeat=ell):
        z = {}
        for b, col in zip(beta, word):
            z[(b, col)] = z.get((b, col), 0) + 1
        total = total + MixedForm.monomial(
            params,
            z=[(idx, col, e) for (idx, col), e in z.items()],
            w=(), t=beta, coeff=coeff)
    return total


@functools.lru_cache(maxsize=None)
def phi(params, word):
    """phi(params, word) = phi_nq0 * phi_0ell(word); word is over columns."""
    return phi_nq0(params) * phi_0ell(params, tuple(word))


def phi_ell(params, ell):
    """The n = 1 family member of tensor degree ell; zero for ell < 0."""
    if ell < 0:
        return MixedForm(params)
    if params.n != 1:
        raise ValueError("phi_ell is the n = 1 reduction")
    return phi(params, (1,) * ell)


def phi_linear(params, combo):
    """phi extended linearly over a dict word -> rational."""
    out = MixedForm(params)
    for word, r in combo.items():
        out = out + phi(params, tuple(word)).scale(QQ(r))
    return out


class FormFamily:
    """A word-indexed family of MixedForms with fixed tensor degree."""

    __slots__ = ("params", "ell", "lam", "fn")

    def __init__(self, params, ell, fn, lam=None):
        self.params = params
        self.ell = ell
        self.lam = lam
        self.fn = fn

    def __call__(self, word):
        return self.fn(tuple(word))


def phi_family(params, ell):
    return FormFamily(params, ell, lambda w: phi(params, w))


@functools.lru_cache(maxsize=None)
def signature_form(params):
    return RatMat.diagonal([params.eps(k) for k in range(1, params.m + 1)])


@functools.lru_cache(maxsize=None)
def harmonic_word_map(lam, params):
    """pi_[lam] on the output tensor slot, column-keyed over letters 1..m."""
    mat = schur_harmonic_projector(lam, signature_form(params))
    return matrix_to_word_map(mat, params.m, sum(lam))


def apply_output_projector(form, lam):
    wmap = harmonic_word_map(tuple(lam), form.params)
    return tensor_matrix_apply(form, wmap, sum(lam), form.params.m)


def phi_nq_bracket_lambda(params, lam):
    """Harmonic Schur member: project the input word by the shape, the output
    tensor slot by the harmonic Schur projector.

    Shapes with more rows than n give the zero family (no semistandard
    content); n <= p is still required.
    """
    lam = tuple(lam)
    ell = sum(lam)
    if params.n > params.p:
        raise ValueError("needs n <= p")

    def fn(word):
        if len(word) != ell:
            raise ValueError("word length must match the shape size")
        shaped = young_apply_vec(lam, {tuple(word): QQ(1)})
        base = phi_linear(params, shaped)
        if ell < 2:
            return base
        return apply_output_projector(base, lam)

    return FormFamily(params, ell, fn, lam=lam)


# ---------------------------------------------------------------------------
# differential operators
# ---------------------------------------------------------------------------

def _op_sum(pieces):
    pieces = list(pieces)
    def apply(form):
        out = MixedForm(form.params)
        for coeff, op in pieces:
            out = out + op(form).scale(coeff)
        return out
    return LinearOperator(apply)


def d_operator(params, variant="full", conv=DEFAULT_CONVENTIONS):
    """The total differential or one of its three graded pieces."""
    p, q, n = params.p, params.q, params.n
    prime = []
    second = []
    vpart = []
    for a in params.positive():
        for mu in params.negative():
            wedge = wedge_left(a, mu)
            for j in range(1, n + 1):
                prime.append((Scalar.from_rational(-4, pi_exp=1),
                              wedge @ z_del(a, j) @ z_del(mu, j)))
                second.append((Scalar.from_rational(conv.d_second_rat, pi_exp=-1),
                               wedge @ z_mul(a, j) @ z_mul(mu, j)))
            vpart.append((Scalar.one(), wedge @ rho_x(a, mu)))
    if variant == "dF_prime":
        return _op_sum(prime)
    if variant == "dF_doubleprime":
        return _op_sum(second)
    if variant == "dV":
        return _op_sum(vpart)
    if variant == "full":
        return _op_sum(prime + second + vpart)
    raise ValueError(f"unknown d variant {variant}")


def a_sigma(params, j, col=1, conv=DEFAULT_CONVENTIONS):
    """Fock image of the coordinate insertion at tensor slot j, input column col."""
    pieces = []
    i_pos = Scalar.i()
    i_neg = Scalar.unit(b=conv.sigma_negative_sign)
    for a in params.positive():
        ins = insert_letter(j, a)
        pieces.append((i_pos, ins @ z_del(a, col)))
        pieces.append((i_pos * Scalar.from_rational(QQ(-1, 4), pi_exp=-1), ins @ z_mul(a, col)))
    for mu in params.negative():
        ins = insert_letter(j, mu)
        pieces.append((i_neg, ins @ z_del(mu, col)))
        pieces.append((i_neg * Scalar.from_rational(QQ(-1, 4), pi_exp=-1), ins @ z_mul(mu, col)))
    return _op_sum(pieces)


def a_sigma_combo(params, j, coeffs, conv=DEFAULT_CONVENTIONS):
    """Column-linear combination sum_l coeffs[l-1] * a_sigma(col = l)."""
    ops = [a_sigma(params, j, col=l, conv=conv) for l in range(1, params.n + 1)]
    def apply(form):
        out = MixedForm(form.params)
        for op, c in zip(ops, coeffs):
            c = QQ(c)
            if c != 0:
                out = out + op(form).scale(c)
        return out
    return LinearOperator(apply)


def h_prime(params, j):
    pieces = []
    for a in params.positive():
        for mu in params.negative():
            pieces.append((Scalar.one(),
                           insert_letter(j, mu) @ interior(a, mu) @ z_del(a, 1)))
    return _op_sum(pieces)


def h_second(params, j):
    pieces = []
    for a in params.positive():
        for mu in params.negative():
            pieces.append((Scalar.one(),
                           insert_letter(j, a) @ interior(a, mu) @ z_mul(mu, 1)))
    return _op_sum(pieces)


def h_op(params):
    pieces = []
    for a in params.positive():
        for mu in params.negative():
            pieces.append((Scalar.one(), interior(a, mu) @ z_mul(mu, 1) @ z_del(a, 1)))
    return _op_sum(pieces)


def lambda_form(params, ell, j, conv=DEFAULT_CONVENTIONS):
    """Primitive attached to slot j; the denominator uses the operand's degree."""
    denom = params.p + params.q + ell + conv.lambda_offset
    coeff = Scalar.unit(b=QQ(-1, denom))
    return h_prime(params, j)(phi_ell(params, ell)).scale(coeff)


def psi_product(params, ell):
    """The (q-1)-form primitive, built from the degree-zero member."""
    coeff = QQ(-1, 2 * (params.p + params.q - 1))
    return (h_op(params)(phi_ell(params, 0)) * phi_0ell(params, (1,) * ell)).scale(coeff)


def psi_direct(params, ell):
    """Same primitive via the full member; agreement is a verified identity."""
    coeff = QQ(-1, 2 * (params.p + params.q + ell - 1))
    return h_op(params)(phi_ell(params, ell)).scale(coeff)


def euler_form(params):
    """Invariant exterior form of degree q; zero when q is odd."""
    q = params.q
    out = MixedForm(params)
    if q % 2:
        return out
    k = q // 2

    def omega_cap(mu, nu):
        acc = MixedForm(params)
        for a in params.positive():
            acc = acc + MixedForm.monomial(params, w=[(a, mu), (a, nu)])
        return acc

    for sigma in itertools.permutations(range(1, q + 1)):
        sgn = _perm_sign_tuple(sigma)
        piece = MixedForm.vacuum(params)
        for r in range(k):
            piece = piece * omega_cap(params.p + sigma[2 * r], params.p + sigma[2 * r + 1])
        out = out + (piece if sgn > 0 else -piece)
    coeff = Scalar.from_rational(QQ(-1, 4), pi_exp=-1) ** k
    return out.scale(coeff * Scalar.from_rational(QQ(1, _factorial(k))))


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _perm_sign_tuple(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# recursion building blocks (n = 1)
# ---------------------------------------------------------------------------

def piece_A(params, ell, j):
    """(i/4pi) sum_mu z_mu (x) A_j(e_mu), applied to the degree ell-1 member."""
    base = phi_ell(params, ell - 1)
    out = MixedForm(params)
    for mu in params.negative():
        out = out + (insert_letter(j, mu) @ z_mul(mu, 1))(base)
    return out.scale(Scalar.unit(b=QQ(1, 4), pi_exp=-1))


def piece_B(params, ell, j):
    """i sum_a (d/dz_a phi_{q,0}) . (A_j(e_a) phi_{0,ell-1})."""
    base0 = phi_ell(params, 0)
    basetail = phi_0ell(params, (1,) * (ell - 1))
    out = MixedForm(params)
    for a in params.positive():
        out = out + z_del(a, 1)(base0) * insert_letter(j, a)(basetail)
    return out.scale(Scalar.i())


def piece_C(params, ell, j, mode):
    """(1/4pi) sum_k A_{jk}(metric) on the degree ell-2 member."""
    base = phi_ell(params, ell - 2)
    out = MixedForm(params)
    for k in range(1, ell):
        out = out + metric_pair_insertion(j, k, mode)(base)
    return out.scale(Scalar.from_rational(QQ(1, 4), pi_exp=-1))


def metric_total(params, ell, mode, form):
    """A(metric) = half the ordered double sum of slot insertions."""
    out = MixedForm(params)
    for j in range(1, ell + 1):
        for k in range(1, ell):
            out = out + metric_pair_insertion(j, k, mode)(form)
    return out.scale(QQ(1, 2))


# ---------------------------------------------------------------------------
# identity residuals: each returns a MixedForm that the theory says is zero
# ---------------------------------------------------------------------------

def residual_closedness(params, word, variant, conv=DEFAULT_CONVENTIONS):
    return d_operator(params, variant, conv)(phi(params, tuple(word)))


def residual_kprime_weight(params, ell, conv=DEFAULT_CONVENTIONS):
    base = phi_ell(params, ell)
    out = MixedForm(params)
    for a in params.positive():
        out = out + (z_mul(a, 1) @ z_del(a, 1))(base)
    return out - base.scale(QQ(conv.kprime_weight) * (params.q + ell))


def residual_kprime_weight_reversed(params, ell, conv=DEFAULT_CONVENTIONS):
    base = phi_ell(params, ell)
    out = MixedForm(params)
    for a in params.positive():
        out = out + (z_del(a, 1) @ z_mul(a, 1))(base)
    return out - base.scale(QQ(conv.kprime_weight) * (params.p + params.q + ell))


def _input_derivation(word, j, k):
    """E_{jk} on a word over columns: replace one letter j by k, summed."""
    out = {}
    for s, letter in enumerate(word):
        if letter == j:
            nw = word[:s] + (k,) + word[s + 1:]
            out[nw] = out.get(nw, 0) + 1
    return out


def residual_fock_kprime(params, word, j, k, conv=DEFAULT_CONVENTIONS):
    """omega(k'_{jk}) phi(w) - phi(E_{jk} w) - delta_{jk} (m/2) phi(w)."""
    word = tuple(word)
    lhs = omega_kprime(params, j, k)(phi(params, word))
    rhs = phi_linear(params, _input_derivation(word, j, k))
    if j == k:
        rhs = rhs + phi(params, word).scale(QQ(conv.kprime_weight) * QQ(params.m, 2))
    return lhs - rhs


def residual_lem3a(params, ell, j, conv=DEFAULT_CONVENTIONS):
    lhs = a_sigma(params, j, 1, conv)(phi_ell(params, ell - 1))
    rhs = (phi_ell(params, ell)
           + piece_A(params, ell, j)
           + piece_B(params, ell, j)
           + piece_C(params, ell, j, "plus"))
    return lhs - rhs


def residual_prop3a(params, ell, j, conv=DEFAULT_CONVENTIONS):
    lhs = d_operator(params, "full", conv)(lambda_form(params, ell - 1, j, conv))
    rhs = -(piece_A(params, ell, j)
            + piece_B(params, ell, j)
            + piece_C(params, ell, j, "minus"))
    return lhs - rhs


def residual_recursion(params, ell, j, conv=DEFAULT_CONVENTIONS):
    """Recursion: the metric correction enters with the sign that makes the
    lemma/proposition pair consistent (see Conventions.metric_sign)."""
    correction = piece_C(params, ell, j, "full").scale(QQ(conv.metric_sign))
    rhs = (a_sigma(params, j, 1, conv)(phi_ell(params, ell - 1))
           + d_operator(params, "full", conv)(lambda_form(params, ell - 1, j, conv))
           + correction)
    return phi_ell(params, ell) - rhs


def residual_psi_consistency(params, ell):
    return psi_product(params, ell) - psi_direct(params, ell)


def residual_psi_base(params, conv=DEFAULT_CONVENTIONS):
    lhs = omega(LOWERING, params)(phi_ell(params, 0))
    return lhs - d_operator(params, "full", conv)(psi_product(params, 0))


def residual_lemma4a(params, ell, conv=DEFAULT_CONVENTIONS):
    lhs = omega(LOWERING, params)(phi_ell(params, ell))
    rhs = omega(LOWERING, params)(phi_ell(params, 0)) * phi_0ell(params, (1,) * ell)
    for j in range(1, ell + 1):
        rhs = rhs - piece_B(params, ell, j)
    rhs = rhs - a_of_f(ell, "plus")(phi_ell(params, ell - 2)).scale(
        Scalar.from_rational(QQ(1, 4), pi_exp=-1))
    return lhs - rhs


def residual_lemma4b_i(params, ell, conv=DEFAULT_CONVENTIONS):
    def d_fock(form):
        return (d_operator(params, "dF_prime", conv)(form)
                + d_operator(params, "dF_doubleprime", conv)(form))
    lhs = d_fock(psi_product(params, ell))
    rhs = d_fock(psi_product(params, 0)) * phi_0ell(params, (1,) * ell)
    for j in range(1, ell + 1):
        rhs = rhs - piece_B(params, ell, j).scale(QQ(1, 2))
    return lhs - rhs


def residual_lemma4b_ii(params, ell, conv=DEFAULT_CONVENTIONS):
    lhs = d_operator(params, "dV", conv)(psi_product(params, ell))
    rhs = MixedForm(params)
    for j in range(1, ell + 1):
        rhs = rhs + piece_A(params, ell, j).scale(QQ(1, 2))
    return lhs - rhs


def residual_lowering(params, ell, conv=DEFAULT_CONVENTIONS):
    lhs = omega(LOWERING, params)(phi_ell(params, ell))
    primitive = psi_product(params, ell)
    for j in range(1, ell + 1):
        primitive = primitive + lambda_form(params, ell - 1, j, conv).scale(QQ(1, 2))
    rhs = d_operator(params, "full", conv)(primitive)
    rhs = rhs - a_of_f(ell, "full")(phi_ell(params, ell - 2)).scale(
        Scalar.from_rational(QQ(1, 4), pi_exp=-1))
    return lhs - rhs


def residual_equivariance(params, word, perm):
    """phi(s . w) - (1 (x) 1 (x) s) phi(w) on the output slots."""
    word = tuple(word)
    moved = [0] * len(word)
    for s, letter in enumerate(word):
        moved[perm[s] - 1] = letter
    lhs = phi(params, tuple(moved))
    rhs = tensor_permute(perm)(phi(params, word))
    return lhs - rhs


def sigma_word_plain(params, cols, conv=DEFAULT_CONVENTIONS):
    """sigma_ell(eps_{i_1} (x) ... (x) eps_{i_ell}) as a Fock-side operator."""
    op = None
    for col in cols:
        atom = a_sigma(params, 1, col, conv)
        op = atom if op is None else op @ atom
    return op if op is not None else identity_op()


def sigma_word_transformed(params, cols, a_mat, conv=DEFAULT_CONVENTIONS):
    """sigma((a^{-1} eps)_word) with the argument substituted by x a.

    Substituting x -> x a turns the coordinate atoms of column k into the
    a-weighted combination over columns; the input vectors pick up a^{-1}.
    Exact cancellation against sigma_word_plain is the invariance statement.
    """
    a_inv = inverse(a_mat)
    op = None
    for col in cols:
        vec = [a_inv.entry(r, col - 1) for r in range(params.n)]
        weighted = [QQ(0)] * params.n
        for k in range(params.n):
            if vec[k] == 0:
                continue
            for l in range(params.n):
                weighted[l] += a_mat.entry(l, k) * vec[k]
        atom = a_sigma_combo(params, 1, weighted, conv)
        op = atom if op is None else op @ atom
    return op if op is not None else identity_op()


def residual_sigma_gl(params, cols, a_mat, test_form, conv=DEFAULT_CONVENTIONS):
    return (sigma_word_transformed(params, cols, a_mat, conv)(test_form)
            - sigma_word_plain(params, cols, conv)(test_form))


def holomorphicity_residuals(params, ell, conv=DEFAULT_CONVENTIONS):
    """Returns (main, killed): main is the projected lowering identity with its
    exact primitive, killed is the projection of the metric correction."""
    if params.n != 1:
        raise ValueError("holomorphicity check is the n = 1 statement")
    lam = (ell,)
    lowering = omega(LOWERING, params)
    if ell < 2:
        base = phi_ell(params, ell)
        primitive = psi_product(params, ell)
        for j in range(1, ell + 1):
            primitive = primitive + lambda_form(params, ell - 1, j, conv).scale(QQ(1, 2))
        main = lowering(base) - d_operator(params, "full", conv)(primitive)
        return main, MixedForm(params)
    phi_br = apply_output_projector(phi_ell(params, ell), lam)
    primitive = psi_product(params, ell)
    for j in range(1, ell + 1):
        primitive = primitive + lambda_form(params, ell - 1, j, conv).scale(QQ(1, 2))
    primitive = apply_output_projector(primitive, lam)
    correction = a_of_f(ell, "full")(phi_ell(params, ell - 2)).scale(
        Scalar.from_rational(QQ(-1, 4), pi_exp=-1))
    killed = apply_output_projector(correction, lam)
    main = lowering(phi_br) - d_operator(params, "full", conv)(primitive) - killed
    return main, killed


# ---------------------------------------------------------------------------
# reporting layer
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    identity: str
    p: int
    q: int
    n: int
    ell: int
    passed: bool
    cases: int
    failed_label: str = ""
    sample: tuple = ()
    seconds: float = 0.0

    def to_json(self):
        out = {
            "identity": self.identity,
            "p": self.p, "q": self.q, "n": self.n, "ell": self.ell,
            "passed": self.passed,
            "cases": self.cases,
            "seconds": round(self.seconds, 4),
        }
        if not self.passed:
            out["failed_case"] = self.failed_label
            out["residual_sample"] = list(self.sample)
        return out


def _residual_cases(identity, params, ell, conv, seed=0):
    """Yield (label, residual) pairs for one grid cell."""
    p, q, n = params.p, params.q, params.n
    if identity == "closedness":
        words = itertools.product(range(1, n + 1), repeat=ell)
        for word in words:
            for variant in ("dF_prime", "dF_doubleprime", "dV"):
                yield f"{variant} word={word}", residual_closedness(params, word, variant, conv)
    elif identity == "kprime":
        if n == 1:
            yield "weight", residual_kprime_weight(params, ell, conv)
            yield "weight_reversed", residual_kprime_weight_reversed(params, ell, conv)
        for word in itertools.product(range(1, n + 1), repeat=ell):
            for j in range(1, n + 1):
                for k in range(1, n + 1):
                    yield (f"fock j={j} k={k} word={word}",
                           residual_fock_kprime(params, word, j, k, conv))
    elif identity == "recursion":
        for j in range(1, ell + 1):
            yield f"j={j}", residual_recursion(params, ell, j, conv)
    elif identity == "lem3a":
        for j in range(1, ell + 1):
            yield f"j={j}", residual_lem3a(params, ell, j, conv)
    elif identity == "prop3a":
        for j in range(1, ell + 1):
            yield f"j={j}", residual_prop3a(params, ell, j, conv)
    elif identity == "lowering":
        yield "lowering", residual_lowering(params, ell, conv)
    elif identity == "psi_base":
        yield "psi_base", residual_psi_base(params, conv)
    elif identity == "psi_consistency":
        yield "psi_consistency", residual_psi_consistency(params, ell)
    elif identity == "lemma4a":
        yield "lemma4a", residual_lemma4a(params, ell, conv)
    elif identity == "lemma4b":
        yield "i", residual_lemma4b_i(params, ell, conv)
        yield "ii", residual_lemma4b_ii(params, ell, conv)
    elif identity == "equivariance":
        for word in itertools.product(range(1, n + 1), repeat=ell):
            for s in range(1, ell):
                perm = list(range(1, ell + 1))
                perm[s - 1], perm[s] = perm[s], perm[s - 1]
                yield f"swap({s},{s+1}) word={word}", residual_equivariance(params, word, tuple(perm))
    elif identity == "sigma_gl":
        import random
        rng = random.Random(seed + 1000 * p + 100 * q + 10 * n + ell)
        a_mat = _random_invertible(n, rng)
        test = phi_nq0(params)
        for word in itertools.product(range(1, n + 1), repeat=min(ell, 2)):
            yield f"word={word}", residual_sigma_gl(params, word, a_mat, test, conv)
    elif identity == "holomorphicity":
        main, killed = holomorphicity_residuals(params, ell, conv)
        yield "projected lowering", main
        yield "projected correction", killed
    else:
        raise ValueError(f"unknown identity {identity}")


def _random_invertible(n, rng):
    while True:
        mat = RatMat.from_rows([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
        try:
            inverse(mat)
            return mat
        except ValueError:
            continue


IDENTITIES = ("closedness", "kprime", "recursion", "lem3a", "prop3a", "lowering",
              "psi_base", "psi_consistency", "lemma4a", "lemma4b", "equivariance",
              "sigma_gl", "holomorphicity")


def run_identity(identity, p, q, n, ell, conv=DEFAULT_CONVENTIONS, seed=0):
    """One grid cell -> one VerificationReport aggregating its sub-cases."""
    params = SpaceParams(p, q, n)
    start = time.perf_counter()
    cases = 0
    failed_label = ""
    sample = ()
    for label, residual in _residual_cases(identity, params, ell, conv, seed):
        cases += 1
        if not residual.is_zero():
            failed_label = label
            sample = tuple(str(term) for term in residual.to_json()[:5])
            break
    elapsed = time.perf_counter() - start
    return VerificationReport(identity, p, q, n, ell, failed_label == "",
                              cases, failed_label, sample, elapsed)


def default_grid():
    """The standard verification grid: every cell must pass."""
    cells = []
    base = [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)]
    for p, q in base:
        for ell in range(4):
            for ident in ("closedness", "kprime", "recursion", "lowering"):
                cells.append((ident, p, q, 1, ell))
        cells.append(("psi_base", p, q, 1, 0))
    for ell in range(3):
        cells.append(("closedness", 2, 1, 2, ell))
        cells.append(("kprime", 2, 1, 2, ell))
        cells.append(("equivariance", 2, 1, 2, ell))
    for p, q in base:
        for ell in (1, 2, 3):
            cells.append(("lem3a", p, q, 1, ell))
            cells.append(("prop3a", p, q, 1, ell))
        for ell in range(4):
            cells.append(("psi_consistency", p, q, 1, ell))
            cells.append(("lemma4a", p, q, 1, ell))
            cells.append(("lemma4b", p, q, 1, ell))
    for p, q in ((2, 1), (2, 2)):
        cells.append(("holomorphicity", p, q, 1, 2))
    cells.append(("sigma_gl", 2, 1, 2, 2))
    cells.append(("sigma_gl", 3, 1, 2, 2))
    return cells
