import itertools
import json
import math
import pathlib

import numpy as np
import pytest

from fockforms.scalars import QQ
from fockforms.theta import (
    BetaMatrix,
    GenusCoefficient,
    Lattice,
    assemble_coefficient,
    enumerate_representations,
    filling_key,
    moment_tensor,
    series_betas,
    series_table,
)

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="module")
def z4():
    return Lattice.load(FIXTURES / "z4.json")


@pytest.fixture(scope="module")
def e8():
    return Lattice.load(FIXTURES / "e8.json")


@pytest.fixture(scope="module")
def z2():
    return Lattice.load(FIXTURES / "z2.json")


@pytest.fixture(scope="module")
def q7():
    # 2a^2 + ab + 3b^2 lattice sibling: x^2 + xy + 2y^2, one class per genus
    return Lattice([[2, 1], [1, 4]])


@pytest.fixture(scope="module")
def q23():
    # 2a^2 + ab + 3b^2, a class not equivalent to its mirror
    return Lattice([[4, 1], [1, 6]])


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------

def test_lattice_rejects_asymmetric():
    with pytest.raises(ValueError):
        Lattice([[1, 1], [0, 1]])


def test_lattice_rejects_indefinite():
    with pytest.raises(ValueError):
        Lattice([[1, 2], [2, 1]])


def test_lattice_rejects_fractional_diagonal():
    with pytest.raises(ValueError):
        Lattice([["1/2", 0], [0, 1]])


def test_lattice_accepts_half_integral_offdiagonal():
    lat = Lattice([[1, "1/2"], ["1/2", 1]])
    assert lat.gram2.entry(0, 1) == QQ(1)


def test_lattice_rejects_other_fields():
    with pytest.raises(ValueError):
        Lattice.from_json({"field": "Q(sqrt5)", "gram": [[1]]})


def test_coset_validation():
    with pytest.raises(ValueError):
        Lattice([[1]], coset_h=[[1]])
    with pytest.raises(ValueError):
        Lattice([[1]], coset_h=[[1, 0]], modulus=2)
    lat = Lattice([[1]], coset_h=[[-1]], modulus=2)
    assert lat.coset_h == ((1,),)


def test_beta_rejects_odd_diagonal():
    with pytest.raises(ValueError):
        BetaMatrix([[1]])
    with pytest.raises(ValueError):
        BetaMatrix.from_entries([["1/2"]])


def test_beta_rejects_quarters():
    with pytest.raises(ValueError):
        BetaMatrix.from_entries([[1, "1/4"], ["1/4", 1]])


def test_beta_psd_examples():
    assert BetaMatrix.from_entries([[1, 1], [1, 1]]).is_psd()
    assert not BetaMatrix.from_entries([[1, 2], [2, 1]]).is_psd()
    assert BetaMatrix.diagonal([0, 3]).is_psd()
    assert not BetaMatrix.from_entries([[0, "1/2"], ["1/2", 1]]).is_psd()


def test_beta_rank():
    assert BetaMatrix.diagonal([0]).rank() == 0
    assert BetaMatrix.diagonal([1, 2]).rank() == 2
    assert BetaMatrix.from_entries([[1, 1], [1, 1]]).rank() == 1


# ---------------------------------------------------------------------------
# representation counts
# ---------------------------------------------------------------------------

def brute_tuples(gram, beta, radius):
    """Independent oracle: scan an integer box for tuples with the given
    norms and pairings."""
    m = len(gram)
    n = beta.n

    def pair(x, y):
        return sum(gram[i][j] * x[i] * y[j] for i in range(m) for j in range(m))

    singles = [x for x in itertools.product(range(-radius, radius + 1), repeat=m)]
    shells = []
    for i in range(n):
        want = 2 * beta.entry(i, i)
        shells.append([x for x in singles if pair(x, x) == want])
    out = []
    for combo in itertools.product(*shells):
        ok = all(pair(combo[i], combo[j]) == 2 * beta.entry(i, j)
                 for i in range(n) for j in range(i + 1, n))
        if ok:
            out.append(combo)
    return sorted(out)


def test_z4_series_counts_two_paths(z4):
    rows = series_table(z4, lam=(), n=1, bound=3)
    assert [r.count for r in rows] == [1, 24, 24, 96]
    gram = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    for r in rows:
        brute = brute_tuples(gram, r.beta, 4)
        assert r.count == len(brute)
        assert sorted(enumerate_representations(z4, r.beta)) == brute


def test_e8_root_count(e8):
    c = assemble_coefficient(e8, BetaMatrix.diagonal([1]))
    assert c.count == 240


def test_nonzero_shells_have_even_count(q23):
    for b in range(1, 7):
        c = assemble_coefficient(q23, BetaMatrix.diagonal([b]))
        assert c.count % 2 == 0


def test_genus_two_orthogonal_pairs(z2):
    beta = BetaMatrix.diagonal([1, 1])
    reps = enumerate_representations(z2, beta)
    assert len(reps) == 8
    gram = [[1, 0], [0, 1]]
    assert sorted(reps) == brute_tuples(gram, beta, 2)


def test_degenerate_beta_diagonal_pairs(z2):
    # x = y forced when the pairing saturates Cauchy-Schwarz
    beta = BetaMatrix.from_entries([[1, 1], [1, 1]])
    reps = enumerate_representations(z2, beta)
    assert len(reps) == 4
    assert all(x == y for x, y in reps)
    assert beta.rank() == 1


def test_zero_beta(z4):
    c = assemble_coefficient(z4, BetaMatrix.diagonal([0]))
    assert c.count == 1 and c.rank_t == 0


def test_negative_beta_empty(z4):
    assert enumerate_representations(z4, BetaMatrix([[-2]])) == []


def test_unimodular_change_of_basis_preserves_counts(q23):
    # tuples transform by X -> X U, beta by U^T beta U
    mats = [[[0, 1], [1, 0]], [[1, 1], [0, 1]], [[1, 0], [-1, 1]]]
    beta = BetaMatrix.from_entries([[2, "1/2"], ["1/2", 3]])
    base = len(enumerate_representations(q23, beta))
    b = [[beta.entry(i, j) for j in range(2)] for i in range(2)]
    for u in mats:
        moved = [[sum(u[a][i] * b[a][c] * u[c][j]
                      for a in range(2) for c in range(2))
                  for j in range(2)] for i in range(2)]
        moved_beta = BetaMatrix.from_entries(moved)
        assert len(enumerate_representations(q23, moved_beta)) == base


def test_coset_counts_match_brute_force():
    lat = Lattice.load(FIXTURES / "z2_coset.json")
    assert lat.coset_h == ((1, 1),) and lat.modulus == 2
    for b in range(4):
        reps = enumerate_representations(lat, BetaMatrix.diagonal([b]))
        brute = [x for x in itertools.product(range(-4, 5), repeat=2)
                 if x[0] ** 2 + x[1] ** 2 == 2 * b
                 and x[0] % 2 == 1 and x[1] % 2 == 1]
        assert len(reps) == len(brute)
    with pytest.raises(ValueError):
        enumerate_representations(lat, BetaMatrix.diagonal([1, 1]))


def test_genus_mismatch_raises(z2):
    with pytest.raises(ValueError):
        enumerate_representations(z2, BetaMatrix.diagonal([1]), n=2)


# ---------------------------------------------------------------------------
# payloads
# ---------------------------------------------------------------------------

def test_e8_quadratic_payload_vanishes(e8):
    for b in range(6):
        c = assemble_coefficient(e8, BetaMatrix.diagonal([b]), lam=(2,))
        assert list(c.payload) == ["1,1"]
        assert c.payload["1,1"] == {}


def test_e8_quartic_payload_vanishes(e8):
    for b in range(6):
        c = assemble_coefficient(e8, BetaMatrix.diagonal([b]), lam=(4,))
        assert c.payload["1,1,1,1"] == {}


def test_level_seven_quadratic_payload(q7):
    # the quadratic payloads of x^2 + xy + 2y^2 live in a one-dimensional
    # space; successive shells reproduce the 1, -3, 0, 5 pattern
    ref = assemble_coefficient(q7, BetaMatrix.diagonal([1]), lam=(2,))
    base = ref.payload["1,1"]
    assert base == {(1, 1): QQ(6, 7), (1, 2): QQ(2, 7),
                    (2, 1): QQ(2, 7), (2, 2): QQ(-4, 7)}
    for b, mult in [(2, -3), (3, 0), (4, 5)]:
        c = assemble_coefficient(q7, BetaMatrix.diagonal([b]), lam=(2,))
        got = c.payload["1,1"]
        want = {w: mult * v for w, v in base.items() if mult * v != 0}
        assert got == want


def test_alternating_payload(q23):
    beta = BetaMatrix.from_entries([[2, "1/2"], ["1/2", 3]])
    c = assemble_coefficient(q23, beta, lam=(1, 1), n=2)
    assert c.count == 2
    assert c.payload["1|2"] == {(1, 2): QQ(1), (2, 1): QQ(-1)}


def test_swap_symmetric_beta_kills_alternating_payload(z2):
    c = assemble_coefficient(z2, BetaMatrix.diagonal([1, 1]), lam=(1, 1), n=2)
    assert c.count == 8
    assert c.payload["1|2"] == {}


def test_odd_degree_payload_vanishes(q23):
    # x -> -x preserves every shell and flips odd tensors
    for b in (1, 2, 3):
        c = assemble_coefficient(q23, BetaMatrix.diagonal([b]), lam=(1,))
        assert all(v == {} for v in c.payload.values())


def test_rank_zero_harmonic_line():
    z1 = Lattice.load(FIXTURES / "z1.json")
    for b in (1, 2, 4):
        c = assemble_coefficient(z1, BetaMatrix.diagonal([b]), lam=(2,))
        assert c.payload["1,1"] == {}


def test_empty_shape_payload(z4):
    c = assemble_coefficient(z4, BetaMatrix.diagonal([1]), lam=())
    assert c.payload == {}


def test_too_many_rows_raises(z4):
    with pytest.raises(ValueError):
        assemble_coefficient(z4, BetaMatrix.diagonal([1]), lam=(1, 1), n=1)


def test_payload_filling_count(z4):
    beta = BetaMatrix.diagonal([1, 1])
    c = assemble_coefficient(z4, beta, lam=(1, 1), n=2)
    assert list(c.payload) == ["1|2"]
    c2 = assemble_coefficient(z4, beta, lam=(2,), n=2)
    assert sorted(c2.payload) == ["1,1", "1,2", "2,2"]


# ---------------------------------------------------------------------------
# symmetry
# ---------------------------------------------------------------------------

def dense_moment(lat, beta, ell):
    reps = enumerate_representations(lat, beta)
    if not reps:
        return np.zeros((lat.rank,) * ell, dtype=np.int64)
    arr = np.array([r[0] for r in reps], dtype=np.int64)
    letters = "abcdefgh"
    spec = ",".join(f"z{letters[s]}" for s in range(ell)) \
        + "->" + "".join(letters[:ell])
    return np.einsum(spec, *([arr] * ell))


def transform_slots(tensor, s):
    ell = tensor.ndim
    letters = "abcdefgh"
    uppers = "ijklmnop"
    spec = ",".join(f"{letters[t]}{uppers[t]}" for t in range(ell))
    spec += "," + "".join(uppers[:ell]) + "->" + "".join(letters[:ell])
    return np.einsum(spec, *([s] * ell + [tensor]))


def signed_permutation_matrices():
    out = []
    for perm in itertools.permutations(range(4)):
        for signs in [(1, 1, 1, 1), (-1, 1, 1, 1), (1, -1, 1, -1)]:
            s = np.zeros((4, 4), dtype=np.int64)
            for i, j in enumerate(perm):
                s[j, i] = signs[i]
            out.append(s)
    return out[:24]


def test_moment_invariance_under_signed_permutations(z4):
    beta = BetaMatrix.diagonal([3])
    m2 = dense_moment(z4, beta, 2)
    m4 = dense_moment(z4, beta, 4)
    assert m2.any() and m4.any()
    for s in signed_permutation_matrices():
        assert (transform_slots(m2, s) == m2).all()
        assert (transform_slots(m4, s) == m4).all()


def e8_reflections():
    g = np.zeros((8, 8), dtype=np.int64)
    for i in range(8):
        g[i, i] = 2
    for a, b in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)]:
        g[a, b] = g[b, a] = -1
    mats = [-np.eye(8, dtype=np.int64)]
    for i in range(8):
        s = np.eye(8, dtype=np.int64)
        s[i, :] -= g[i, :]
        mats.append(s)
    return g, mats


def test_e8_reflections_preserve_gram_and_moments(e8):
    g, mats = e8_reflections()
    for s in mats:
        assert (s.T @ g @ s == g).all()
    beta = BetaMatrix.diagonal([2])
    m2 = dense_moment(e8, beta, 2)
    assert m2.any()
    for s in mats:
        assert (transform_slots(m2, s) == m2).all()


def exact_slot_transform(payload, s):
    m = len(s)
    out = {}
    for w, v in payload.items():
        for u in itertools.product(range(1, m + 1), repeat=len(w)):
            c = v
            for a, b in zip(u, w):
                c = c * s[a - 1][b - 1]
            if c:
                out[u] = out.get(u, QQ(0)) + c
    return {w: v for w, v in out.items() if v != 0}


def test_projected_payload_equivariance(q7, q23):
    # q7 has a mirror symmetry; its quadratic payload must be fixed by it
    mirror = [[1, 1], [0, -1]]
    c = assemble_coefficient(q7, BetaMatrix.diagonal([2]), lam=(2,))
    payload = c.payload["1,1"]
    assert payload
    assert exact_slot_transform(payload, mirror) == payload
    # -1 fixes every even payload
    c2 = assemble_coefficient(q23, BetaMatrix.from_entries(
        [[2, "1/2"], ["1/2", 3]]), lam=(1, 1), n=2)
    neg = [[-1, 0], [0, -1]]
    assert exact_slot_transform(c2.payload["1|2"], neg) == c2.payload["1|2"]


# ---------------------------------------------------------------------------
# series assembly and serialization
# ---------------------------------------------------------------------------

def test_series_betas_bound_one():
    betas = series_betas(2, 1)
    assert len(betas) == 8
    keys = [b.sort_key() for b in betas]
    assert keys == sorted(keys)
    assert betas[0].doubled == ((0, 0), (0, 0))
    for b in betas:
        assert b.is_psd()


def test_series_betas_off_diagonal_window():
    betas = series_betas(2, 2)
    seen = {b.doubled for b in betas}
    assert ((2, 2), (2, 4)) in seen
    assert all(abs(b.doubled[0][1]) <= math.isqrt(b.doubled[0][0] * b.doubled[1][1])
               for b in betas)


def test_series_table_matches_single_assembly(z2):
    rows = series_table(z2, lam=(2,), n=1, bound=2)
    for r in rows:
        solo = assemble_coefficient(z2, r.beta, lam=(2,), n=1)
        assert solo.count == r.count and solo.payload == r.payload


def test_coefficient_json_shape(q7):
    c = assemble_coefficient(q7, BetaMatrix.diagonal([1]), lam=(2,))
    data = c.to_json()
    assert data["beta"] == [[1]]
    assert data["count"] == 2 and data["rank"] == 1
    terms = data["payload"]["1,1"]
    assert terms == sorted(terms)
    assert [[1, 1], [6, 7]] in terms
    json.dumps(data)


def test_half_integral_beta_serialization():
    beta = BetaMatrix.from_entries([[1, "1/2"], ["1/2", 2]])
    assert beta.to_json() == [[1, 0.5], [0.5, 2]]
    assert beta.trace() == 3


def test_filling_key_format():
    assert filling_key(((1, 2), (2,))) == "1,2|2"


def test_moment_overflow_guard():
    big = 1 << 16
    reps = [((big, big),)] * 4
    with pytest.raises(OverflowError):
        moment_tensor(reps, [1, 1, 1, 1], 2)
