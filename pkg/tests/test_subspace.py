import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdcodes.field import field_of_order, make_field
from cdcodes.matrix import Matrix, rank
from cdcodes.subspace import (
    IdentifyingVector,
    canonicalize,
    enumerate_grassmannian,
    format_code,
    format_vectors,
    gaussian_binomial,
    identifying_vector,
    min_subspace_distance,
    parse_code,
    parse_vectors,
    subspace_distance,
)

from conftest import distance_oracle, span_set


def gaussian_oracle(n, k, q):
    """Count k-subsets of GF(q)^n spanning distinct k-dim subspaces, by brute force."""
    F = field_of_order(q)
    vecs = [np.array(v) for v in itertools.product(range(q), repeat=n) if any(v)]
    seen = set()
    for combo in itertools.combinations(vecs, k):
        s = span_set(combo, F)
        if len(s) == q**k:
            seen.add(frozenset(s))
    return len(seen)


@pytest.mark.parametrize("n,k,q", [(3, 1, 2), (4, 2, 2), (3, 2, 3), (4, 1, 3)])
def test_gaussian_binomial_oracle(n, k, q):
    assert gaussian_binomial(n, k, q) == gaussian_oracle(n, k, q)


def test_gaussian_binomial_values():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(5, 2, 2) == 155
    assert gaussian_binomial(6, 3, 2) == 1395
    assert gaussian_binomial(5, 0, 3) == 1
    assert gaussian_binomial(3, 4, 2) == 0


@pytest.mark.parametrize("n,k,q", [(4, 2, 2), (5, 2, 2), (6, 3, 2), (4, 2, 3), (3, 1, 4)])
def test_enumeration_count_and_uniqueness(n, k, q):
    F = field_of_order(q)
    spaces = list(enumerate_grassmannian(n, k, F))
    assert len(spaces) == gaussian_binomial(n, k, q)
    assert len(set(spaces)) == len(spaces)
    assert all(S.k == k and S.n == n for S in spaces)
    keys = [tuple(S.basis.entries.ravel()) for S in spaces]
    assert keys == sorted(keys)


def test_enumeration_cap():
    with pytest.raises(ValueError):
        list(enumerate_grassmannian(8, 4, make_field(2), cap=1000))


def test_distance_matches_intersection_oracle_gr_4_2():
    spaces = list(enumerate_grassmannian(4, 2, make_field(2)))
    for U, W in itertools.combinations(spaces, 2):
        assert subspace_distance(U, W) == distance_oracle(U, W)


@pytest.mark.parametrize("n,k", [(5, 2), (6, 3)])
def test_distance_dominates_hamming_of_identifying_vectors(n, k):
    spaces = list(enumerate_grassmannian(n, k, make_field(2)))
    rng = np.random.default_rng(1)
    for _ in range(2000):
        i, j = rng.integers(len(spaces), size=2)
        U, W = spaces[i], spaces[j]
        assert subspace_distance(U, W) >= identifying_vector(U).hamming(identifying_vector(W))


def test_metric_axioms_gr_4_2_gf2():
    spaces = list(enumerate_grassmannian(4, 2, make_field(2)))
    D = np.array([[subspace_distance(U, W) for W in spaces] for U in spaces])
    assert (D == D.T).all()
    assert (np.diag(D) == 0).all()
    assert (D[~np.eye(len(spaces), dtype=bool)] > 0).all()
    assert (D[:, :, None] <= D[:, None, :] + D.T[None, :, :]).all()


@st.composite
def generator(draw, n=5):
    q = draw(st.sampled_from([2, 3]))
    k = draw(st.integers(1, 3))
    e = draw(st.lists(st.integers(0, q - 1), min_size=k * n, max_size=k * n))
    return Matrix(np.array(e).reshape(k, n), field_of_order(q))


@settings(max_examples=100, deadline=None)
@given(generator(), generator())
def test_distance_random_pairs(A, B):
    if A.field is not B.field or not A.entries.any() or not B.entries.any():
        return
    U, W = canonicalize(A), canonicalize(B)
    assert subspace_distance(U, W) == distance_oracle(U, W)


@settings(max_examples=60, deadline=None)
@given(generator(), st.integers(0, 2**32 - 1))
def test_canonical_form_independent_of_generators(A, seed):
    if not A.entries.any():
        return
    U = canonicalize(A)
    # random invertible recombination of the rows
    F = A.field
    rng = np.random.default_rng(seed)
    while True:
        T = Matrix(rng.integers(0, F.q, size=(A.rows, A.rows)), F)
        if rank(T) == A.rows:
            break
    assert canonicalize(T @ A) == U


def test_canonicalize_rejects_zero():
    with pytest.raises(ValueError):
        canonicalize(Matrix.zeros(2, 3, make_field(2)))


def test_ambient_mismatch():
    F = make_field(2)
    with pytest.raises(ValueError):
        subspace_distance(canonicalize(Matrix.identity(2, F)), canonicalize(Matrix.from_bits(["100"], F)))


def test_identifying_vector():
    F = make_field(2)
    U = canonicalize(Matrix.from_bits(["0110", "0011"], F))
    v = identifying_vector(U)
    assert v.bits == "0110"
    assert v.pivots == (1, 2)
    assert v.weight == 2
    assert IdentifyingVector("1100").hamming(IdentifyingVector("0011")) == 4
    with pytest.raises(ValueError):
        IdentifyingVector("012")


def test_min_subspace_distance_agrees_with_pairwise():
    F = make_field(2)
    spaces = list(enumerate_grassmannian(5, 2, F))[::7]
    res = min_subspace_distance(spaces)
    want = min(subspace_distance(U, W) for U, W in itertools.combinations(spaces, 2))
    assert res.distance == want
    i, j = res.witness
    assert subspace_distance(spaces[i], spaces[j]) == want
    assert res.pairs_checked == len(spaces) * (len(spaces) - 1) // 2


def test_min_subspace_distance_mixed_dimensions():
    F = make_field(3)
    code = [
        canonicalize(Matrix([[1, 0, 0, 0]], F)),
        canonicalize(Matrix([[1, 0, 0, 0], [0, 1, 0, 0]], F)),
        canonicalize(Matrix([[0, 0, 1, 2], [0, 1, 0, 0], [0, 0, 0, 1]], F)),
    ]
    res = min_subspace_distance(code)
    assert res.distance == min(distance_oracle(U, W) for U, W in itertools.combinations(code, 2))


def test_code_file_roundtrip():
    F = make_field(3)
    code = list(enumerate_grassmannian(4, 2, F))[:20]
    tags = ["a" if i % 2 else "b" for i in range(len(code))]
    text = "# provenance line\n" + format_code(code, tags)
    back, back_tags = parse_code(text)
    assert back == code
    assert back_tags == tags


def test_code_file_count_mismatch():
    F = make_field(2)
    code = list(enumerate_grassmannian(3, 1, F))
    text = format_code(code).replace(f"count={len(code)}", "count=99")
    with pytest.raises(ValueError):
        parse_code(text)


def test_vector_file_roundtrip():
    vs = [IdentifyingVector("1100"), IdentifyingVector("0011")]
    text = "# header\n" + format_vectors(vs, [4, 0])
    back = parse_vectors(text)
    assert [v for v, _ in back] == vs
    assert [n["dim"] for _, n in back] == ["4", "0"]
    with pytest.raises(ValueError):
        parse_vectors("10x1\n")
