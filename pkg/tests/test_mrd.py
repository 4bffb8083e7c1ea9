import math

import numpy as np
import pytest

from cdcodes.field import field_of_order, make_field
from cdcodes.matrix import Matrix, batch_rank
from cdcodes.mrd import (
    BudgetExceeded,
    RankMetricCode,
    coefficient_tuples,
    format_rank_code,
    gabidulin,
    min_rank_distance,
    parse_rank_code,
    span_array,
    zero_code,
)

from conftest import rank_oracle


def mrd_dimension(k, m, delta):
    return max(k, m) * (min(k, m) - delta + 1)


@pytest.mark.parametrize(
    "k,m,delta,q",
    [(3, 3, 2, 2), (4, 4, 2, 2), (2, 3, 2, 2), (3, 2, 2, 2), (4, 2, 2, 2), (2, 4, 2, 2), (3, 3, 3, 2), (4, 4, 3, 2),
     (3, 4, 3, 2), (4, 3, 2, 2), (2, 2, 2, 3), (3, 3, 2, 3), (2, 2, 1, 4), (2, 3, 2, 4), (5, 3, 3, 2), (3, 5, 2, 2)],
)  # fmt: skip
def test_gabidulin_is_mrd(k, m, delta, q):
    F = field_of_order(q)
    C = gabidulin(k, m, delta, F)
    assert C.dimension == mrd_dimension(k, m, delta)
    assert C.is_linearly_independent()
    assert min_rank_distance(C) == delta
    assert all(B.shape == (k, m) for B in C.basis)


def test_sizes_64_and_4096():
    F = make_field(2)
    assert gabidulin(3, 3, 2, F).size == 64
    assert gabidulin(4, 4, 2, F).size == 4096


def test_min_rank_agrees_with_oracle_small():
    F = make_field(2)
    C = gabidulin(2, 3, 2, F)
    words = C.codeword_array()
    assert min(rank_oracle(w, F) for w in words[1:]) == 2
    assert len({w.tobytes() for w in words}) == C.size


def test_codeword_array_structure():
    F = make_field(3)
    C = gabidulin(2, 2, 1, F)
    words = C.codeword_array()
    assert words.shape == (81, 2, 2)
    assert not words[0].any()
    # closed under addition
    keys = {w.tobytes() for w in words}
    for a, b in [(3, 7), (10, 40), (80, 1)]:
        assert F.add_table[words[a], words[b]].tobytes() in keys


def test_span_array_and_coefficients():
    F = make_field(2)
    assert coefficient_tuples(0, 2).shape == (1, 0)
    assert coefficient_tuples(3, 3).shape == (27, 3)
    basis = np.array([[1, 0, 1], [0, 1, 1]])
    span = span_array(basis, F)
    assert sorted(map(tuple, span)) == [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]


def test_budget():
    C = gabidulin(4, 4, 1, make_field(2))
    with pytest.raises(BudgetExceeded):
        C.codeword_array(budget=1000)
    with pytest.raises(BudgetExceeded):
        min_rank_distance(C, budget=1000)


def test_zero_code():
    F = make_field(2)
    Z = zero_code(3, 3, F)
    assert Z.size == 1
    assert min_rank_distance(Z) == math.inf


def test_parameter_errors():
    F = make_field(2)
    with pytest.raises(ValueError):
        gabidulin(3, 3, 4, F)
    with pytest.raises(ValueError):
        gabidulin(0, 3, 1, F)
    with pytest.raises(ValueError):
        RankMetricCode(2, 2, F, 1, (Matrix.identity(3, F),))


def test_transposed_shapes_have_same_distance():
    F = make_field(2)
    a = gabidulin(2, 4, 2, F).codeword_array()
    b = gabidulin(4, 2, 2, F).codeword_array()
    assert batch_rank(a[1:], F).min() == batch_rank(b[1:], F).min() == 2


@pytest.mark.parametrize("q", [2, 3])
def test_rank_code_file_roundtrip(q):
    C = gabidulin(3, 3, 2, field_of_order(q))
    back = parse_rank_code(format_rank_code(C))
    assert back == C
    bad = format_rank_code(C).replace(f"dim={C.dimension}", "dim=1")
    with pytest.raises(ValueError):
        parse_rank_code(bad)
