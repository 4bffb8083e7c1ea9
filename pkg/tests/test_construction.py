import itertools

import numpy as np
import pytest

from cdcodes.construction import (
    LIFTED,
    LINKAGE,
    ZERO_PREFIX,
    ConstructionError,
    ConstructionSpec,
    check_sc_set,
    general_construct,
    li_construct,
    lifted_mrd_sc_set,
    linkage,
    min_cross_dimension,
    structural_report,
    verify_cdc,
)
from cdcodes.ferrers import FdrmCode, diagram_from_vector, search_fdrm
from cdcodes.field import make_field
from cdcodes.greedy import greedy_select
from cdcodes.matrix import Matrix
from cdcodes.mrd import gabidulin
from cdcodes.subspace import IdentifyingVector, canonicalize, subspace_distance

from conftest import distance_oracle


def build_spec(n1, n2, k, d, q=2, prefix_min=0, U1=None):
    F = make_field(q)
    h = d // 2
    U1 = lifted_mrd_sc_set(k, n1, d, F) if U1 is None else U1
    sel = greedy_select(n1, n2, k, d, prefix_min=prefix_min)
    selection = [(v, search_fdrm(diagram_from_vector(v), h, F)) for v in sel.vectors]
    return ConstructionSpec(n1, n2, k, d, F, U1, gabidulin(k, n2, h, F), selection)


def test_lifted_mrd_sc_set():
    F = make_field(2)
    U = lifted_mrd_sc_set(3, 6, 4, F)
    assert len(U) == 64
    spaces = check_sc_set(U, 3, 6, 4)
    assert verify_cdc(spaces, 3, 4).min_distance == 4
    assert lifted_mrd_sc_set(3, 3, 4, F) == [Matrix.identity(3, F)]
    with pytest.raises(ValueError):
        lifted_mrd_sc_set(3, 2, 4, F)


def test_linkage_small_exhaustive():
    F = make_field(2)
    U = lifted_mrd_sc_set(2, 4, 4, F)
    R = gabidulin(2, 3, 2, F)
    C = linkage(U, R)
    assert len(C) == len(U) * R.size == 32
    for A, B in itertools.combinations(C.codewords, 2):
        assert distance_oracle(A, B) == subspace_distance(A, B) >= 4


def test_linkage_codeword_is_row_space_of_concatenation():
    F = make_field(3)
    U = [Matrix([[2, 1, 0], [0, 0, 2]], F)]
    R = gabidulin(2, 2, 2, F)
    C = linkage(U, R)
    for M, W in zip(R.codewords(), C.codewords):
        assert canonicalize(U[0].hstack(M)) == W


@pytest.mark.parametrize("params", [(4, 3, 2, 4), (5, 3, 3, 4), (4, 3, 2, 2), (3, 3, 2, 2)])
def test_general_construct_small(params):
    n1, n2, k, d = params
    spec = build_spec(n1, n2, k, d)
    C = general_construct(spec)
    rep = verify_cdc(C, k, d)
    assert rep.ok and rep.mode == "exhaustive"
    assert len(C) == C.formula_size()
    assert len(C) == len(spec.U1) * spec.rank_code.size + sum(c.size for _, c in spec.selection)
    assert min_cross_dimension(C.part(LINKAGE), C.part(LIFTED)) >= k + d // 2
    assert all(structural_report(C, n1, d).values())


def test_general_construct_q3():
    spec = build_spec(4, 3, 2, 4, q=3)
    C = general_construct(spec)
    rep = verify_cdc(C, 2, 4)
    assert rep.ok and len(C) == C.formula_size() == 9 * 27 + sum(c.size for _, c in spec.selection)


@pytest.mark.parametrize(
    "params",
    [(3, 3, 2, 2), (4, 3, 2, 2), pytest.param((4, 4, 4, 4), marks=pytest.mark.slow)],
)
def test_li_construct(params):
    n1, n2, k, d = params
    spec = build_spec(n1, n2, k, d, prefix_min=d // 2)
    F = spec.field
    U2 = lifted_mrd_sc_set(k, n2, d, F)
    C = li_construct(spec, U2)
    assert len(C.part(ZERO_PREFIX)) == len(U2)
    assert len(C) == C.formula_size()
    assert any("n1 == k" in n for n in C.notes) == (n1 == k)
    assert any("n2 == k" in n for n in C.notes) == (n2 == k)
    assert verify_cdc(C, k, d).ok
    # the relaxed construction accepts the same selection
    assert len(general_construct(spec)) == len(C) - len(U2)


def test_li_rejects_k_below_d():
    spec = build_spec(6, 3, 3, 4)
    with pytest.raises(ConstructionError, match="k >= d"):
        li_construct(spec, [])


def test_li_requires_prefix_condition():
    spec = build_spec(4, 4, 4, 4)  # selection built without the prefix condition
    with pytest.raises(ConstructionError, match="condition-a-prefix"):
        li_construct(spec, [])


def test_rejects_bad_sc_sets():
    F = make_field(2)
    spec = build_spec(4, 3, 2, 4)
    dup = list(spec.U1) + [spec.U1[0].scale(1)]
    with pytest.raises(ConstructionError, match="same subspace"):
        general_construct(ConstructionSpec(4, 3, 2, 4, F, dup, spec.rank_code, spec.selection))
    deficient = [Matrix([[1, 0, 0, 0], [1, 0, 0, 0]], F)]
    with pytest.raises(ConstructionError, match="rank deficient"):
        general_construct(ConstructionSpec(4, 3, 2, 4, F, deficient, spec.rank_code, spec.selection))
    close = [Matrix.from_bits(["1000", "0100"], F), Matrix.from_bits(["1000", "0010"], F)]
    with pytest.raises(ConstructionError, match="distance 2"):
        general_construct(ConstructionSpec(4, 3, 2, 4, F, close, spec.rank_code, spec.selection))


def test_rejects_bad_rank_code_and_selection():
    F = make_field(2)
    spec = build_spec(4, 3, 2, 4)
    weak = gabidulin(2, 3, 1, F)
    with pytest.raises(ConstructionError, match="designed distance"):
        general_construct(ConstructionSpec(4, 3, 2, 4, F, spec.U1, weak, spec.selection))
    v = IdentifyingVector("0000011")
    w = IdentifyingVector("0000110")
    pair = [(v, search_fdrm(diagram_from_vector(v), 2, F)), (w, search_fdrm(diagram_from_vector(w), 2, F))]
    with pytest.raises(ConstructionError, match="condition-b"):
        general_construct(ConstructionSpec(4, 3, 2, 4, F, spec.U1, spec.rank_code, pair))
    wrong = [(v, search_fdrm(diagram_from_vector(w), 2, F))]
    with pytest.raises(ConstructionError, match="does not belong"):
        general_construct(ConstructionSpec(4, 3, 2, 4, F, spec.U1, spec.rank_code, wrong))
    Fd = diagram_from_vector(w)
    bad = FdrmCode(Fd, 2, F, (Matrix(np.ones((2, Fd.top_row), dtype=int) * Fd.mask(), F),) * 2, 1)
    with pytest.raises(ConstructionError, match="minimum rank"):
        general_construct(ConstructionSpec(4, 3, 2, 4, F, spec.U1, spec.rank_code, [(w, bad)]))


def test_rejects_odd_d_and_small_blocks():
    spec = build_spec(4, 3, 2, 4)
    spec.d = 3
    with pytest.raises(ConstructionError, match="even"):
        general_construct(spec)
    spec = build_spec(4, 3, 2, 4)
    spec.n2, spec.k = 1, 2
    with pytest.raises(ConstructionError):
        general_construct(spec)


def test_verify_reports_duplicates_and_sampling():
    F = make_field(2)
    spaces = check_sc_set(lifted_mrd_sc_set(3, 6, 4, F), 3, 6)
    dup = spaces + [spaces[5]]
    rep = verify_cdc(dup, 3, 4)
    assert rep.duplicates == 1 and rep.min_distance == 0 and not rep.ok
    rep = verify_cdc(spaces, 3, 4, budget=10, samples=500, seed=1)
    assert rep.mode == "sampled" and rep.pairs_checked == 500
    assert rep.min_distance >= 4 and rep.ok
    rep = verify_cdc(dup, 3, 4, budget=10, samples=50)
    assert rep.min_distance == 0 and not rep.ok
    text = rep.to_text()
    assert "mode=sampled" in text and "duplicates=1" in text and "valid=false" in text


def test_verify_single_codeword_and_dims():
    F = make_field(2)
    one = [canonicalize(Matrix.identity(2, F))]
    rep = verify_cdc(one, 2, 4)
    assert rep.min_distance is None and rep.ok
    assert "min_distance=undefined" in rep.to_text()
    rep = verify_cdc(one, 3, 4)
    assert not rep.dims_ok and not rep.ok
