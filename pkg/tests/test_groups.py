from itertools import product

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from foldgate.f2 import BitMatrix, inverse, rank, rows_in_span
from foldgate.groups import (
    ISOTROPIC,
    LAGRANGIAN,
    MAX_DIM,
    SYMPLECTIC,
    F2MatrixGroup,
    GroupError,
    conjugating_matrix,
    index_in_sp,
    intertwiners,
    invariant_subspaces,
    is_invariant,
    naive_order,
    restrict,
    same_span,
    sp_order,
    standard_form,
)


def count_symplectic(k):
    m = 2 * k
    form = standard_form(k).to_dense().astype(np.int64)
    count = 0
    for bits in product((0, 1), repeat=m * m):
        g = np.array(bits, dtype=np.int64).reshape(m, m)
        if np.array_equal((g @ form @ g.T) & 1, form):
            count += 1
    return count


def test_sp_order_against_enumeration():
    assert sp_order(1) == count_symplectic(1)
    assert sp_order(2) == count_symplectic(2)
    assert sp_order(3) == 1451520


def qubit_gate(k, q, kind):
    m = np.eye(2 * k, dtype=np.uint8)
    if kind == "h":
        m[[q, k + q]] = m[[k + q, q]]
    else:
        m[k + q, q] = 1
    return BitMatrix.from_dense(m)


def both_qubits(kind):
    return BitMatrix.from_dense((qubit_gate(2, 0, kind) @ qubit_gate(2, 1, kind)).to_dense())


@st.composite
def invertible(draw, m):
    """P . L . U with unitriangular L and U covers every invertible matrix."""
    perm = draw(st.permutations(range(m)))
    lo = np.tril(np.array(draw(st.lists(st.integers(0, 1), min_size=m * m, max_size=m * m))).reshape(m, m), -1)
    up = np.triu(np.array(draw(st.lists(st.integers(0, 1), min_size=m * m, max_size=m * m))).reshape(m, m), 1)
    eye = np.eye(m, dtype=np.int64)
    return BitMatrix.from_dense(((eye[list(perm)] @ (eye + lo) @ (eye + up)) & 1).astype(np.uint8))


matrices = st.integers(2, 4).flatmap(lambda m: st.lists(invertible(m), min_size=1, max_size=3))


@given(matrices)
def test_chain_order_matches_closure(mats):
    g = F2MatrixGroup(mats[0].rows, tuple(mats))
    try:
        expect = naive_order(g, 3 * 10**4)
    except GroupError:
        assume(False)
    assert g.order() == expect
    prod_ = mats[0]
    for x in mats[1:]:
        prod_ = prod_ @ x
    assert g.contains(prod_)
    assert g.contains(inverse(prod_))


def test_contains_rejects_outsiders():
    g = F2MatrixGroup(4, (qubit_gate(2, 0, "h"), qubit_gate(2, 0, "s")))
    assert g.order() == 6
    assert not g.contains(qubit_gate(2, 1, "h"))
    assert not g.contains(BitMatrix.zeros(4, 4))
    with pytest.raises(GroupError):
        g.contains(BitMatrix.identity(2))


def test_full_symplectic_group_stops_at_bound():
    k = 3
    gens = [qubit_gate(k, q, t) for q in range(k) for t in "hs"]
    cz = np.eye(6, dtype=np.uint8)
    cz[k, 1] = cz[k + 1, 0] = 1
    cz2 = np.eye(6, dtype=np.uint8)
    cz2[k + 1, 2] = cz2[k + 2, 1] = 1
    gens += [BitMatrix.from_dense(cz), BitMatrix.from_dense(cz2)]
    g = F2MatrixGroup(6, tuple(gens), standard_form(k))
    assert g.order() == sp_order(k)
    assert index_in_sp(g, k) == 1
    assert g.contains(gens[0] @ gens[-1])
    assert not g.contains(BitMatrix.from_dense(np.eye(6, dtype=np.uint8)[[1, 0, 2, 3, 4, 5]]))


def test_index_in_sp():
    swap = BitMatrix.from_dense(np.eye(4, dtype=np.uint8)[[1, 0, 3, 2]])
    g = F2MatrixGroup(4, (swap,))
    assert index_in_sp(g, 2) == 720 // 2
    bad = F2MatrixGroup(4, (BitMatrix.from_dense(np.eye(4, dtype=np.uint8)[[1, 0, 2, 3]]),))
    with pytest.raises(GroupError):
        index_in_sp(bad, 2)


def test_independent_qubits_split_uniquely():
    gens = tuple(qubit_gate(2, q, t) for q in range(2) for t in "hs")
    g = F2MatrixGroup(4, gens, standard_form(2))
    dec = invariant_subspaces(g)
    assert dec.split and dec.unique
    assert [p.kind for p in dec.parts] == [SYMPLECTIC, SYMPLECTIC]
    assert len(dec.minimal) == 2
    q0 = BitMatrix.from_dense(np.eye(4, dtype=np.uint8)[[0, 2]])
    assert any(same_span(p.basis, q0) for p in dec.parts)
    r = restrict(g, q0)
    assert r.group.order() == 6
    assert r.kernel_order == 6 and not r.faithful


def test_diagonal_action_has_three_minimal_subspaces():
    g = F2MatrixGroup(4, (both_qubits("h"), both_qubits("s")), standard_form(2))
    dec = invariant_subspaces(g)
    assert len(dec.minimal) == 3
    assert not dec.unique
    kinds = sorted(m.kind for m in dec.minimal)
    assert kinds == sorted([SYMPLECTIC, SYMPLECTIC, LAGRANGIAN])
    for m in dec.minimal:
        assert is_invariant(g, m.basis)
        assert restrict(g, m.basis).faithful


def test_irreducible_group_is_not_split():
    gens = [qubit_gate(2, q, t) for q in range(2) for t in "hs"]
    swap = BitMatrix.from_dense(np.eye(4, dtype=np.uint8)[[1, 0, 3, 2]])
    g = F2MatrixGroup(4, tuple(gens) + (swap,), standard_form(2))
    dec = invariant_subspaces(g)
    assert not dec.split
    assert dec.parts[0].dim == 4


def test_isotropic_classification():
    # upper unitriangular action keeps span(e0) invariant
    m = BitMatrix.from_dense(np.array([[1, 0], [1, 1]], dtype=np.uint8))
    g = F2MatrixGroup(2, (m,), standard_form(1))
    dec = invariant_subspaces(g)
    assert [x.kind for x in dec.minimal] == [LAGRANGIAN]
    wide = F2MatrixGroup(4, (BitMatrix.from_dense(np.eye(4, dtype=np.uint8)),), standard_form(2))
    kinds = {x.kind for x in invariant_subspaces(wide).minimal}
    assert ISOTROPIC in kinds and SYMPLECTIC not in kinds


def test_restrict_errors():
    g = F2MatrixGroup(4, (qubit_gate(2, 0, "h"),))
    with pytest.raises(GroupError):
        restrict(g, BitMatrix.from_dense(np.eye(4, dtype=np.uint8)[[0]]))
    with pytest.raises(GroupError):
        restrict(g, BitMatrix.from_dense(np.eye(4, dtype=np.uint8)[[1, 1]]))


@given(matrices, st.data())
def test_conjugating_matrix_recovers_change_of_basis(mats, data):
    m = mats[0].rows
    x = data.draw(invertible(m))
    targets = [x @ a @ inverse(x) for a in mats]
    sols = intertwiners(mats, targets)
    flat = sum(int(b) << i for i, b in enumerate(x.to_dense().flatten()))

    assert rows_in_span(sols, BitMatrix.from_ints([flat], m * m))
    y = conjugating_matrix(mats, targets)
    if y is not None:
        assert all(y @ a == b @ y for a, b in zip(mats, targets))


def test_group_validation_and_json():
    with pytest.raises(GroupError):
        F2MatrixGroup(MAX_DIM + 2, ())
    with pytest.raises(GroupError):
        F2MatrixGroup(2, (BitMatrix.zeros(2, 2),))
    with pytest.raises(GroupError):
        F2MatrixGroup(2, (BitMatrix.identity(3),))
    with pytest.raises(GroupError):
        intertwiners([], [])
    g = F2MatrixGroup(4, (qubit_gate(2, 0, "h"), qubit_gate(2, 1, "s")))
    obj = g.to_dict()
    assert obj["order"] == "4"
    h = F2MatrixGroup.from_dict(obj)
    assert h == g and h.order() == 4
