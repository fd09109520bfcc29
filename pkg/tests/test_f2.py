import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from foldgate.f2 import (
    BitMatrix,
    BitVector,
    F2Error,
    block_diag,
    hstack,
    in_row_space,
    inverse,
    kernel_basis,
    kron,
    quotient_basis,
    rank,
    rows_in_span,
    rref,
    solve,
    solve_rows,
    vstack,
)


def dense_rank(a):
    """Plain Gaussian elimination on a dense 0/1 array."""
    a = np.array(a, dtype=np.uint8) % 2
    r = 0
    for c in range(a.shape[1]):
        piv = next((i for i in range(r, a.shape[0]) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(a.shape[0]):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


def mats(max_rows=12, max_cols=70):
    shape = st.tuples(st.integers(0, max_rows), st.integers(1, max_cols))
    return shape.flatmap(lambda s: arrays(np.uint8, s, elements=st.integers(0, 1)))


@given(mats())
def test_rank_matches_dense_elimination(a):
    assert rank(BitMatrix.from_dense(a)) == dense_rank(a)


@given(mats())
def test_dense_roundtrip_and_pad_bits(a):
    m = BitMatrix.from_dense(a)
    assert np.array_equal(m.to_dense(), a)
    if m.cols % 64:
        assert not (m.words[:, -1] >> np.uint64(m.cols % 64)).any()


@given(mats())
def test_kernel_is_annihilated_and_complete(a):
    m = BitMatrix.from_dense(a)
    k = kernel_basis(m)
    assert k.rows == m.cols - rank(m)
    assert rank(k) == k.rows
    assert (m @ k.T).is_zero()


@given(mats())
def test_rref_rows_span_the_same_space(a):
    m = BitMatrix.from_dense(a)
    red, piv = rref(m)
    assert len(piv) == rank(m)
    assert rows_in_span(m, red) and rows_in_span(red, m)
    dense = red.to_dense()
    for i, c in enumerate(piv):
        assert dense[:, c].sum() == 1 and dense[i, c] == 1


@given(st.integers(1, 10), st.data())
def test_inverse_of_random_invertible(n, data):
    a = data.draw(arrays(np.uint8, (n, n), elements=st.integers(0, 1)))
    m = BitMatrix.from_dense(a)
    if rank(m) < n:
        with pytest.raises(F2Error):
            inverse(m)
        return
    assert m @ inverse(m) == BitMatrix.identity(n)


@given(mats(8, 20), st.data())
def test_solve_finds_preimages(a, data):
    m = BitMatrix.from_dense(a)
    x = data.draw(arrays(np.uint8, (m.cols,), elements=st.integers(0, 1)))
    b = m.mul_vec(BitVector.from_bits(x.tolist()))
    sol = solve(m, b)
    assert sol is not None and m.mul_vec(sol) == b


def test_solve_rows_reports_inconsistent_system():
    basis = BitMatrix.from_dense([[1, 0, 0], [0, 1, 0]])
    assert solve_rows(basis, BitMatrix.from_dense([[1, 1, 0]])).to_dense().tolist() == [[1, 1]]
    assert solve_rows(basis, BitMatrix.from_dense([[0, 0, 1]])) is None


def test_quotient_basis_keeps_rows_of_z():
    z = BitMatrix.from_dense([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]])
    b = BitMatrix.from_dense([[1, 0, 1, 0]])
    q = quotient_basis(z, b)
    assert q.rows == 2
    assert set(q.row_ints()) <= set(z.row_ints())
    assert rank(vstack([b, q])) == 3
    with pytest.raises(F2Error):
        quotient_basis(b, z)


def test_block_helpers():
    a = BitMatrix.from_dense([[1, 1]])
    b = BitMatrix.identity(2)
    assert block_diag(a, b).to_dense().tolist() == [[1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    assert hstack([a, a]).to_dense().tolist() == [[1, 1, 1, 1]]
    assert kron(a, b).to_dense().tolist() == [[1, 0, 1, 0], [0, 1, 0, 1]]
    assert in_row_space(b, BitVector.from_bits([1, 1]))


def test_shape_errors():
    with pytest.raises(F2Error):
        BitMatrix.identity(2) @ BitMatrix.identity(3)
    with pytest.raises(F2Error):
        BitMatrix.from_ints([8], 3)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=150))
def test_bitvector_roundtrip(bits):
    v = BitVector.from_bits(bits)
    assert v.to_bits() == bits
    assert v.weight == sum(bits)
    assert BitVector.from_support(v.support(), len(bits)) == v
