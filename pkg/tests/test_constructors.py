import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from foldgate.constructors import (
    ClassicalCode,
    ConstructionError,
    GroupAction,
    balanced_product,
    factor_swap,
    golay_incidence,
    golay_vertex_face,
    hypergraph_product,
    repetition_code,
    surface_code,
)
from foldgate.css import brute_force_distance, validate
from foldgate.dualities import is_zx_duality
from foldgate.f2 import BitMatrix


def dense_rank(a):
    a = np.array(a, dtype=np.uint8) % 2
    r = 0
    for c in range(a.shape[1]):
        piv = [i for i in range(r, a.shape[0]) if a[i, c]]
        if not piv:
            continue
        a[[r, piv[0]]] = a[[piv[0], r]]
        for i in range(a.shape[0]):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


classical = st.integers(2, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=1, max_size=4)
)


def as_code(rows):
    return ClassicalCode(len(rows[0]), BitMatrix.from_dense(np.array(rows, dtype=np.uint8)))


@given(classical, classical)
def test_hgp_parameters(ra, rb):
    a, b = as_code(ra), as_code(rb)
    code = hypergraph_product(a, b)
    assert validate(code) == []
    assert code.n == a.n * b.n + a.r * b.r
    rka, rkb = dense_rank(ra), dense_rank(rb)
    ka, kb = a.n - rka, b.n - rkb
    kta, ktb = a.r - rka, b.r - rkb
    assert code.k == ka * kb + kta * ktb


@given(classical)
def test_factor_swap_is_a_duality(ra):
    a = as_code(ra)
    assert is_zx_duality(hypergraph_product(a, a), factor_swap(a))


def test_surface_codes():
    for d in (2, 3, 4):
        code, diag = surface_code(d)
        assert code.n == d * d + (d - 1) ** 2
        assert code.k == 1
        assert brute_force_distance(code, d) == d
        assert diag.is_self_inverse()
    with pytest.raises(ConstructionError):
        surface_code(1)


def ring(n):
    return ClassicalCode.from_supports(n, [[i, (i + 1) % n] for i in range(n)])


def shift(n):
    return GroupAction.cyclic([(i + 1) % n for i in range(n)], [(i + 1) % n for i in range(n)])


def test_balanced_product_of_rings():
    for n in (3, 4, 5):
        a = ring(n)
        code = balanced_product(a, a, shift(n), shift(n))
        assert validate(code) == []
        assert code.n == 2 * n
        # the quotient of a torus by a free translation is again a torus
        assert code.k == 2


def test_trivial_group_gives_hypergraph_product():
    a, b = ring(3), repetition_code(3)
    triv_a = GroupAction(((0, 1, 2),), ((0, 1, 2),))
    triv_b = GroupAction(((0, 1, 2),), ((0, 1),))
    bp = balanced_product(a, b, triv_a, triv_b)
    hgp = hypergraph_product(a, b)
    assert bp.hx == hgp.hx and bp.hz == hgp.hz


def test_balanced_product_rejects_bad_actions():
    a = ring(4)
    flip = GroupAction(((0, 1, 2, 3), (0, 3, 2, 1)), ((0, 1, 2, 3), (3, 2, 1, 0)))
    flip.validate(a)
    assert not flip.is_free()
    with pytest.raises(ConstructionError):
        balanced_product(a, a, flip, flip)
    with pytest.raises(ConstructionError):
        balanced_product(a, a, shift(4), GroupAction.cyclic([2, 3, 0, 1], [2, 3, 0, 1]))
    bogus = GroupAction.cyclic([1, 0, 2, 3], [0, 1, 2, 3])
    with pytest.raises(ConstructionError):
        bogus.validate(a)
    assert GroupAction.from_list(shift(4).to_list()) == shift(4)


def test_golay_constructions():
    vf = golay_vertex_face()
    assert vf.is_golay
    assert vf.weight_distribution == {8: 759, 12: 2576, 16: 759, 24: 1}
    inc = golay_incidence()
    h = inc.code.h.to_dense()
    assert (h.sum(axis=1) == 4).all()
    assert inc.dimension == 24 - dense_rank(h)
    assert sum(inc.weight_distribution.values()) == 2**inc.dimension - 1
    assert inc.min_distance == min(inc.weight_distribution)


def test_classical_code_roundtrip():
    a = ring(5)
    assert ClassicalCode.from_dict(a.to_dict()) == a
    assert a.transpose().transpose() == a
    assert a.k == 1
    with pytest.raises(ConstructionError):
        ClassicalCode(3, BitMatrix.identity(2))
