import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from foldgate.constructors import ClassicalCode, hypergraph_product, surface_code
from foldgate.css import (
    CssCode,
    CssError,
    LogicalBasis,
    brute_force_distance,
    change_of_basis,
    check_basis,
    code_from_dict,
    code_to_dict,
    direct_sum,
    distance,
    gram,
    load_code,
    logical_bases,
    logical_coordinates,
    min_logical,
    save_code,
    symplectify,
    validate,
)
from foldgate.f2 import BitMatrix, rank, vstack


@st.composite
def small_hgp(draw, max_bits=3, max_checks=3):
    def classical():
        n = draw(st.integers(1, max_bits))
        r = draw(st.integers(1, max_checks))
        h = draw(arrays(np.uint8, (r, n), elements=st.integers(0, 1)))
        return ClassicalCode(n, BitMatrix.from_dense(h))

    return hypergraph_product(classical(), classical())


@given(small_hgp())
def test_products_satisfy_commutation(code):
    assert code.is_valid()
    assert (code.hx @ code.hz.T).is_zero()


@given(small_hgp())
def test_logical_bases_are_valid_and_dual(code):
    b = logical_bases(code)
    assert b.k == code.k
    if code.k == 0:
        return
    check_basis(code, b)
    s = symplectify(b)
    assert gram(s) == BitMatrix.identity(code.k)
    assert (code.hz @ s.xbasis.T).is_zero()


@given(small_hgp())
def test_distance_matches_brute_force(code):
    assert code.n <= 20
    assert distance(code, code.n) == brute_force_distance(code, code.n)


@given(small_hgp(), st.data())
def test_logical_coordinates_ignore_stabilizers(code, data):
    if code.k == 0:
        return
    b = logical_bases(code)
    i = data.draw(st.integers(0, code.k - 1))
    stab = code.hz.row_ints()
    mask = data.draw(st.integers(0, (1 << len(stab)) - 1))
    z = b.zbasis.row_ints()[i]
    for j, r in enumerate(stab):
        if mask >> j & 1:
            z ^= r
    coords = logical_coordinates(b, BitMatrix.from_ints([z], code.n), BitMatrix.zeros(1, code.n))
    expect = [0] * (2 * code.k)
    expect[i] = 1
    assert coords.to_dense()[0].tolist() == expect


def test_change_of_basis_recovers_combination():
    code, _ = surface_code(3)
    two = direct_sum(code, code)
    b = logical_bases(two)
    z = b.zbasis.row_ints()
    x = b.xbasis.row_ints()
    new = LogicalBasis(BitMatrix.from_ints([z[0] ^ z[1], z[1]], two.n), BitMatrix.from_ints(x, two.n))
    tz, tx = change_of_basis(b, new)
    assert tz.to_dense().tolist() == [[1, 1], [0, 1]]
    assert tx == BitMatrix.identity(2)


def test_surface_codes_have_expected_parameters():
    for d in (2, 3, 4):
        code, _ = surface_code(d)
        assert (code.n, code.k) == (d * d + (d - 1) ** 2, 1)
        assert distance(code, d + 1) == d
        assert distance(code, d - 1) is None


def test_min_logical_returns_a_logical_operator():
    code, _ = surface_code(3)
    sup = min_logical(code, 3, "z")
    v = BitMatrix.from_supports([list(sup)], code.n)
    assert (code.hx @ v.T).is_zero()
    assert rank(vstack([code.hz, v])) == rank(code.hz) + 1


def test_distance_uses_meet_in_the_middle_beyond_direct_search():
    code, _ = surface_code(7)
    assert distance(code, 7) == 7


def test_invalid_code_is_reported():
    bad = CssCode.from_supports(3, [[0, 1]], [[1, 2]])
    assert validate(bad) == [(0, 0)]
    with pytest.raises(CssError):
        logical_bases(bad)
    with pytest.raises(CssError):
        CssCode(3, BitMatrix.zeros(1, 4), BitMatrix.zeros(1, 3))


def test_check_basis_rejects_bad_rows():
    code, _ = surface_code(3)
    b = logical_bases(code)
    with pytest.raises(CssError):
        check_basis(code, LogicalBasis(b.xbasis, b.xbasis))
    with pytest.raises(CssError):
        check_basis(code, LogicalBasis(code.hz.select_rows([0]), b.xbasis))


def test_json_roundtrip(tmp_path):
    code, _ = surface_code(3)
    b = logical_bases(code)
    path = tmp_path / "code.json"
    save_code(path, code, b)
    code2, b2 = load_code(path)
    assert code2.hx == code.hx and code2.hz == code.hz
    assert b2.zbasis == b.zbasis and b2.xbasis == b.xbasis
    assert code_to_dict(code2, b2) == code_to_dict(code, b)


@pytest.mark.parametrize(
    "obj",
    [
        {"n": "3"},
        {"n": 3, "hx": [[0, 3]]},
        {"n": 3, "hx": [[1, 0]]},
        {"n": 3, "hx": [[0, 0]]},
        {"n": 3, "hz": "x"},
    ],
)
def test_code_from_dict_rejects_malformed(obj):
    with pytest.raises(CssError):
        code_from_dict(obj)
