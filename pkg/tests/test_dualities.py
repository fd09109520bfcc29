import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foldgate.constructors import surface_code
from foldgate.css import direct_sum
from foldgate.dualities import (
    AUTOMORPHISM,
    ZX_DUALITY,
    CapExceeded,
    CodeDuality,
    DualityError,
    automorphism_group,
    classical_automorphisms,
    commutes,
    find_tau0,
    is_zx_duality,
    isomorphism,
    phase_violations,
    profile,
    relabel_code,
    stacked_duality,
    zx_dualities,
)


def key(d):
    return d.qubits, d.checks


def coset_identity_holds(code):
    auts = automorphism_group(code)
    duals = zx_dualities(code)
    target = {key(d) for d in duals}
    return all({key(t.compose(s, code.rx)) for s in auts} == target for t in duals)


def test_bring_census(bring_data, bring_census):
    auts, duals, tau = bring_census
    assert len(auts) == 120 and len(duals) == 120
    assert len(classical_automorphisms(bring_data.code)) == 240
    assert sum(d.is_self_inverse() for d in duals) == 20
    assert tau.unique
    assert tau.duality.fixed_qubits() == bring_data.raw["tau0_fixed_qubits"]
    assert phase_violations(bring_data.code, tau.duality) == []


def test_every_found_map_is_verified(bring_data, bring_census):
    auts, duals, _ = bring_census
    code = bring_data.code
    assert all(a.kind == AUTOMORPHISM and commutes(code, a) for a in auts)
    assert all(d.kind == ZX_DUALITY and is_zx_duality(code, d) for d in duals)


def test_coset_identity(bring_data, hgp_code, block):
    for code in (bring_data.code, hgp_code, block[0], surface_code(3)[0]):
        assert coset_identity_holds(code)


def test_stacked_dualities_are_fixed_point_free(bring_data, hgp_code, block):
    for code in (bring_data.code, hgp_code, block[0], surface_code(2)[0]):
        double = direct_sum(code, code)
        for t in zx_dualities(code):
            if not t.is_self_inverse():
                continue
            s = stacked_duality(code, t)
            assert is_zx_duality(double, s)
            assert s.is_self_inverse()
            assert s.fixed_qubits() == []


def test_surface_code_dualities():
    for d in (2, 3, 4):
        code, diag = surface_code(d)
        assert is_zx_duality(code, diag)
        assert len(diag.fixed_qubits()) == 2 * d - 1
        assert phase_violations(code, diag) == [f"odd number of fixed qubits ({2 * d - 1})"]
        assert phase_violations(code, diag, strict=False) == []
        duals = zx_dualities(code)
        assert len(duals) == 4
        rotations = [t for t in duals if len(t.fixed_qubits()) == 1]
        assert len(rotations) == 2
        for r in rotations:
            assert any("odd number of fixed" in v for v in phase_violations(code, r))
            assert "not self-inverse" in phase_violations(code, r)


def test_relaxed_mode_drops_only_the_parity_rule():
    code, _ = surface_code(3)
    for t in zx_dualities(code):
        strict = phase_violations(code, t)
        relaxed = phase_violations(code, t, strict=False)
        assert set(relaxed) <= set(strict)
        dropped = [v for v in strict if v not in relaxed]
        assert all(v.startswith("odd number of fixed") for v in dropped)


def test_profile_counts(bring_data, bring_census):
    p = profile(bring_data.code, bring_census[2].duality)
    assert p.self_inverse and p.num_fixed == 6
    assert set(p.fixed_overlap_parity) == {0}
    assert set(p.pairs_in_support) == {0}


@settings(max_examples=15)
@given(st.randoms(use_true_random=False))
def test_isomorphism_finds_relabelling(rnd):
    code, _ = surface_code(3)
    q = list(range(code.n))
    rnd.shuffle(q)
    cx = list(range(code.rx))
    cz = list(range(code.rz))
    rnd.shuffle(cx)
    rnd.shuffle(cz)
    iso = CodeDuality(tuple(q), tuple(cx + [code.rx + c for c in cz]), AUTOMORPHISM)
    other = relabel_code(code, iso)
    found = isomorphism(code, other)
    assert found is not None
    assert relabel_code(code, found).hx.supports() == other.hx.supports()


def test_cap_is_enforced(monkeypatch, bring_data):
    with pytest.raises(CapExceeded):
        automorphism_group(bring_data.code, cap=10)
    monkeypatch.setenv("FOLDGATE_CAP", "5")
    with pytest.raises(CapExceeded):
        zx_dualities(bring_data.code)


def test_non_self_dual_code_has_no_dualities():
    code, _ = surface_code(3)
    lopsided = direct_sum(code, code)
    assert zx_dualities(lopsided) != []
    from foldgate.css import CssCode

    unequal = CssCode(code.n, code.hx, code.hz.select_rows([0]))
    assert zx_dualities(unequal) == []


def test_find_tau0_errors(bring_data):
    from foldgate.css import LogicalBasis

    b = bring_data.basis
    with pytest.raises(DualityError):
        find_tau0(bring_data.code, LogicalBasis(b.zbasis, b.zbasis))
