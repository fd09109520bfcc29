import numpy as np

from foldgate.coxeter import hyperbolic_code
from foldgate.css import check_basis, gram, validate
from foldgate.dualities import isomorphism
from foldgate.f2 import BitMatrix
from foldgate.fixtures import block_code, bring, hgp_seed, presentation


def apply_word(word, gens, perms):
    n = len(next(iter(perms.values())))
    out = list(range(n))
    for sym in word:
        p = perms[gens[sym >> 1]]
        if sym & 1:
            inv = [0] * n
            for i, j in enumerate(p):
                inv[j] = i
            p = inv
        out = [p[i] for i in out]
    return out


def test_edge_permutations_satisfy_the_presentation(bring_data):
    pres = presentation("bring")
    for rel in pres.rels:
        assert apply_word(rel, pres.gens, bring_data.perms) == list(range(30))


def test_bring_cells(bring_data):
    code = bring_data.code
    assert (code.n, code.k, code.rx, code.rz) == (30, 8, 12, 12)
    assert validate(code) == []
    for m in (code.hx, code.hz):
        d = m.to_dense()
        assert (d.sum(axis=1) == 5).all()
        assert (d.sum(axis=0) == 2).all()


def test_fixture_matches_enumerated_surface(bring_data):
    built = hyperbolic_code(presentation("bring"))
    assert isomorphism(bring_data.code, built) is not None


def test_bring_bases(bring_data):
    check_basis(bring_data.code, bring_data.basis)
    check_basis(bring_data.code, bring_data.primed)
    assert gram(bring_data.basis) == bring_data.matrix("phi")
    assert gram(bring_data.primed) == BitMatrix.identity(8)


def test_other_fixtures():
    seed = hgp_seed()
    assert (seed.n, seed.r, seed.k) == (6, 4, 2)
    code, basis = block_code()
    assert (code.n, code.k) == (16, 4)
    assert validate(code) == []
    check_basis(code, basis)
    assert gram(basis) == BitMatrix.from_dense(np.eye(4, dtype=np.uint8)[::-1])
    for name in ("bring_rotation", "quotient_40"):
        assert presentation(name).rels
