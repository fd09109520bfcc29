"""Code constructions: hypergraph and balanced products, planar surface
codes, and classical codes from the cells of Bring's surface.

Product qubits are ordered with the ``(bit_a, bit_b)`` block first, row
major, then the ``(check_a, check_b)`` block.  X-checks are indexed by
``(check_a, bit_b)`` and Z-checks by ``(bit_a, check_b)``, both row major.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import product

import numpy as np

from .css import CssCode
from .dualities import ZX_DUALITY, CodeDuality
from .f2 import BitMatrix, hstack, kernel_basis, kron, rank


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class ClassicalCode:
    n: int
    h: BitMatrix

    def __post_init__(self) -> None:
        if self.h.cols != self.n:
            raise ConstructionError(f"check matrix has {self.h.cols} columns, expected {self.n}")

    @property
    def r(self) -> int:
        return self.h.rows

    @property
    def k(self) -> int:
        return self.n - rank(self.h)

    def transpose(self) -> ClassicalCode:
        return ClassicalCode(self.r, self.h.T)

    @classmethod
    def from_supports(cls, n: int, rows) -> ClassicalCode:
        return cls(n, BitMatrix.from_supports(rows, n))

    def to_dict(self) -> dict:
        return {"n": self.n, "h": self.h.supports()}

    @classmethod
    def from_dict(cls, obj: dict) -> ClassicalCode:
        return cls.from_supports(obj["n"], obj["h"])


def repetition_code(d: int) -> ClassicalCode:
    """``d`` bits, ``d - 1`` checks on neighbouring pairs."""
    return ClassicalCode.from_supports(d, [[i, i + 1] for i in range(d - 1)])


# products


def hypergraph_product(a: ClassicalCode, b: ClassicalCode, label: str = "") -> CssCode:
    ia, ib = BitMatrix.identity(a.n), BitMatrix.identity(b.n)
    ira, irb = BitMatrix.identity(a.r), BitMatrix.identity(b.r)
    hx = hstack([kron(a.h, ib), kron(ira, b.h.T)])
    hz = hstack([kron(ia, b.h), kron(a.h.T, irb)])
    return CssCode(a.n * b.n + a.r * b.r, hx, hz, label)


def factor_swap(a: ClassicalCode) -> CodeDuality:
    """ZX-duality of ``hypergraph_product(a, a)`` exchanging the two factors."""
    n, r = a.n, a.r
    q = [0] * (n * n + r * r)
    for i, j in product(range(n), range(n)):
        q[i * n + j] = j * n + i
    for c, e in product(range(r), range(r)):
        q[n * n + c * r + e] = n * n + e * r + c
    rx = r * n
    checks = [0] * (2 * rx)
    for c, j in product(range(r), range(n)):
        checks[c * n + j] = rx + j * r + c  # X (c, j) -> Z (j, c)
    for i, c in product(range(n), range(r)):
        checks[rx + i * r + c] = c * n + i  # Z (i, c) -> X (c, i)
    return CodeDuality(tuple(q), tuple(checks), ZX_DUALITY)


def surface_code(d: int) -> tuple[CssCode, CodeDuality]:
    """Planar surface code of distance ``d`` and its diagonal ZX-duality.

    ``n = d^2 + (d-1)^2``; built as the hypergraph product of two
    repetition codes, so the diagonal reflection is the factor swap.
    """
    if d < 2:
        raise ConstructionError("surface code needs d >= 2")
    rep = repetition_code(d)
    return hypergraph_product(rep, rep, f"surface-{d}"), factor_swap(rep)


# group actions


@dataclass(frozen=True)
class GroupAction:
    """A finite group acting on the bits and checks of a classical code.

    Element ``g`` sends bit ``i`` to ``bits[g][i]`` and check ``c`` to
    ``checks[g][c]``.
    """

    bits: tuple[tuple[int, ...], ...]
    checks: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.bits)

    def table(self) -> list[list[int]]:
        """Multiplication table: ``table[g][h]`` is the index of ``g`` after ``h``."""
        index = {(b, c): g for g, (b, c) in enumerate(zip(self.bits, self.checks))}
        out = []
        for g in range(self.order):
            row = []
            for h in range(self.order):
                key = (
                    tuple(self.bits[g][i] for i in self.bits[h]),
                    tuple(self.checks[g][i] for i in self.checks[h]),
                )
                if key not in index:
                    raise ConstructionError("group action is not closed under composition")
                row.append(index[key])
            out.append(row)
        return out

    def validate(self, code: ClassicalCode) -> None:
        dense = code.h.to_dense()
        for b, c in zip(self.bits, self.checks):
            if sorted(b) != list(range(code.n)) or sorted(c) != list(range(code.r)):
                raise ConstructionError("group element is not a permutation of the right size")
            out = np.zeros_like(dense)
            out[np.ix_(list(c), list(b))] = dense
            if not np.array_equal(out, dense):
                raise ConstructionError("group element is not a code automorphism")
        self.table()

    def is_free(self) -> bool:
        for b, c in zip(self.bits, self.checks):
            ident = all(i == j for i, j in enumerate(b)) and all(i == j for i, j in enumerate(c))
            if ident:
                continue
            if any(i == j for i, j in enumerate(b)) or any(i == j for i, j in enumerate(c)):
                return False
        return True

    def to_list(self) -> list[dict]:
        return [{"bits": list(b), "checks": list(c)} for b, c in zip(self.bits, self.checks)]

    @classmethod
    def from_list(cls, items: list[dict]) -> GroupAction:
        return cls(tuple(tuple(e["bits"]) for e in items), tuple(tuple(e["checks"]) for e in items))

    @classmethod
    def cyclic(cls, gen_bits: Sequence[int], gen_checks: Sequence[int]) -> GroupAction:
        """The cyclic group generated by one element."""
        b0 = tuple(range(len(gen_bits)))
        c0 = tuple(range(len(gen_checks)))
        bits, checks = [b0], [c0]
        b, c = tuple(gen_bits), tuple(gen_checks)
        while b != b0 or c != c0:
            bits.append(b)
            checks.append(c)
            b = tuple(gen_bits[i] for i in b)
            c = tuple(gen_checks[i] for i in c)
        return cls(tuple(bits), tuple(checks))


def _orbits(perms: Sequence[Sequence[int]], size: int) -> tuple[list[int], list[int]]:
    """Orbit index per point and the smallest point of each orbit, by first appearance."""
    label = [-1] * size
    reps = []
    for p in range(size):
        if label[p] >= 0:
            continue
        for g in perms:
            label[g[p]] = len(reps)
        reps.append(p)
    return label, reps


def balanced_product(
    a: ClassicalCode, b: ClassicalCode, act_a: GroupAction, act_b: GroupAction, label: str = ""
) -> CssCode:
    """Hypergraph product with a free diagonal group action factored out."""
    act_a.validate(a)
    act_b.validate(b)
    if act_a.order != act_b.order or act_a.table() != act_b.table():
        raise ConstructionError("the two actions are not actions of the same group")
    for name, act in (("first", act_a), ("second", act_b)):
        if not act.is_free():
            raise ConstructionError(f"the {name} action has a non-trivial point stabilizer")
    hgp = hypergraph_product(a, b)
    nq, rx, rz = hgp.n, hgp.rx, hgp.rz
    qperms, xperms, zperms = [], [], []
    for ba, ca, bb, cb in zip(act_a.bits, act_a.checks, act_b.bits, act_b.checks):
        q = [0] * nq
        for i, j in product(range(a.n), range(b.n)):
            q[i * b.n + j] = ba[i] * b.n + bb[j]
        off = a.n * b.n
        for c, e in product(range(a.r), range(b.r)):
            q[off + c * b.r + e] = off + ca[c] * b.r + cb[e]
        qperms.append(q)
        xperms.append([ca[c] * b.n + bb[j] for c, j in product(range(a.r), range(b.n))])
        zperms.append([ba[i] * b.r + cb[e] for i, e in product(range(a.n), range(b.r))])
    qlab, qrep = _orbits(qperms, nq)
    xlab, xrep = _orbits(xperms, rx)
    zlab, zrep = _orbits(zperms, rz)
    hx_d, hz_d = hgp.hx.to_dense(), hgp.hz.to_dense()
    # coinvariants: sum the checks of an orbit against one representative qubit
    hx = np.zeros((len(xrep), len(qrep)), dtype=np.int64)
    for x in range(rx):
        hx[xlab[x]] += hx_d[x, qrep]
    hz = np.zeros((len(zrep), len(qrep)), dtype=np.int64)
    for q in range(nq):
        hz[:, qlab[q]] += hz_d[zrep, q]
    return CssCode(
        len(qrep), BitMatrix.from_dense(hx & 1), BitMatrix.from_dense(hz & 1), label
    )


# Bring's surface


@dataclass(frozen=True)
class GolayReport:
    code: ClassicalCode
    dimension: int
    min_distance: int
    weight_distribution: dict[int, int]

    @property
    def is_golay(self) -> bool:
        return (self.code.n, self.dimension, self.min_distance) == (24, 12, 8)


def _weight_report(code: ClassicalCode) -> GolayReport:
    basis = kernel_basis(code.h).row_ints()
    k = len(basis)
    if k > 20:
        raise ConstructionError("kernel too large to enumerate")
    words = [0]
    for r in basis:
        words += [w ^ r for w in words]
    dist: dict[int, int] = {}
    for w in words[1:]:
        c = w.bit_count()
        dist[c] = dist.get(c, 0) + 1
    return GolayReport(code, k, min(dist) if dist else 0, dict(sorted(dist.items())))


def golay_incidence() -> GolayReport:
    """Edge checks on vertex and face bits of Bring's surface, with its parameters.

    Each of the 30 checks covers the two endpoints and the two faces of an
    edge.  The parameters are measured by enumerating every codeword.
    """
    from .coxeter import BRING, surface_complex

    sc = surface_complex(BRING)
    h = hstack([sc.vertex_edge.T, sc.face_edge.T])
    return _weight_report(ClassicalCode(24, h))


def golay_vertex_face() -> GolayReport:
    """Checks ``[I | J + VF]`` from the vertex/face incidence ``VF`` of Bring's surface.

    A vertex and a face are incident when they share an edge.
    """
    from .coxeter import BRING, surface_complex

    sc = surface_complex(BRING)
    ve = sc.vertex_edge.to_dense().astype(np.int64)
    fe = sc.face_edge.to_dense().astype(np.int64)
    vf = (ve @ fe.T > 0).astype(np.int64)
    h = np.hstack([np.eye(12, dtype=np.int64), 1 - vf])
    return _weight_report(ClassicalCode(24, BitMatrix.from_dense(h)))


def save_classical(path, code: ClassicalCode) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(code.to_dict(), fh)
        fh.write("\n")


__all__ = [
    "ClassicalCode",
    "ConstructionError",
    "GolayReport",
    "GroupAction",
    "balanced_product",
    "factor_swap",
    "golay_incidence",
    "golay_vertex_face",
    "hypergraph_product",
    "repetition_code",
    "surface_code",
]
