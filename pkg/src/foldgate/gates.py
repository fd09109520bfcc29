"""Fold-transversal circuits and their logical symplectic action.

Pauli operators are row vectors ``(z_1..z_n | x_1..x_n)`` and Clifford
circuits act on them from the right by ``2n x 2n`` matrices.  Layers of a
circuit apply in list order.  Phases are not tracked beyond the per-check
sign audit of phase-type gates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .css import CssCode, LogicalBasis, direct_sum, gram, logical_coordinates
from .dualities import (
    AUTOMORPHISM,
    CodeDuality,
    DualityError,
    commutes,
    is_zx_duality,
    phase_violations,
    stacked_duality,
    zx_dualities,
)
from .f2 import BitMatrix, block_diag, rows_in_span
from .groups import F2MatrixGroup

HADAMARD_ALL = "hadamard-all"
SWAP_PAIRS = "swap-pairs"
PHASE_ON_SET = "phase-on-set"
CZ_PAIRS = "cz-pairs"
PERMUTATION = "qubit-permutation"


class GateError(ValueError):
    """A gate precondition failed."""


class PartitionError(GateError):
    """No balanced split of the fixed qubits exists."""


# circuits


@dataclass(frozen=True)
class Layer:
    kind: str
    pairs: tuple[tuple[int, int], ...] = ()
    a: tuple[int, ...] = ()
    b: tuple[int, ...] = ()
    perm: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        if self.kind == HADAMARD_ALL:
            return {"type": self.kind}
        if self.kind in (SWAP_PAIRS, CZ_PAIRS):
            return {"type": self.kind, "pairs": [list(p) for p in self.pairs]}
        if self.kind == PHASE_ON_SET:
            return {"type": self.kind, "A": list(self.a), "B": list(self.b)}
        return {"type": self.kind, "perm": list(self.perm)}

    @classmethod
    def from_dict(cls, obj: dict) -> Layer:
        kind = obj["type"]
        if kind == HADAMARD_ALL:
            return cls(kind)
        if kind in (SWAP_PAIRS, CZ_PAIRS):
            return cls(kind, pairs=tuple(tuple(p) for p in obj["pairs"]))
        if kind == PHASE_ON_SET:
            return cls(kind, a=tuple(obj["A"]), b=tuple(obj["B"]))
        if kind == PERMUTATION:
            return cls(kind, perm=tuple(obj["perm"]))
        raise GateError(f"unknown layer type {kind!r}")


@dataclass(frozen=True)
class TransversalCircuit:
    n: int
    layers: tuple[Layer, ...]

    def __post_init__(self) -> None:
        for layer in self.layers:
            used = [i for p in layer.pairs for i in p] + list(layer.a) + list(layer.b)
            if any(i < 0 or i >= self.n for i in used):
                raise GateError("layer index out of range")
            if len(set(used)) != len(used):
                raise GateError("layer acts twice on one qubit")
            if layer.perm and sorted(layer.perm) != list(range(self.n)):
                raise GateError("permutation layer is not a permutation of the qubits")

    def symplectic(self) -> PhysSymplectic:
        n = self.n
        m = np.eye(2 * n, dtype=np.int64)
        for layer in self.layers:
            m = (m @ _layer_matrix(layer, n)) & 1
        return PhysSymplectic(BitMatrix.from_dense(m))

    def to_list(self) -> list[dict]:
        return [layer.to_dict() for layer in self.layers]

    @classmethod
    def from_list(cls, n: int, items: list[dict]) -> TransversalCircuit:
        return cls(n, tuple(Layer.from_dict(x) for x in items))


def _layer_matrix(layer: Layer, n: int) -> np.ndarray:
    m = np.zeros((2 * n, 2 * n), dtype=np.int64)
    eye = np.eye(n, dtype=np.int64)
    if layer.kind == HADAMARD_ALL:
        m[:n, n:] = eye
        m[n:, :n] = eye
        return m
    if layer.kind in (SWAP_PAIRS, PERMUTATION):
        perm = list(range(n))
        if layer.kind == SWAP_PAIRS:
            for i, j in layer.pairs:
                perm[i], perm[j] = j, i
        else:
            perm = list(layer.perm)
        for i, j in enumerate(perm):
            m[i, j] = 1
            m[n + i, n + j] = 1
        return m
    # diagonal gates: X_i -> X_i Z_(partner)
    m[:n, :n] = eye
    m[n:, n:] = eye
    if layer.kind == PHASE_ON_SET:
        for i in layer.a + layer.b:
            m[n + i, i] ^= 1
    elif layer.kind == CZ_PAIRS:
        for i, j in layer.pairs:
            m[n + i, j] ^= 1
            m[n + j, i] ^= 1
    else:
        raise GateError(f"unknown layer type {layer.kind!r}")
    return m


def omega(n: int) -> BitMatrix:
    """The physical symplectic form ``[[0, I], [I, 0]]``."""
    return omega_phi(BitMatrix.identity(n))


def omega_phi(phi: BitMatrix) -> BitMatrix:
    """Form on logical coordinates ``(z-coeffs | x-coeffs)``: ``[[0, phi^T], [phi, 0]]``."""
    k = phi.rows
    out = np.zeros((2 * k, 2 * k), dtype=np.uint8)
    out[:k, k:] = phi.to_dense().T
    out[k:, :k] = phi.to_dense()
    return BitMatrix.from_dense(out)


def is_symplectic(m: BitMatrix, form: BitMatrix) -> bool:
    return (m @ form @ m.T) == form


@dataclass(frozen=True)
class PhysSymplectic:
    matrix: BitMatrix
    audit: dict | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return self.matrix.rows // 2

    def is_symplectic(self) -> bool:
        return is_symplectic(self.matrix, omega(self.n))


# logical action


def _stabilizer_rows(code: CssCode) -> BitMatrix:
    n = code.n
    zrows = np.hstack([code.hz.to_dense(), np.zeros((code.rz, n), dtype=np.uint8)])
    xrows = np.hstack([np.zeros((code.rx, n), dtype=np.uint8), code.hx.to_dense()])
    return BitMatrix.from_dense(np.vstack([zrows, xrows]))


def preserves_stabilizers(code: CssCode, phys: PhysSymplectic) -> bool:
    stab = _stabilizer_rows(code)
    if stab.rows == 0:
        return True
    return rows_in_span(stab, stab @ phys.matrix)


def logical_action(code: CssCode, phys: PhysSymplectic, basis: LogicalBasis) -> BitMatrix:
    """The ``2k x 2k`` matrix of a stabilizer-preserving Clifford on the logical basis.

    Row ``i < k`` is the image of Z-logical ``i`` and row ``k + i`` of X-logical
    ``i``, written in coordinates ``(zbasis | xbasis)``.
    """
    if phys.matrix.rows != 2 * code.n:
        raise GateError("physical matrix has the wrong size")
    if not preserves_stabilizers(code, phys):
        raise GateError("circuit does not preserve the stabilizer group")
    n, k = code.n, basis.k
    logical = BitMatrix.from_dense(
        np.vstack(
            [
                np.hstack([basis.zbasis.to_dense(), np.zeros((k, n), dtype=np.uint8)]),
                np.hstack([np.zeros((k, n), dtype=np.uint8), basis.xbasis.to_dense()]),
            ]
        )
    )
    img = (logical @ phys.matrix).to_dense()
    return logical_coordinates(
        basis, BitMatrix.from_dense(img[:, :n]), BitMatrix.from_dense(img[:, n:])
    )


@dataclass(frozen=True)
class LogicalGate:
    circuit: TransversalCircuit
    logical: BitMatrix
    basis_id: str = ""
    audit: dict | None = field(default=None, compare=False)

    def is_symplectic(self, basis: LogicalBasis) -> bool:
        return is_symplectic(self.logical, omega_phi(gram(basis)))

    def to_dict(self) -> dict:
        return {
            "circuit": self.circuit.to_list(),
            "logical": ["".join(map(str, r)) for r in self.logical.to_dense().tolist()],
            "basis": self.basis_id,
        }


def _gate(code, circuit, basis, basis_id, audit=None) -> LogicalGate:
    phys = circuit.symplectic()
    return LogicalGate(circuit, logical_action(code, phys, basis), basis_id, audit)


# gate constructions


def hadamard_circuit(tau: CodeDuality) -> TransversalCircuit:
    n = tau.n
    if tau.is_self_inverse():
        mover = Layer(SWAP_PAIRS, pairs=tuple(tau.pairs()))
    else:
        mover = Layer(PERMUTATION, perm=tau.qubits)
    return TransversalCircuit(n, (Layer(HADAMARD_ALL), mover))


def hadamard_gate(code: CssCode, tau: CodeDuality, basis: LogicalBasis, basis_id: str = "") -> LogicalGate:
    """``H_tau``: Hadamard on every qubit, then move qubit ``i`` to ``tau(i)``."""
    if not is_zx_duality(code, tau):
        raise GateError("tau is not a ZX-duality of the code")
    return _gate(code, hadamard_circuit(tau), basis, basis_id)


def find_ab_partition(code: CssCode, tau: CodeDuality) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split the fixed qubits so every X-check meets both halves equally.

    Backtracking over the fixed qubits in increasing order, first choice A.
    Fixed qubits outside every X-check go to A.
    """
    fixed = tau.fixed_qubits()
    pos = {q: i for i, q in enumerate(fixed)}
    checks = []
    for sup in code.hx.supports():
        members = [pos[q] for q in sup if q in pos]
        if len(members) % 2:
            raise PartitionError("an X-check has odd overlap with the fixed qubits")
        if members:
            checks.append(members)
    by_var: list[list[int]] = [[] for _ in fixed]
    for c, members in enumerate(checks):
        for v in members:
            by_var[v].append(c)
    half = [len(m) // 2 for m in checks]
    count = [[0, 0] for _ in checks]
    side = [0] * len(fixed)

    def rec(v: int) -> bool:
        if v == len(fixed):
            return True
        for s in (0, 1):
            if all(count[c][s] < half[c] for c in by_var[v]):
                side[v] = s
                for c in by_var[v]:
                    count[c][s] += 1
                if rec(v + 1):
                    return True
                for c in by_var[v]:
                    count[c][s] -= 1
        return False

    if not rec(0):
        raise PartitionError("no split of the fixed qubits balances every X-check")
    a = tuple(q for q, s in zip(fixed, side) if s == 0)
    b = tuple(q for q, s in zip(fixed, side) if s == 1)
    return a, b


def sign_audit(code: CssCode, tau: CodeDuality, a, b) -> dict:
    """Per X-check counts that decide the phase picked up under ``S_tau``."""
    aset, bset = set(a), set(b)
    pairs = tau.pairs()
    rows = []
    for sup in code.hx.supports():
        s = set(sup)
        rows.append(
            {
                "in_a": len(s & aset),
                "in_b": len(s & bset),
                "pairs": sum(1 for i, j in pairs if i in s and j in s),
            }
        )
    ok = all(r["in_a"] == r["in_b"] and r["pairs"] % 2 == 0 for r in rows)
    return {"balanced": ok, "checks": rows}


def phase_circuit(tau: CodeDuality, a, b) -> TransversalCircuit:
    layers = []
    if a or b:
        layers.append(Layer(PHASE_ON_SET, a=tuple(a), b=tuple(b)))
    if tau.pairs():
        layers.append(Layer(CZ_PAIRS, pairs=tuple(tau.pairs())))
    return TransversalCircuit(tau.n, tuple(layers))


def phase_gate(
    code: CssCode, tau: CodeDuality, basis: LogicalBasis, basis_id: str = "", strict: bool = True
) -> LogicalGate:
    """``S_tau``: S on A, S-dagger on B, CZ across each two-element orbit.

    ``strict=False`` drops the even-fixed-count requirement; the X-check
    conditions and the balanced split are always enforced.
    """
    bad = phase_violations(code, tau, strict=strict)
    if bad:
        raise GateError("; ".join(bad))
    a, b = find_ab_partition(code, tau)
    audit = sign_audit(code, tau, a, b)
    if not audit["balanced"]:
        raise GateError("sign audit failed")
    return _gate(code, phase_circuit(tau, a, b), basis, basis_id, audit)


def stacked_phase_gate(
    code: CssCode, basis: LogicalBasis, tau: CodeDuality | None = None
) -> tuple[CssCode, LogicalGate]:
    """Phase-type gate on ``code + code`` from a self-inverse ZX-duality of ``code``."""
    if tau is None:
        tau = next((d for d in zx_dualities(code) if d.is_self_inverse()), None)
        if tau is None:
            raise GateError("code has no self-inverse ZX-duality")
    elif not (is_zx_duality(code, tau) and tau.is_self_inverse()):
        raise GateError("tau is not a self-inverse ZX-duality")
    double = direct_sum(code, code)
    big = LogicalBasis(block_diag(basis.zbasis, basis.zbasis), block_diag(basis.xbasis, basis.xbasis))
    return double, phase_gate(double, stacked_duality(code, tau), big, "stacked")


def permutation_gate(
    code: CssCode, sigma: CodeDuality, basis: LogicalBasis, basis_id: str = ""
) -> LogicalGate:
    if sigma.kind != AUTOMORPHISM or not commutes(code, sigma):
        raise GateError("sigma is not an automorphism of the code")
    circuit = TransversalCircuit(sigma.n, (Layer(PERMUTATION, perm=sigma.qubits),))
    return _gate(code, circuit, basis, basis_id)


def qubit_permutation(code: CssCode, perm) -> CodeDuality:
    """Complete a qubit permutation to an automorphism by matching check supports."""
    n, rx = code.n, code.rx
    rows = [frozenset(s) for s in code.hx.supports()] + [frozenset(s) for s in code.hz.supports()]
    where = {(r, i < rx): i for i, r in enumerate(rows)}
    checks = []
    for i, r in enumerate(rows):
        img = (frozenset(perm[q] for q in r), i < rx)
        if img not in where:
            raise DualityError("qubit permutation does not map checks to checks")
        checks.append(where[img])
    return CodeDuality(tuple(perm), tuple(checks), AUTOMORPHISM)


# logical-level symplectic generators


def logical_cnot(k: int, control: int, target: int) -> BitMatrix:
    """CNOT symplectic in a symplectic basis: X_c -> X_c X_t, Z_t -> Z_c Z_t."""
    m = np.eye(2 * k, dtype=np.uint8)
    m[target, control] = 1
    m[k + control, k + target] = 1
    return BitMatrix.from_dense(m)


def logical_cz(k: int, i: int, j: int) -> BitMatrix:
    """CZ symplectic in a symplectic basis: X_i -> X_i Z_j, X_j -> X_j Z_i."""
    m = np.eye(2 * k, dtype=np.uint8)
    m[k + i, j] = 1
    m[k + j, i] = 1
    return BitMatrix.from_dense(m)


# generated groups


def generating_subset(perms: list[CodeDuality]) -> list[CodeDuality]:
    """Automorphisms, in order, each outside the group generated by those before it."""
    keep: list[CodeDuality] = []
    if not perms:
        return keep
    ident = tuple(range(perms[0].n))
    elems = {ident}
    for p in perms:
        if p.qubits in elems:
            continue
        keep.append(p)
        frontier = list(elems)
        while frontier:
            nxt = []
            for e in frontier:
                for g in keep:
                    f = tuple(g.qubits[i] for i in e)
                    if f not in elems:
                        elems.add(f)
                        nxt.append(f)
            frontier = nxt
    return keep


@dataclass(frozen=True)
class GateSet:
    """Logical generators of the group reached by permutation and fold-transversal gates."""

    permutations: tuple[BitMatrix, ...]
    hadamards: tuple[BitMatrix, ...]
    phases: tuple[BitMatrix, ...]
    form: BitMatrix

    def group(self, *extra: BitMatrix) -> F2MatrixGroup:
        gens = self.permutations + self.hadamards + self.phases + extra
        return F2MatrixGroup(self.form.rows, gens, self.form)

    def permutation_group(self) -> F2MatrixGroup:
        return F2MatrixGroup(self.form.rows, self.permutations, self.form)


def gate_set(
    code: CssCode,
    basis: LogicalBasis,
    automorphisms: list[CodeDuality],
    taus: list[CodeDuality],
    strict: bool = True,
) -> GateSet:
    """Permutation gates for ``automorphisms``, ``H_tau`` for every tau and ``S_tau`` where allowed."""
    perms = tuple(permutation_gate(code, a, basis).logical for a in generating_subset(automorphisms))
    hs = tuple(hadamard_gate(code, t, basis).logical for t in taus)
    ss = tuple(
        phase_gate(code, t, basis, strict=strict).logical
        for t in taus
        if not phase_violations(code, t, strict=strict)
    )
    return GateSet(perms, hs, ss, omega_phi(gram(basis)))


__all__ = [
    "CZ_PAIRS",
    "HADAMARD_ALL",
    "PERMUTATION",
    "PHASE_ON_SET",
    "SWAP_PAIRS",
    "GateError",
    "GateSet",
    "Layer",
    "LogicalGate",
    "PartitionError",
    "PhysSymplectic",
    "TransversalCircuit",
    "find_ab_partition",
    "gate_set",
    "generating_subset",
    "hadamard_circuit",
    "hadamard_gate",
    "is_symplectic",
    "logical_action",
    "logical_cnot",
    "logical_cz",
    "omega",
    "omega_phi",
    "permutation_gate",
    "phase_circuit",
    "phase_gate",
    "preserves_stabilizers",
    "qubit_permutation",
    "sign_audit",
    "stacked_phase_gate",
]
