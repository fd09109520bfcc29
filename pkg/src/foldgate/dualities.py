"""Automorphisms and ZX-dualities of CSS codes.

The Tanner graph has one node per qubit and per check (X-checks first,
then Z-checks, matching the stacked matrix ``H = (hx over hz)``).
Automorphisms preserve the check types; ZX-dualities swap them.  Both are
found as colour-preserving isomorphisms from the Tanner graph to itself or
to its type-swapped copy, by colour refinement and individualization.
"""

from __future__ import annotations

import os
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .css import CssCode, LogicalBasis

DEFAULT_CAP = 10**6

AUTOMORPHISM = "automorphism"
ZX_DUALITY = "zx-duality"
MIXED = "mixed"


class DualityError(ValueError):
    """A duality precondition failed."""


class CapExceeded(RuntimeError):
    """More symmetries than the configured enumeration cap."""


def default_cap() -> int:
    env = os.environ.get("FOLDGATE_CAP")
    return int(env) if env else DEFAULT_CAP


@dataclass(frozen=True)
class TannerGraph:
    n: int
    rx: int
    rz: int
    nbrs: tuple[tuple[int, ...], ...]

    @classmethod
    def from_code(cls, code: CssCode) -> TannerGraph:
        n, rx = code.n, code.rx
        adj: list[list[int]] = [[] for _ in range(n + rx + code.rz)]
        for i, sup in enumerate(code.hx.supports() + code.hz.supports()):
            for q in sup:
                adj[q].append(n + i)
                adj[n + i].append(q)
        return cls(n, rx, code.rz, tuple(tuple(sorted(a)) for a in adj))

    @property
    def size(self) -> int:
        return self.n + self.rx + self.rz

    def colours(self, swap: bool = False, merge: bool = False) -> list[int]:
        x, z = (2, 1) if swap else (1, 2)
        if merge:
            x = z = 1
        return [0] * self.n + [x] * self.rx + [z] * self.rz


@dataclass(frozen=True)
class CodeDuality:
    """Qubit and check permutations as image lists; checks indexed X first, then Z."""

    qubits: tuple[int, ...]
    checks: tuple[int, ...]
    kind: str

    @property
    def n(self) -> int:
        return len(self.qubits)

    def compose(self, other: CodeDuality, rx: int) -> CodeDuality:
        """``self`` after ``other``."""
        q = tuple(self.qubits[i] for i in other.qubits)
        c = tuple(self.checks[i] for i in other.checks)
        return CodeDuality(q, c, _kind(c, rx))

    def inverse(self, rx: int) -> CodeDuality:
        q = [0] * len(self.qubits)
        for i, j in enumerate(self.qubits):
            q[j] = i
        c = [0] * len(self.checks)
        for i, j in enumerate(self.checks):
            c[j] = i
        return CodeDuality(tuple(q), tuple(c), _kind(c, rx))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.qubits)) and all(
            i == j for i, j in enumerate(self.checks)
        )

    def is_self_inverse(self) -> bool:
        return all(self.qubits[j] == i for i, j in enumerate(self.qubits)) and all(
            self.checks[j] == i for i, j in enumerate(self.checks)
        )

    def fixed_qubits(self) -> list[int]:
        return [i for i, j in enumerate(self.qubits) if i == j]

    def pairs(self) -> list[tuple[int, int]]:
        """Two-element qubit orbits ``(i, tau(i))`` with ``i < tau(i)``."""
        return [(i, j) for i, j in enumerate(self.qubits) if i < j and self.qubits[j] == i]

    def to_dict(self) -> dict:
        return {"qubits": list(self.qubits), "checks": list(self.checks), "kind": self.kind}

    @classmethod
    def from_dict(cls, obj: dict) -> CodeDuality:
        return cls(tuple(obj["qubits"]), tuple(obj["checks"]), obj["kind"])


def _kind(checks: Sequence[int], rx: int) -> str:
    if all((j < rx) == (i < rx) for i, j in enumerate(checks)):
        return AUTOMORPHISM
    if all((j < rx) != (i < rx) for i, j in enumerate(checks)):
        return ZX_DUALITY
    return MIXED


def commutes(code: CssCode, d: CodeDuality) -> bool:
    """Bit-exact check that ``H[checks[i], qubits[j]] == H[i, j]``."""
    h = np.vstack([code.hx.to_dense(), code.hz.to_dense()])
    out = np.zeros_like(h)
    out[np.ix_(list(d.checks), list(d.qubits))] = h
    return bool(np.array_equal(out, h))


def is_zx_duality(code: CssCode, d: CodeDuality) -> bool:
    return _kind(d.checks, code.rx) == ZX_DUALITY and commutes(code, d)


# search


def _refine(nbrs, colours: list[int]) -> tuple[list[int], list]:
    """Colour refinement to a stable partition.

    Returns the new colours and the sorted signature list, which is an
    isomorphism invariant used to compare two sides.
    """
    cur = list(colours)
    ncol = len(set(cur))
    history = []
    while True:
        sigs = [(cur[v], tuple(sorted(cur[u] for u in nbrs[v]))) for v in range(len(cur))]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        cur = [ranks[s] for s in sigs]
        history.append(sorted(sigs))
        if len(ranks) == ncol:
            return cur, history
        ncol = len(ranks)


def _isomorphisms(nbrs1, col1, nbrs2, col2, cap: int) -> Iterator[list[int]]:
    found = 0

    def rec(c1, c2):
        nonlocal found
        c1, h1 = _refine(nbrs1, c1)
        c2, h2 = _refine(nbrs2, c2)
        if h1 != h2:
            return
        cells1: dict[int, list[int]] = {}
        for v, c in enumerate(c1):
            cells1.setdefault(c, []).append(v)
        if len(cells1) == len(c1):
            where = {c: v for v, c in enumerate(c2)}
            mapping = [where[c] for c in c1]
            if all(
                sorted(mapping[u] for u in nbrs1[v]) == list(nbrs2[mapping[v]])
                for v in range(len(c1))
            ):
                found += 1
                if found > cap:
                    raise CapExceeded(f"more than {cap} symmetries")
                yield mapping
            return
        target = min((len(cell), c) for c, cell in cells1.items() if len(cell) > 1)[1]
        v = cells1[target][0]
        fresh = len(cells1)
        for w in (u for u, c in enumerate(c2) if c == target):
            n1 = list(c1)
            n1[v] = fresh
            n2 = list(c2)
            n2[w] = fresh
            yield from rec(n1, n2)

    yield from rec(list(col1), list(col2))


def _dualities(code: CssCode, swap: bool, merge: bool, cap: int | None) -> list[CodeDuality]:
    cap = default_cap() if cap is None else cap
    g = TannerGraph.from_code(code)
    src = g.colours(merge=merge)
    dst = g.colours(swap=swap, merge=merge)
    out = []
    for m in _isomorphisms(g.nbrs, src, g.nbrs, dst, cap):
        q = tuple(m[: g.n])
        c = tuple(x - g.n for x in m[g.n :])
        out.append(CodeDuality(q, c, _kind(c, g.rx)))
    out.sort(key=lambda d: (d.qubits, d.checks))
    return out


def automorphism_group(code: CssCode, cap: int | None = None) -> list[CodeDuality]:
    """All of Aut(C): Tanner-graph automorphisms fixing the check types."""
    return _dualities(code, swap=False, merge=False, cap=cap)


def zx_dualities(code: CssCode, cap: int | None = None) -> list[CodeDuality]:
    """All ZX-dualities; empty when the code is not self-ZX-dual."""
    if code.rx != code.rz:
        return []
    return _dualities(code, swap=True, merge=False, cap=cap)


def classical_automorphisms(code: CssCode, cap: int | None = None) -> list[CodeDuality]:
    """Automorphisms of the stacked check matrix, ignoring check types."""
    return _dualities(code, swap=False, merge=True, cap=cap)


def isomorphism(a: CssCode, b: CssCode) -> CodeDuality | None:
    """A type-preserving isomorphism from ``a`` to ``b``, or ``None``."""
    if (a.n, a.rx, a.rz) != (b.n, b.rx, b.rz):
        return None
    ga, gb = TannerGraph.from_code(a), TannerGraph.from_code(b)
    for m in _isomorphisms(ga.nbrs, ga.colours(), gb.nbrs, gb.colours(), cap=1):
        return CodeDuality(tuple(m[: a.n]), tuple(x - a.n for x in m[a.n :]), AUTOMORPHISM)
    return None


def relabel_code(code: CssCode, iso: CodeDuality) -> CssCode:
    """Apply an isomorphism to a code's labels (qubit ``i`` becomes ``iso.qubits[i]``)."""
    from .f2 import BitMatrix

    n, rx = code.n, code.rx
    hx = [None] * rx
    hz = [None] * code.rz
    for i, sup in enumerate(code.hx.supports()):
        hx[iso.checks[i]] = sorted(iso.qubits[q] for q in sup)
    for j, sup in enumerate(code.hz.supports()):
        hz[iso.checks[rx + j] - rx] = sorted(iso.qubits[q] for q in sup)
    return CssCode(n, BitMatrix.from_supports(hx, n), BitMatrix.from_supports(hz, n), code.label)


# profiles and gate eligibility


@dataclass(frozen=True)
class DualityProfile:
    self_inverse: bool
    fixed_qubits: tuple[int, ...]
    fixed_overlap_parity: tuple[int, ...]
    pairs_in_support: tuple[int, ...]

    @property
    def num_fixed(self) -> int:
        return len(self.fixed_qubits)


def profile(code: CssCode, tau: CodeDuality) -> DualityProfile:
    """Per-X-check data for the phase-type gate conditions."""
    fixed = set(tau.fixed_qubits())
    pairs = tau.pairs()
    overlap, npairs = [], []
    for sup in code.hx.supports():
        s = set(sup)
        overlap.append(len(s & fixed) % 2)
        npairs.append(sum(1 for i, j in pairs if i in s and j in s))
    return DualityProfile(tau.is_self_inverse(), tuple(sorted(fixed)), tuple(overlap), tuple(npairs))


def phase_violations(code: CssCode, tau: CodeDuality, strict: bool = True) -> list[str]:
    """Names of the phase-type gate conditions that ``tau`` fails.

    ``strict`` also requires an even number of fixed qubits; the other
    conditions do not imply it.
    """
    out = []
    if not is_zx_duality(code, tau):
        out.append("not a ZX-duality")
        return out
    p = profile(code, tau)
    if not p.self_inverse:
        out.append("not self-inverse")
    if strict and p.num_fixed % 2:
        out.append(f"odd number of fixed qubits ({p.num_fixed})")
    bad = [i for i, par in enumerate(p.fixed_overlap_parity) if par]
    if bad:
        out.append(f"X-check {bad[0]} has odd overlap with the fixed qubits")
    bad = [i for i, c in enumerate(p.pairs_in_support) if c % 2]
    if bad:
        out.append(f"X-check {bad[0]} contains an odd number of two-element orbits")
    return out


@dataclass(frozen=True)
class Tau0Match:
    duality: CodeDuality
    candidates: tuple[CodeDuality, ...]

    @property
    def unique(self) -> bool:
        return len(self.candidates) == 1


def find_tau0(code: CssCode, basis: LogicalBasis, dualities: list[CodeDuality] | None = None) -> Tau0Match:
    """Self-inverse ZX-dualities sending each zbasis support onto the matching xbasis support."""
    if dualities is None:
        dualities = zx_dualities(code)
    zs = [set(s) for s in basis.zbasis.supports()]
    xs = [set(s) for s in basis.xbasis.supports()]
    hits = tuple(
        d
        for d in dualities
        if d.is_self_inverse() and all({d.qubits[q] for q in z} == x for z, x in zip(zs, xs))
    )
    if not hits:
        raise DualityError("no self-inverse ZX-duality maps the Z basis onto the X basis")
    return Tau0Match(hits[0], hits)


def stacked_duality(code: CssCode, tau: CodeDuality) -> CodeDuality:
    """Fixed-point-free ZX-duality of ``code + code``: ``tau`` on each copy, then swap copies."""
    n, rx, rz = code.n, code.rx, code.rz
    q = [0] * (2 * n)
    for c in range(2):
        for i in range(n):
            q[c * n + i] = (1 - c) * n + tau.qubits[i]
    checks = [0] * (2 * (rx + rz))
    for c in range(2):
        for i in range(rx):
            z = tau.checks[i] - rx
            checks[c * rx + i] = 2 * rx + (1 - c) * rz + z
        for j in range(rz):
            x = tau.checks[rx + j]
            checks[2 * rx + c * rz + j] = (1 - c) * rx + x
    return CodeDuality(tuple(q), tuple(checks), ZX_DUALITY)


__all__ = [
    "AUTOMORPHISM",
    "ZX_DUALITY",
    "MIXED",
    "CapExceeded",
    "CodeDuality",
    "DualityError",
    "DualityProfile",
    "TannerGraph",
    "Tau0Match",
    "automorphism_group",
    "classical_automorphisms",
    "commutes",
    "find_tau0",
    "is_zx_duality",
    "isomorphism",
    "phase_violations",
    "profile",
    "relabel_code",
    "stacked_duality",
    "zx_dualities",
]
