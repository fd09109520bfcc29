"""Matrix groups over F2: exact order, membership and invariant subspaces.

Matrices act on row vectors from the right.  The stabilizer chain uses
the natural action on the nonzero vectors of F2^m, encoded as integers
(bit ``j`` is coordinate ``j``), so ``m`` is limited to ``MAX_DIM``.
Orbits and transversals are append-only, which keeps earlier sifts valid
as the chain grows and lets verification resume where it stopped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from math import prod

import numpy as np

from . import kernels
from .f2 import BitMatrix, _Reducer, inverse, rank, solve_rows

MAX_DIM = 20
_U64 = np.uint64


class GroupError(ValueError):
    pass


def sp_order(k: int) -> int:
    """Order of the symplectic group Sp_{2k}(F2)."""
    if k < 1:
        raise GroupError("sp_order needs k >= 1")
    return 2 ** (k * k) * prod(4**i - 1 for i in range(1, k + 1))


def standard_form(k: int) -> BitMatrix:
    """``[[0, I], [I, 0]]`` on ``(z | x)`` coordinates."""
    d = np.zeros((2 * k, 2 * k), dtype=np.uint8)
    d[:k, k:] = np.eye(k, dtype=np.uint8)
    d[k:, :k] = np.eye(k, dtype=np.uint8)
    return BitMatrix.from_dense(d)


def _to_rows(m: BitMatrix) -> np.ndarray:
    return np.array(m.row_ints(), dtype=_U64)


def _from_rows(rows: np.ndarray, m: int) -> BitMatrix:
    return BitMatrix.from_ints([int(r) for r in rows], m)


# stabilizer chain


class _Level:
    def __init__(self, base: int, m: int):
        self.base = base
        self.m = m
        self.lookup = np.full(1 << m, -1, dtype=np.int32)
        self.lookup[base] = 0
        self.orbit = np.array([base], dtype=_U64)
        ident = np.array([1 << j for j in range(m)], dtype=_U64)
        self.trans = ident[None, :].copy()
        self.tinv = ident[None, :].copy()
        self.gens: list[np.ndarray] = []
        self.gens_inv: list[np.ndarray] = []
        # Schreier generators from points < vp and gens < vg are verified
        self.vp = 0
        self.vg = 0

    def add_gen(self, g: np.ndarray, ginv: np.ndarray) -> None:
        self.gens.append(g)
        self.gens_inv.append(ginv)
        old = len(self.orbit)
        self._grow(range(old), [len(self.gens) - 1])
        self._grow(None, range(len(self.gens)), start=old)

    def _grow(self, points, gen_ids, start: int | None = None) -> None:
        # first pass: given gens over given points; then breadth first over new points
        if points is not None:
            lo, hi = 0, len(self.orbit)
            self._layer(np.arange(lo, hi), gen_ids)
            start = hi
        lo = start
        while lo < len(self.orbit):
            hi = len(self.orbit)
            self._layer(np.arange(lo, hi), range(len(self.gens)))
            lo = hi

    def _layer(self, idx: np.ndarray, gen_ids) -> None:
        for gi in gen_ids:
            g, ginv = self.gens[gi], self.gens_inv[gi]
            imgs = kernels.vec_images(self.orbit[idx], g)
            fresh = self.lookup[imgs.astype(np.int64)] < 0
            if not fresh.any():
                continue
            cand = imgs[fresh]
            parents = idx[fresh]
            _, first = np.unique(cand, return_index=True)
            first.sort()
            cand, parents = cand[first], parents[first]
            n0 = len(self.orbit)
            self.lookup[cand.astype(np.int64)] = np.arange(n0, n0 + len(cand), dtype=np.int32)
            self.orbit = np.concatenate([self.orbit, cand])
            t = kernels.mat_mul(self.trans[parents], g)
            ti = kernels.mat_mul(np.broadcast_to(ginv, (len(cand), self.m)).copy(), self.tinv[parents])
            self.trans = np.concatenate([self.trans, t])
            self.tinv = np.concatenate([self.tinv, ti])

    def entry(self):
        return (int(self.base), self.lookup, self.tinv)


class StabilizerChain:
    """Base and strong generating set for a matrix group."""

    def __init__(self, m: int):
        self.m = m
        self.levels: list[_Level] = []
        self.identity = np.array([1 << j for j in range(m)], dtype=_U64)

    @property
    def order(self) -> int:
        return prod(len(lv.orbit) for lv in self.levels)

    @property
    def base(self) -> list[int]:
        return [int(lv.base) for lv in self.levels]

    @property
    def orbit_lengths(self) -> list[int]:
        return [len(lv.orbit) for lv in self.levels]

    def sift(self, batch: np.ndarray, start: int = 0) -> tuple[np.ndarray, np.ndarray]:
        entries = [lv.entry() for lv in self.levels[start:]]
        if not entries:
            return np.array(batch, dtype=_U64, copy=True), np.zeros(len(batch), dtype=np.int64)
        return kernels.sift(np.ascontiguousarray(batch, dtype=_U64), entries)

    def _is_identity(self, rows: np.ndarray) -> np.ndarray:
        return (rows == self.identity[None, :]).all(axis=1)

    def _moved_point(self, g: np.ndarray) -> int:
        for j in range(self.m):
            if int(g[j]) != 1 << j:
                return 1 << j
        raise GroupError("identity has no moved point")

    def add(self, g: np.ndarray, depth: int) -> None:
        """Add a sifted residue ``g`` that fixes the first ``depth`` base points."""
        ginv = _to_rows(inverse(_from_rows(g, self.m)))
        if depth == len(self.levels):
            self.levels.append(_Level(self._moved_point(g), self.m))
        for lv in self.levels[: depth + 1]:
            lv.add_gen(g, ginv)

    def absorb(self, g: np.ndarray) -> int | None:
        """Sift ``g``; add the residue if it is not the identity.  Returns the level or None."""
        res, depth = self.sift(g[None, :])
        d = int(depth[0])
        if d == len(self.levels) and self._is_identity(res)[0]:
            return None
        self.add(res[0], d)
        return d

    def verify(self, upper: int | None = None) -> bool:
        """Complete the chain with Schreier generators.

        Stops early and returns False if the order reaches ``upper`` first
        (the caller knows the group can be no larger).
        """
        i = len(self.levels) - 1
        while i >= 0:
            if upper is not None and self.order == upper:
                return False
            lv = self.levels[i]
            hit = self._check_level(i)
            if hit is None:
                lv.vp, lv.vg = len(lv.orbit), len(lv.gens)
                i -= 1
                continue
            res, d = hit
            self.add(res, i + 1 + d)
            i = min(i + 1 + d, len(self.levels) - 1)
        return True

    def _check_level(self, i: int):
        lv = self.levels[i]
        npts, ngen = len(lv.orbit), len(lv.gens)
        for gi in range(ngen):
            lo = 0 if gi >= lv.vg else lv.vp
            if lo >= npts:
                continue
            pts = np.arange(lo, npts)
            g = lv.gens[gi]
            imgs = kernels.vec_images(lv.orbit[pts], g)
            back = lv.lookup[imgs.astype(np.int64)]
            sch = kernels.mat_mul(kernels.mat_mul(lv.trans[pts], g), lv.tinv[back])
            res, depth = self.sift(sch, i + 1)
            below = len(self.levels) - i - 1
            bad = (depth < below) | ~self._is_identity(res)
            if bad.any():
                j = int(np.argmax(bad))
                return res[j], int(depth[j])
        return None

    def contains(self, g: np.ndarray) -> bool:
        res, depth = self.sift(g[None, :])
        return int(depth[0]) == len(self.levels) and bool(self._is_identity(res)[0])


def _product_replacement(gens: list[np.ndarray], rng: np.random.Generator, m: int):
    slots = [g.copy() for g in gens]
    while len(slots) < 10:
        slots.append(gens[len(slots) % len(gens)].copy())
    acc = np.array([1 << j for j in range(m)], dtype=_U64)

    def step():
        nonlocal acc
        i, j = rng.choice(len(slots), size=2, replace=False)
        if rng.integers(2):
            slots[i] = kernels.mat_mul(slots[i][None, :], slots[j])[0]
        else:
            slots[i] = kernels.mat_mul(slots[j][None, :], slots[i])[0]
        acc = kernels.mat_mul(acc[None, :], slots[i])[0]
        return acc

    for _ in range(50):
        step()
    return step


def build_chain(
    gens: list[np.ndarray], m: int, upper: int | None = None, seed: int = 0, random_sifts: int = 0
) -> StabilizerChain:
    """Stabilizer chain for the group generated by ``gens``.

    ``upper`` is a proven bound on the order; construction stops once the
    chain reaches it.  ``random_sifts`` seeded random elements are sifted
    before the deterministic completion.
    """
    chain = StabilizerChain(m)
    ident = chain.identity
    gens = [g for g in gens if not np.array_equal(g, ident)]
    if not gens:
        return chain
    # first base point: the unit vector with the largest orbit
    best, best_len = None, -1
    for j in range(m):
        seen = {1 << j}
        frontier = [1 << j]
        while frontier:
            pts = np.array(frontier, dtype=_U64)
            nxt = []
            for g in gens:
                for p in kernels.vec_images(pts, g).tolist():
                    if p not in seen:
                        seen.add(p)
                        nxt.append(p)
            frontier = nxt
        if len(seen) > best_len:
            best, best_len = 1 << j, len(seen)
    chain.levels.append(_Level(best, m))
    for g in gens:
        chain.absorb(g)
    if random_sifts:
        step = _product_replacement(gens, np.random.default_rng(seed), m)
        quiet = 0
        for _ in range(random_sifts):
            if upper is not None and chain.order == upper:
                return chain
            quiet = quiet + 1 if chain.absorb(step()) is None else 0
            if quiet >= 40:
                break
    chain.verify(upper)
    return chain


# groups


@dataclass(frozen=True)
class F2MatrixGroup:
    dimension: int
    generators: tuple[BitMatrix, ...]
    form: BitMatrix | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.dimension > MAX_DIM:
            raise GroupError(f"dimension {self.dimension} exceeds {MAX_DIM}")
        for g in self.generators:
            if g.shape != (self.dimension, self.dimension):
                raise GroupError("generator has the wrong shape")
            if rank(g) != self.dimension:
                raise GroupError("generator is not invertible")

    def _rows(self) -> list[np.ndarray]:
        return [_to_rows(g) for g in self.generators]

    def preserves_form(self, form: BitMatrix) -> bool:
        return all((g @ form @ g.T) == form for g in self.generators)

    def upper_bound(self) -> int | None:
        """A proven bound on the order: the symplectic group order when the form is kept."""
        form = self.form if self.form is not None else standard_form(self.dimension // 2)
        if self.dimension % 2 or self.dimension == 0:
            return None
        if self.preserves_form(form) and rank(form) == self.dimension:
            return sp_order(self.dimension // 2)
        return None

    @cached_property
    def chain(self) -> StabilizerChain:
        up = self.upper_bound()
        return build_chain(self._rows(), self.dimension, upper=up, random_sifts=400 if up else 0)

    def order(self) -> int:
        return self.chain.order

    def contains(self, m: BitMatrix) -> bool:
        if m.shape != (self.dimension, self.dimension):
            raise GroupError("dimension mismatch")
        if rank(m) != self.dimension:
            return False
        if self.chain.order == self.upper_bound():
            # the chain may have stopped early, but the group is the full symplectic group
            form = self.form if self.form is not None else standard_form(self.dimension // 2)
            return (m @ form @ m.T) == form
        return self.chain.contains(_to_rows(m))

    def with_generators(self, *extra: BitMatrix) -> F2MatrixGroup:
        return F2MatrixGroup(self.dimension, self.generators + tuple(extra), self.form)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "generators": [
                ["".join(map(str, r)) for r in g.to_dense().tolist()] for g in self.generators
            ],
            "order": str(self.order()),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> F2MatrixGroup:
        gens = tuple(
            BitMatrix.from_dense([[int(c) for c in r] for r in g]) for g in obj["generators"]
        )
        return cls(int(obj["dimension"]), gens)


def index_in_sp(g: F2MatrixGroup, k: int, form: BitMatrix | None = None) -> int:
    """``|Sp_2k(F2)| / |g|`` for a group preserving a non-degenerate alternating form."""
    if g.dimension != 2 * k:
        raise GroupError("dimension is not 2k")
    form = form if form is not None else (g.form if g.form is not None else standard_form(k))
    if not g.preserves_form(form):
        raise GroupError("a generator is not symplectic for the given form")
    total = sp_order(k)
    order = F2MatrixGroup(g.dimension, g.generators, form).order()
    if total % order:
        raise GroupError(f"order {order} does not divide |Sp_{2 * k}(F2)|")
    return total // order


def naive_order(g: F2MatrixGroup, limit: int = 10**5) -> int:
    """Order by closing the generator set under multiplication (oracle for small groups)."""
    m = g.dimension
    ident = tuple(1 << j for j in range(m))
    gens = [np.array(x.row_ints(), dtype=_U64) for x in g.generators]
    seen = {ident}
    frontier = [np.array(ident, dtype=_U64)]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = kernels.mat_mul(a[None, :], s)[0]
                key = tuple(int(v) for v in b)
                if key not in seen:
                    seen.add(key)
                    nxt.append(b)
                    if len(seen) > limit:
                        raise GroupError(f"group has more than {limit} elements")
        frontier = nxt
    return len(seen)


# invariant subspaces

SYMPLECTIC = "symplectic"
LAGRANGIAN = "lagrangian"
ISOTROPIC = "isotropic"
OTHER = "other"


@dataclass(frozen=True)
class Subspace:
    basis: BitMatrix
    kind: str

    @property
    def dim(self) -> int:
        return self.basis.rows


def _echelon(rows: list[int]) -> tuple[int, ...]:
    """Canonical reduced basis of the span (sorted fully reduced rows)."""
    red = _Reducer()
    for r in rows:
        red.add(r)
    piv = sorted(red.pivots.items())
    # full reduction so the basis is canonical
    vals = dict(piv)
    for low in sorted(vals, reverse=True):
        v = vals[low]
        for other in vals:
            if other != low and vals[other] & low:
                vals[other] ^= v
    return tuple(sorted(vals.values()))


def spin(gens: list[np.ndarray], v: int, m: int) -> tuple[int, ...]:
    """Smallest invariant subspace containing ``v``."""
    red = _Reducer()
    red.add(v)
    basis = [v]
    i = 0
    while i < len(basis):
        p = np.array([basis[i]], dtype=_U64)
        for g in gens:
            w = int(kernels.vec_images(p, g)[0])
            if red.add(w):
                basis.append(w)
        i += 1
    return _echelon(basis)


def _orbit_reps(gens: list[np.ndarray], m: int) -> list[int]:
    """Smallest vector of each orbit on nonzero vectors."""
    n = 1 << m
    label = np.full(n, -1, dtype=np.int64)
    reps = []
    for v in range(1, n):
        if label[v] >= 0:
            continue
        label[v] = v
        reps.append(v)
        frontier = np.array([v], dtype=_U64)
        while frontier.size:
            nxt = []
            for g in gens:
                img = kernels.vec_images(frontier, g).astype(np.int64)
                new = img[label[img] < 0]
                if new.size:
                    new = np.unique(new)
                    label[new] = v
                    nxt.append(new)
            frontier = np.concatenate(nxt).astype(_U64) if nxt else np.zeros(0, dtype=_U64)
    return reps


def classify(basis: BitMatrix, form: BitMatrix) -> str:
    if basis.rows == 0:
        return ISOTROPIC
    restricted = basis @ form @ basis.T
    if rank(restricted) == basis.rows:
        return SYMPLECTIC
    if restricted.is_zero():
        if 2 * basis.rows == form.rows and rank(form) == form.rows:
            return LAGRANGIAN
        return ISOTROPIC
    return OTHER


def cyclic_submodules(g: F2MatrixGroup) -> list[tuple[int, ...]]:
    """All distinct subspaces spanned by a single orbit, smallest first."""
    gens = g._rows()
    m = g.dimension
    found = {spin(gens, v, m) for v in _orbit_reps(gens, m)}
    return sorted(found, key=lambda s: (len(s), s))


@dataclass(frozen=True)
class SubspaceDecomposition:
    """Invariant subspaces of a matrix group.

    ``parts`` is a direct-sum decomposition (a single full-space part when
    none was found) and ``minimal`` lists every minimal invariant subspace.
    ``unique`` is False when the minimal subspaces admit other choices of
    ``parts``.
    """

    parts: tuple[Subspace, ...]
    minimal: tuple[Subspace, ...]

    @property
    def unique(self) -> bool:
        return len(self.minimal) <= len(self.parts)

    @property
    def split(self) -> bool:
        return len(self.parts) > 1

    def summary(self) -> list[dict]:
        return [{"dim": p.dim, "kind": p.kind} for p in self.parts]


def invariant_subspaces(g: F2MatrixGroup, form: BitMatrix | None = None) -> SubspaceDecomposition:
    """Direct-sum decomposition into invariant subspaces, each classified against ``form``.

    Cyclic submodules are taken greedily, smallest first, while they stay
    independent of those already chosen.
    """
    m = g.dimension
    form = form if form is not None else (g.form if g.form is not None else standard_form(m // 2))
    cyclic = cyclic_submodules(g)
    chosen: list[tuple[int, ...]] = []
    red = _Reducer()
    dim = 0
    for sub in cyclic:
        trial = _Reducer()
        trial.pivots = dict(red.pivots)
        if all(trial.add(v) for v in sub):
            red = trial
            chosen.append(sub)
            dim += len(sub)
            if dim == m:
                break
    if dim != m:
        chosen = [tuple(1 << j for j in range(m))]
    spans = [set(_span(s)) for s in cyclic]
    minimal = [s for s, sp in zip(cyclic, spans) if not any(o < sp for o in spans)]

    def wrap(sub):
        basis = BitMatrix.from_ints(list(sub), m)
        return Subspace(basis, classify(basis, form))

    return SubspaceDecomposition(tuple(map(wrap, chosen)), tuple(map(wrap, minimal)))


def _span(basis: tuple[int, ...]) -> list[int]:
    out = [0]
    for b in basis:
        out += [x ^ b for x in out]
    return out


def same_span(a: BitMatrix, b: BitMatrix) -> bool:
    from .f2 import rows_in_span

    return a.cols == b.cols and rows_in_span(a, b) and rows_in_span(b, a)


def is_invariant(g: F2MatrixGroup, basis: BitMatrix) -> bool:
    from .f2 import rows_in_span

    return all(rows_in_span(basis, basis @ x) for x in g.generators)


@dataclass(frozen=True)
class Restriction:
    group: F2MatrixGroup
    basis: BitMatrix
    parent_order: int

    @property
    def kernel_order(self) -> int:
        return self.parent_order // self.group.order()

    @property
    def faithful(self) -> bool:
        return self.kernel_order == 1


def restrict(g: F2MatrixGroup, basis: BitMatrix) -> Restriction:
    """Generators acting on an invariant subspace, written in ``basis`` coordinates."""
    if rank(basis) != basis.rows:
        raise GroupError("subspace basis rows are dependent")
    gens = []
    for x in g.generators:
        coords = solve_rows(basis, basis @ x)
        if coords is None:
            raise GroupError("subspace is not invariant under a generator")
        gens.append(coords)
    form = None
    if g.form is not None:
        form = basis @ g.form @ basis.T
    return Restriction(F2MatrixGroup(basis.rows, tuple(gens), form), basis, g.order())


def intertwiners(a: list[BitMatrix], b: list[BitMatrix]) -> BitMatrix:
    """Basis of all ``X`` with ``X a_i = b_i X`` for every ``i``, one flattened ``X`` per row.

    An invertible solution means the two generator lists are the same
    action written in different bases.
    """
    if len(a) != len(b) or not a:
        raise GroupError("need two equally long, non-empty generator lists")
    m = a[0].rows
    rows = []
    for x, y in zip(a, b):
        ad, bd = x.to_dense().astype(np.int64), y.to_dense().astype(np.int64)
        for i in range(m):
            for j in range(m):
                r = np.zeros(m * m, dtype=np.int64)
                r[i * m : (i + 1) * m] ^= ad[:, j]
                r[j::m] ^= bd[i, :]
                rows.append(r & 1)
    from .f2 import kernel_basis

    return kernel_basis(BitMatrix.from_dense(np.array(rows)))


def conjugating_matrix(a: list[BitMatrix], b: list[BitMatrix]) -> BitMatrix | None:
    """An invertible ``X`` with ``X a_i X^-1 = b_i``, if the solution space holds one.

    Only the basis vectors and their pairwise sums are tried.
    """
    sols = intertwiners(a, b).row_ints()
    m = a[0].rows
    cands = sols + [x ^ y for i, x in enumerate(sols) for y in sols[i + 1 :]]
    for v in cands:
        x = BitMatrix.from_ints([(v >> (i * m)) & ((1 << m) - 1) for i in range(m)], m)
        if rank(x) == m:
            return x
    return None


def save_group(path, g: F2MatrixGroup) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(g.to_dict(), fh)
        fh.write("\n")


__all__ = [
    "F2MatrixGroup",
    "GroupError",
    "LAGRANGIAN",
    "ISOTROPIC",
    "OTHER",
    "SYMPLECTIC",
    "Restriction",
    "StabilizerChain",
    "Subspace",
    "SubspaceDecomposition",
    "build_chain",
    "classify",
    "cyclic_submodules",
    "conjugating_matrix",
    "index_in_sp",
    "intertwiners",
    "invariant_subspaces",
    "is_invariant",
    "naive_order",
    "restrict",
    "same_span",
    "save_group",
    "sp_order",
    "spin",
    "standard_form",
]
