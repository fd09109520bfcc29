"""Todd-Coxeter coset enumeration and hyperbolic surface codes.

Word syntax
-----------
Generators are single lowercase letters; the uppercase letter is the
inverse.  Juxtaposition is multiplication, ``(...)`` groups, and ``^n``
raises the preceding letter or group to an integer power (``^-1`` inverts).
Examples: ``a^2``, ``(ab)^5``, ``(xY)^3``, ``abcB``.

A presentation file has ``gens:``, ``rels:`` and optional ``sub:`` lines::

    gens: a b c
    rels: a^2 b^2 c^2 (ab)^5 (ac)^2 (bc)^5 (abcb)^3

Cosets are right cosets ``Hg`` and generators act on the right.

Surface codes
-------------
A reflection presentation has three involutory generators ``a, b, c``.
Faces, edges and vertices are the cosets of ``<a,b>``, ``<a,c>`` and
``<b,c>``; a face and an edge are incident when their cosets meet.  In the
rotation subgroup (index two) these become the cosets of the rotations
``ab``, ``ac`` and ``bc``.  A rotation presentation has two generators
``x = ab`` and ``y = bc``, with faces ``<x>``, edges ``<xy>`` and vertices
``<y>``.  Z-checks are faces and X-checks are vertices.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .css import CssCode
from .f2 import BitMatrix

Word = tuple[int, ...]

DEFAULT_LIMIT = 200_000


class CoxeterError(ValueError):
    """Bad presentation text or failed enumeration."""


class EnumerationLimit(CoxeterError):
    """The coset table outgrew its limit."""


# words


def _inv(sym: int) -> int:
    return sym ^ 1


def invert(word: Word) -> Word:
    return tuple(_inv(s) for s in reversed(word))


class _WordParser:
    def __init__(self, text: str, gens: tuple[str, ...]):
        self.text = text.replace(" ", "")
        self.pos = 0
        self.index = {g: i for i, g in enumerate(gens)}

    def parse(self) -> Word:
        word = self._word()
        if self.pos != len(self.text):
            raise CoxeterError(f"unexpected {self.text[self.pos]!r} in {self.text!r}")
        return word

    def _word(self) -> Word:
        out: list[int] = []
        while self.pos < len(self.text) and self.text[self.pos] != ")":
            out.extend(self._factor())
        return tuple(out)

    def _factor(self) -> Word:
        ch = self.text[self.pos]
        if ch == "(":
            self.pos += 1
            atom = self._word()
            if self.pos >= len(self.text) or self.text[self.pos] != ")":
                raise CoxeterError(f"unbalanced parentheses in {self.text!r}")
            self.pos += 1
        elif ch == "1":
            self.pos += 1
            atom = ()
        elif ch.lower() in self.index:
            self.pos += 1
            g = self.index[ch.lower()]
            atom = (2 * g + (ch != ch.lower()),)
        else:
            raise CoxeterError(f"unknown generator {ch!r} in {self.text!r}")
        m = re.match(r"\^(-?\d+)", self.text[self.pos :])
        if m:
            self.pos += m.end()
            e = int(m.group(1))
            atom = atom * e if e >= 0 else invert(atom) * (-e)
        return atom


def free_reduce(word: Word) -> Word:
    out: list[int] = []
    for s in word:
        if out and out[-1] == _inv(s):
            out.pop()
        else:
            out.append(s)
    return tuple(out)


@dataclass(frozen=True)
class Presentation:
    gens: tuple[str, ...]
    rels: tuple[Word, ...]
    sub: tuple[Word, ...] = ()

    def __post_init__(self) -> None:
        for g in self.gens:
            if len(g) != 1 or not g.islower() or not g.isalpha():
                raise CoxeterError(f"generator names must be single lowercase letters, got {g!r}")
        if len(set(self.gens)) != len(self.gens):
            raise CoxeterError("duplicate generator names")

    @classmethod
    def from_strings(cls, gens: str, rels: str, sub: str = "") -> Presentation:
        g = tuple(gens.replace(",", " ").split())
        p = cls(g, ())
        return cls(g, tuple(p.words(rels)), tuple(p.words(sub)))

    @classmethod
    def parse(cls, text: str) -> Presentation:
        fields: dict[str, str] = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, rest = line.partition(":")
            key = key.strip().lower()
            if not sep or key not in ("gens", "rels", "sub"):
                raise CoxeterError(f"cannot parse line {raw!r}")
            fields[key] = (fields.get(key, "") + " " + rest).strip()
        if "gens" not in fields:
            raise CoxeterError("presentation needs a 'gens:' line")
        return cls.from_strings(fields["gens"], fields.get("rels", ""), fields.get("sub", ""))

    def word(self, text: str) -> Word:
        return _WordParser(text, self.gens).parse()

    def words(self, text: str) -> list[Word]:
        return [self.word(t) for t in text.replace(",", " ").split()]

    def format_word(self, word: Word) -> str:
        return "".join(
            self.gens[s >> 1].upper() if s & 1 else self.gens[s >> 1] for s in word
        ) or "1"

    def to_text(self) -> str:
        lines = ["gens: " + " ".join(self.gens), "rels: " + " ".join(map(self.format_word, self.rels))]
        if self.sub:
            lines.append("sub: " + " ".join(map(self.format_word, self.sub)))
        return "\n".join(lines) + "\n"

    def with_relators(self, *extra: str) -> Presentation:
        return Presentation(self.gens, self.rels + tuple(self.word(t) for t in extra), self.sub)

    @property
    def is_reflection(self) -> bool:
        """Three generators, each declared an involution by a relator ``g^2``."""
        return len(self.gens) == 3 and all((2 * g, 2 * g) in self.rels for g in range(3))


# enumeration


class _Full(Exception):
    pass


class _Enumerator:
    """HLT enumeration with union-find coincidence handling."""

    def __init__(self, ngens: int, limit: int):
        self.ncols = 2 * ngens
        self.limit = limit
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.parent = [0]
        self.alive = 1

    def find(self, c: int) -> int:
        parent = self.parent
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define(self, c: int, x: int) -> None:
        if self.alive >= self.limit:
            raise _Full
        n = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(n)
        self.alive += 1
        self.table[c][x] = n
        self.table[n][_inv(x)] = c

    def _merge(self, k: int, l: int, queue: list[int]) -> None:
        k, l = self.find(k), self.find(l)
        if k == l:
            return
        if l < k:
            k, l = l, k
        self.parent[l] = k
        self.alive -= 1
        queue.append(l)

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self._merge(a, b, queue)
        table = self.table
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(self.ncols):
                f = table[e][x]
                if f < 0:
                    continue
                xi = _inv(x)
                table[f][xi] = -1
                e1, f1 = self.find(e), self.find(f)
                if table[e1][x] >= 0:
                    self._merge(f1, table[e1][x], queue)
                elif table[f1][xi] >= 0:
                    self._merge(e1, table[f1][xi], queue)
                else:
                    table[e1][x] = f1
                    table[f1][xi] = e1

    def scan(self, c: int, w: Word, fill: bool) -> None:
        table = self.table
        f = b = c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][_inv(w[j])] >= 0:
                b = table[b][_inv(w[j])]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][_inv(w[i])] = f
                return
            if not fill:
                return
            self.define(f, w[i])

    def lookahead(self, rels: tuple[Word, ...]) -> None:
        for c in range(len(self.table)):
            for w in rels:
                if self.parent[c] != c:
                    break
                self.scan(c, w, fill=False)

    def run(self, rels: tuple[Word, ...], sub: tuple[Word, ...]) -> None:
        for w in sub:
            self._retry(lambda w=w: self.scan(0, w, fill=True), rels)
        c = 0
        while c < len(self.table):
            if self.parent[c] == c:
                self._retry(lambda c=c: self._process(c, rels), rels)
            c += 1

    def _process(self, c: int, rels: tuple[Word, ...]) -> None:
        for w in rels:
            if self.parent[c] != c:
                return
            self.scan(c, w, fill=True)
        for x in range(self.ncols):
            if self.parent[c] != c:
                return
            if self.table[c][x] < 0:
                self.define(c, x)

    def _retry(self, step, rels) -> None:
        while True:
            try:
                step()
                return
            except _Full:
                before = self.alive
                self.lookahead(rels)
                if self.alive >= before:
                    raise EnumerationLimit(
                        f"coset table exceeded {self.limit} live cosets"
                    ) from None

    def standardize(self) -> np.ndarray:
        """Renumber live cosets in breadth-first order from coset 0."""
        order = {0: 0}
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for x in range(self.ncols):
                d = self.find(self.table[c][x])
                if d not in order:
                    order[d] = len(order)
                    queue.append(d)
        out = np.empty((len(order), self.ncols), dtype=np.int64)
        for c, i in order.items():
            out[i] = [order[self.find(d)] for d in self.table[c]]
        return out


@dataclass(frozen=True)
class CosetTable:
    """Complete right-action table; column ``2g`` is generator ``g``, ``2g+1`` its inverse."""

    gens: tuple[str, ...]
    table: np.ndarray
    subgroup: tuple[Word, ...] = field(default=())

    @property
    def n(self) -> int:
        return int(self.table.shape[0])

    def perm(self, gen: int | str) -> tuple[int, ...]:
        g = self.gens.index(gen) if isinstance(gen, str) else gen
        return tuple(int(v) for v in self.table[:, 2 * g])

    def perms(self) -> list[tuple[int, ...]]:
        return [self.perm(g) for g in range(len(self.gens))]

    def act(self, coset: int, word: Word) -> int:
        for s in word:
            coset = int(self.table[coset, s])
        return coset

    def check(self, p: Presentation) -> bool:
        """Every relator fixes every coset and every subgroup word fixes coset 0."""
        cols = [self.table[:, s] for s in range(self.table.shape[1])]
        ident = np.arange(self.n)
        for w in p.rels:
            img = ident
            for s in w:
                img = cols[s][img]
            if not np.array_equal(img, ident):
                return False
        return all(self.act(0, w) == 0 for w in self.subgroup)


def enumerate_cosets(
    p: Presentation, subgroup: list[Word] | tuple[Word, ...] | None = None, limit: int = DEFAULT_LIMIT
) -> CosetTable:
    """Coset table of the subgroup generated by ``subgroup`` (default ``p.sub``)."""
    sub = tuple(p.sub if subgroup is None else subgroup)
    rels = tuple(free_reduce(w) for w in p.rels)
    rels = tuple(w for w in rels if w)
    en = _Enumerator(len(p.gens), limit)
    en.run(rels, sub)
    return CosetTable(p.gens, en.standardize(), sub)


# group order and parity


def group_order(p: Presentation, limit: int = DEFAULT_LIMIT) -> int:
    return enumerate_cosets(p, [], limit).n


# surfaces


@dataclass(frozen=True)
class SurfaceComplex:
    """Cells of a tiled surface and their incidences."""

    group_order: int
    faces: CosetTable
    edges: CosetTable
    vertices: CosetTable
    face_edge: BitMatrix
    vertex_edge: BitMatrix


def _cell_subgroups(p: Presentation) -> tuple[list[Word], list[Word], list[Word]]:
    if p.is_reflection:
        a, b, c = (0,), (2,), (4,)
        return [a, b], [a, c], [b, c]
    if len(p.gens) == 2:
        x, y = (0,), (2,)
        return [x], [x + y], [y]
    raise CoxeterError("expected a reflection presentation (a, b, c) or a rotation one (x, y)")


def surface_complex(p: Presentation, limit: int = DEFAULT_LIMIT) -> SurfaceComplex:
    fsub, esub, vsub = _cell_subgroups(p)
    regular = enumerate_cosets(p, [], limit)
    faces = enumerate_cosets(p, fsub, limit)
    edges = enumerate_cosets(p, esub, limit)
    verts = enumerate_cosets(p, vsub, limit)
    if p.is_reflection and any(len(free_reduce(w)) % 2 for w in p.rels):
        raise CoxeterError("a relator has odd length, so the surface is not orientable")
    # walk the regular table, tracking parity and the cell containing each element
    n = regular.n
    parity = np.full(n, -1, dtype=np.int64)
    cell = np.zeros((3, n), dtype=np.int64)
    parity[0] = 0
    queue = deque([0])
    tabs = (faces.table, edges.table, verts.table)
    while queue:
        g = queue.popleft()
        for s in range(regular.table.shape[1]):
            h = int(regular.table[g, s])
            if parity[h] < 0:
                parity[h] = parity[g] ^ (1 if p.is_reflection else 0)
                for t in range(3):
                    cell[t, h] = tabs[t][cell[t, g], s]
                queue.append(h)
    even = parity == 0
    fe = np.zeros((faces.n, edges.n), dtype=np.int64)
    ve = np.zeros((verts.n, edges.n), dtype=np.int64)
    np.add.at(fe, (cell[0, even], cell[1, even]), 1)
    np.add.at(ve, (cell[2, even], cell[1, even]), 1)
    return SurfaceComplex(
        n, faces, edges, verts, BitMatrix.from_dense(fe & 1), BitMatrix.from_dense(ve & 1)
    )


def hyperbolic_code(p: Presentation, label: str = "", limit: int = DEFAULT_LIMIT) -> CssCode:
    """Surface code of the tiling: qubits on edges, Z-checks on faces, X-checks on vertices.

    Qubit ``i`` is coset ``i`` of the edge subgroup's standardized table.
    """
    sc = surface_complex(p, limit)
    return CssCode(sc.edges.n, sc.vertex_edge, sc.face_edge, label)


def symmetry_action(p: Presentation, table: CosetTable | None = None) -> list[tuple[int, ...]]:
    """Permutations of the qubits (edge cosets) induced by each generator."""
    if table is None:
        table = enumerate_cosets(p, _cell_subgroups(p)[1])
    return table.perms()


# known presentations

BRING = Presentation.from_strings("a b c", "a^2 b^2 c^2 (ab)^5 (ac)^2 (bc)^5 (abcb)^3")
BRING_ROTATION = Presentation.from_strings("x y", "x^5 y^5 (xy)^2 (xY)^3")


def reflection_55(*extra: str) -> Presentation:
    """The {5,5} reflection group with extra relators."""
    base = Presentation.from_strings("a b c", "a^2 b^2 c^2 (ab)^5 (ac)^2 (bc)^5")
    return base.with_relators(*extra)


__all__ = [
    "BRING",
    "BRING_ROTATION",
    "CosetTable",
    "CoxeterError",
    "EnumerationLimit",
    "Presentation",
    "SurfaceComplex",
    "enumerate_cosets",
    "free_reduce",
    "group_order",
    "hyperbolic_code",
    "invert",
    "reflection_55",
    "surface_complex",
    "symmetry_action",
]
