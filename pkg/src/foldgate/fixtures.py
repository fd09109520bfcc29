"""Reference data shipped with the package: Bring's code, a hypergraph
product seed, a weakly self-dual block code and three presentations.

Matrices are stored as lists of bit strings, supports as 0-based lists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .constructors import ClassicalCode
from .coxeter import Presentation
from .css import CssCode, LogicalBasis
from .f2 import BitMatrix


def _read(name: str) -> str:
    return resources.files("foldgate").joinpath("data", name).read_text(encoding="utf-8")


def _json(name: str) -> dict:
    return json.loads(_read(name))


def bits(rows) -> BitMatrix:
    return BitMatrix.from_dense([[int(c) for c in r] for r in rows])


def presentation(name: str) -> Presentation:
    """``bring``, ``bring_rotation`` or ``quotient_40``."""
    return Presentation.parse(_read(f"{name}.pres"))


def _orbit_of_set(seed, perms) -> list[list[int]]:
    seen = {frozenset(seed)}
    todo = [frozenset(seed)]
    while todo:
        s = todo.pop()
        for p in perms:
            t = frozenset(p[i] for i in s)
            if t not in seen:
                seen.add(t)
                todo.append(t)
    return sorted(sorted(s) for s in seen)


@dataclass(frozen=True)
class BringData:
    code: CssCode
    basis: LogicalBasis
    primed: LogicalBasis
    perms: dict[str, tuple[int, ...]]
    raw: dict

    def matrix(self, *path: str) -> BitMatrix:
        obj = self.raw
        for p in path:
            obj = obj[p]
        return bits(obj)


def _combine(base: BitMatrix, rules) -> BitMatrix:
    rows = base.row_ints()
    out = []
    for rule in rules:
        v = 0
        for i in rule:
            v ^= rows[i]
        out.append(v)
    return BitMatrix.from_ints(out, base.cols)


@lru_cache(maxsize=1)
def bring() -> BringData:
    """Bring's code labelled by its edge permutations, with both logical bases.

    Faces and vertices are the orbits of one face and one vertex under the
    three edge permutations.
    """
    raw = _json("bring.json")
    n = raw["n"]
    perms = {k: tuple(v) for k, v in raw["edge_permutations"].items()}
    gens = list(perms.values())
    faces = _orbit_of_set(raw["faces_seed"], gens)
    verts = _orbit_of_set(raw["vertices_seed"], gens)
    code = CssCode.from_supports(n, verts, faces, "bring")
    basis = LogicalBasis(
        BitMatrix.from_supports(raw["zbasis"], n), BitMatrix.from_supports(raw["xbasis"], n)
    )
    primed = LogicalBasis(
        _combine(basis.zbasis, raw["primed_zbasis_rows"]),
        _combine(basis.xbasis, raw["primed_xbasis_rows"]),
    )
    return BringData(code, basis, primed, perms, raw)


def hgp_seed() -> ClassicalCode:
    """The [6,2,4] seed; stored with one row per bit, one column per check."""
    m = bits(_json("hgp_seed.json")["bits_by_checks"])
    return ClassicalCode(m.rows, m.T)


def block_code() -> tuple[CssCode, LogicalBasis]:
    """[[16,4,4]] weakly self-dual code (``hx = hz``) and its logical basis."""
    raw = _json("block_code.json")
    h = bits(raw["generator_rows"]).T
    logical = bits(raw["logical_rows"])
    return CssCode(raw["n"], h, h, "block"), LogicalBasis(logical, logical)


__all__ = ["BringData", "bits", "block_code", "bring", "hgp_seed", "presentation"]
