"""CSS codes as three-term chain complexes over F2.

A code is a pair of check matrices ``hx`` (X-checks) and ``hz`` (Z-checks)
on ``n`` qubits with ``hx . hz^T = 0``.  Logical Z operators are cycles
(``ker hx``) modulo boundaries (``row hz``); logical X operators are
cocycles (``ker hz``) modulo coboundaries (``row hx``).
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from . import kernels
from .f2 import (
    BitMatrix,
    F2Error,
    block_diag,
    inverse,
    kernel_basis,
    quotient_basis,
    rank,
)

# weights above this use the meet-in-the-middle search
MITM_THRESHOLD = 6


class CssError(ValueError):
    """Raised for invalid codes or bases."""


@dataclass(frozen=True)
class CssCode:
    n: int
    hx: BitMatrix
    hz: BitMatrix
    label: str = ""

    def __post_init__(self) -> None:
        if self.hx.cols != self.n or self.hz.cols != self.n:
            raise CssError(
                f"check matrices have {self.hx.cols} and {self.hz.cols} columns, expected {self.n}"
            )

    @classmethod
    def from_supports(cls, n: int, hx: Iterable, hz: Iterable, label: str = "") -> CssCode:
        return cls(n, BitMatrix.from_supports(hx, n), BitMatrix.from_supports(hz, n), label)

    @property
    def rx(self) -> int:
        return self.hx.rows

    @property
    def rz(self) -> int:
        return self.hz.rows

    @property
    def k(self) -> int:
        return self.n - rank(self.hx) - rank(self.hz)

    def is_valid(self) -> bool:
        return not validate(self)


@dataclass(frozen=True)
class LogicalBasis:
    """Ordered logical operators: ``zbasis`` (homology) and ``xbasis`` (cohomology)."""

    zbasis: BitMatrix
    xbasis: BitMatrix

    @property
    def k(self) -> int:
        return self.zbasis.rows

    def stacked(self) -> BitMatrix:
        return block_diag(self.zbasis, self.xbasis)


def validate(code: CssCode) -> list[tuple[int, int]]:
    """Pairs ``(x_check, z_check)`` with odd overlap; empty means valid."""
    prod = (code.hx @ code.hz.T).to_dense()
    return [(int(i), int(j)) for i, j in zip(*np.nonzero(prod))]


def _require_valid(code: CssCode) -> None:
    bad = validate(code)
    if bad:
        raise CssError(f"hx . hz^T != 0, first odd overlap at {bad[0]}")


def logical_bases(code: CssCode) -> LogicalBasis:
    _require_valid(code)
    zb = quotient_basis(kernel_basis(code.hx), code.hz)
    xb = quotient_basis(kernel_basis(code.hz), code.hx)
    return LogicalBasis(zb, xb)


def check_basis(code: CssCode, basis: LogicalBasis) -> None:
    """Raise ``CssError`` unless ``basis`` is a valid logical basis of ``code``."""
    k = code.k
    if basis.zbasis.rows != k or basis.xbasis.rows != k:
        raise CssError(f"basis has {basis.zbasis.rows}/{basis.xbasis.rows} rows, expected {k}")
    if basis.zbasis.cols != code.n or basis.xbasis.cols != code.n:
        raise CssError("basis width differs from n")
    if not (code.hx @ basis.zbasis.T).is_zero():
        raise CssError("a zbasis row is not a cycle")
    if not (code.hz @ basis.xbasis.T).is_zero():
        raise CssError("an xbasis row is not a cocycle")
    try:
        phi = gram(basis)
        inverse(phi)
    except F2Error:
        raise CssError("basis rows are dependent modulo stabilizers") from None


def gram(basis: LogicalBasis) -> BitMatrix:
    """``phi[i][j]`` = overlap parity of ``xbasis[i]`` and ``zbasis[j]``."""
    return basis.xbasis @ basis.zbasis.T


def symplectify(basis: LogicalBasis) -> LogicalBasis:
    """Keep ``zbasis``, replace ``xbasis`` by ``phi^-1 . xbasis`` so the Gram matrix is I."""
    phi = gram(basis)
    try:
        phinv = inverse(phi)
    except F2Error:
        raise CssError("Gram matrix is singular; rows are not a logical basis") from None
    return LogicalBasis(basis.zbasis, phinv @ basis.xbasis)


def change_of_basis(old: LogicalBasis, new: LogicalBasis) -> tuple[BitMatrix, BitMatrix]:
    """Matrices ``(Tz, Tx)`` with ``new.z = Tz . old.z`` and ``new.x = Tx . old.x``
    modulo stabilizers.  Both bases must belong to the same code."""
    tz = _coords_mod(old.zbasis, old.xbasis, new.zbasis)
    tx = _coords_mod(old.xbasis, old.zbasis, new.xbasis)
    return tz, tx


def _coords_mod(own: BitMatrix, dual: BitMatrix, vecs: BitMatrix) -> BitMatrix:
    # coordinates through the pairing: c . own . dual^T = vecs . dual^T
    phi = own @ dual.T
    return vecs @ dual.T @ inverse(phi)


def logical_coordinates(basis: LogicalBasis, z_part: BitMatrix, x_part: BitMatrix) -> BitMatrix:
    """Coordinates of Pauli rows ``(z | x)`` on the logical basis ``(zbasis | xbasis)``.

    Rows must commute with all stabilizers; stabilizer components drop out.
    """
    phi = gram(basis)
    phinv = inverse(phi)
    alpha = z_part @ basis.xbasis.T @ phinv.T
    beta = x_part @ basis.zbasis.T @ phinv
    return BitMatrix.from_dense(np.hstack([alpha.to_dense(), beta.to_dense()]))


# distance


def _columns(m: BitMatrix) -> np.ndarray:
    """Packed columns of ``m`` as an ``(cols, words)`` array."""
    rows = max(m.rows, 1)
    dense = np.zeros((m.cols, rows), dtype=np.uint8)
    if m.rows:
        dense[:, : m.rows] = m.to_dense().T
    return BitMatrix.from_dense(dense).words


def min_logical(code: CssCode, w_max: int, sector: str = "z") -> tuple[int, ...] | None:
    """Support of a lightest logical operator of one sector with weight <= ``w_max``.

    ``sector="z"`` searches cycles that are not boundaries; ``"x"`` the dual.
    """
    basis = logical_bases(code)
    if basis.k == 0:
        return None
    if sector == "z":
        checks, dual = code.hx, basis.xbasis
    elif sector == "x":
        checks, dual = code.hz, basis.zbasis
    else:
        raise ValueError(f"unknown sector {sector!r}")
    syn, log = _columns(checks), _columns(dual)
    w_max = min(w_max, code.n)
    head = min(w_max, MITM_THRESHOLD)
    found = kernels.min_weight(syn, log, head)
    if found is not None:
        return tuple(found[1])
    for w in range(head + 1, w_max + 1):
        sup = _mitm(syn, log, w)
        if sup is not None:
            return sup
    return None


def _mitm(syn: np.ndarray, log: np.ndarray, w: int) -> tuple[int, ...] | None:
    # Assumes nothing lighter exists, so halves with the same syndrome are
    # disjoint whenever their logical parts differ.
    n = syn.shape[0]
    s = [int.from_bytes(syn[i].tobytes(), "little") for i in range(n)]
    lg = [int.from_bytes(log[i].tobytes(), "little") for i in range(n)]
    lo = w // 2
    table: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
    for sub in combinations(range(n), lo):
        ss = ll = 0
        for i in sub:
            ss ^= s[i]
            ll ^= lg[i]
        table.setdefault(ss, []).append((ll, sub))
    best = None
    for sub in combinations(range(n), w - lo):
        ss = ll = 0
        for i in sub:
            ss ^= s[i]
            ll ^= lg[i]
        for other_l, other in table.get(ss, ()):
            if other_l != ll and not set(sub) & set(other):
                cand = tuple(sorted(sub + other))
                if best is None or cand < best:
                    best = cand
    return best


def distance(code: CssCode, w_max: int) -> int | None:
    """Minimum logical weight over both sectors, or ``None`` if above ``w_max``."""
    best = None
    for sector in ("z", "x"):
        sup = min_logical(code, w_max if best is None else best - 1, sector)
        if sup is not None:
            best = len(sup)
    return best


# composition


def brute_force_distance(code: CssCode, w_max: int) -> int | None:
    """Distance by trying every qubit subset of weight ``<= w_max`` (oracle for small ``n``)."""
    from itertools import combinations

    from .f2 import _Reducer

    _require_valid(code)
    if code.k == 0:
        return None
    sectors = []
    for check, stab in ((code.hx, code.hz), (code.hz, code.hx)):
        cols = [0] * code.n
        for r, sup in enumerate(check.supports()):
            for q in sup:
                cols[q] |= 1 << r
        red = _Reducer()
        for row in stab.row_ints():
            red.add(row)
        sectors.append((cols, red))
    for w in range(1, min(w_max, code.n) + 1):
        for sub in combinations(range(code.n), w):
            vec = sum(1 << q for q in sub)
            for cols, red in sectors:
                syn = 0
                for q in sub:
                    syn ^= cols[q]
                if not syn and red.reduce(vec):
                    return w
    return None


def direct_sum(a: CssCode, b: CssCode) -> CssCode:
    label = f"{a.label}+{b.label}" if a.label or b.label else ""
    return CssCode(a.n + b.n, block_diag(a.hx, b.hx), block_diag(a.hz, b.hz), label)


# JSON


def _sparse(m: BitMatrix) -> list[list[int]]:
    return m.supports()


def code_to_dict(code: CssCode, basis: LogicalBasis | None = None) -> dict:
    out: dict = {"n": code.n, "hx": _sparse(code.hx), "hz": _sparse(code.hz)}
    if code.label:
        out["label"] = code.label
    if basis is not None:
        out["zbasis"] = _sparse(basis.zbasis)
        out["xbasis"] = _sparse(basis.xbasis)
    return out


def _rows_from(obj, key: str, n: int) -> BitMatrix:
    rows = obj.get(key, [])
    if not isinstance(rows, list):
        raise CssError(f"{key} must be a list of index lists")
    for r in rows:
        if not isinstance(r, list) or any(not isinstance(i, int) for i in r):
            raise CssError(f"{key} rows must be lists of integers")
        if any(i < 0 or i >= n for i in r):
            raise CssError(f"{key} index out of range 0..{n - 1}")
        if any(x >= y for x, y in zip(r, r[1:])):
            raise CssError(f"{key} rows must be strictly increasing")
    return BitMatrix.from_supports(rows, n)


def code_from_dict(obj: dict) -> tuple[CssCode, LogicalBasis | None]:
    if not isinstance(obj, dict) or not isinstance(obj.get("n"), int):
        raise CssError("code JSON needs an integer field 'n'")
    n = obj["n"]
    code = CssCode(n, _rows_from(obj, "hx", n), _rows_from(obj, "hz", n), obj.get("label", ""))
    basis = None
    if "zbasis" in obj or "xbasis" in obj:
        basis = LogicalBasis(_rows_from(obj, "zbasis", n), _rows_from(obj, "xbasis", n))
    return code, basis


def save_code(path: str | Path, code: CssCode, basis: LogicalBasis | None = None) -> None:
    Path(path).write_text(json.dumps(code_to_dict(code, basis)) + "\n", encoding="utf-8")


def load_code(path: str | Path) -> tuple[CssCode, LogicalBasis | None]:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CssError(f"{path}: {exc}") from None
    return code_from_dict(obj)


__all__ = [
    "brute_force_distance",
    "CssCode",
    "CssError",
    "LogicalBasis",
    "validate",
    "logical_bases",
    "check_basis",
    "gram",
    "symplectify",
    "change_of_basis",
    "logical_coordinates",
    "min_logical",
    "distance",
    "direct_sum",
    "code_to_dict",
    "code_from_dict",
    "save_code",
    "load_code",
]
