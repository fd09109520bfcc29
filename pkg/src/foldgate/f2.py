"""Bit-packed linear algebra over F2.

Rows are packed little-endian into ``uint64`` words; bit ``j`` of a row is
bit ``j % 64`` of word ``j // 64``.  Pad bits past ``cols`` are always zero.
All values are immutable.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from . import kernels

_U64 = np.uint64


class F2Error(ValueError):
    """Raised when an F2 operation's precondition does not hold."""


def _nwords(cols: int) -> int:
    return (cols + 63) >> 6


def _pack_dense(dense: np.ndarray) -> np.ndarray:
    dense = np.asarray(dense, dtype=np.uint8) & 1
    rows, cols = dense.shape
    nw = _nwords(cols)
    padded = np.zeros((rows, nw * 64), dtype=np.uint8)
    padded[:, :cols] = dense
    bits = np.packbits(padded.reshape(rows, nw, 64), axis=2, bitorder="little")
    return bits.reshape(rows, nw * 8).view("<u8").astype(_U64).reshape(rows, nw)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=_U64)
    a.setflags(write=False)
    return a


def int_to_words(value: int, cols: int) -> np.ndarray:
    nw = _nwords(cols)
    return np.frombuffer(value.to_bytes(8 * nw, "little"), dtype="<u8").astype(_U64)


def words_to_int(words: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(words, dtype="<u8").tobytes(), "little")


@dataclass(frozen=True, eq=False)
class BitVector:
    length: int
    words: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "words", _freeze(self.words))

    @classmethod
    def from_int(cls, value: int, length: int) -> BitVector:
        if value >> length:
            raise F2Error("value has bits beyond length")
        return cls(length, int_to_words(value, length))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitVector:
        bits = list(bits)
        return cls.from_int(sum(1 << i for i, b in enumerate(bits) if b & 1), len(bits))

    @classmethod
    def from_support(cls, support: Iterable[int], length: int) -> BitVector:
        value = 0
        for i in support:
            value |= 1 << i
        return cls.from_int(value, length)

    def to_int(self) -> int:
        return words_to_int(self.words)

    def support(self) -> list[int]:
        v = self.to_int()
        return [i for i in range(self.length) if (v >> i) & 1]

    def to_bits(self) -> list[int]:
        v = self.to_int()
        return [(v >> i) & 1 for i in range(self.length)]

    @property
    def weight(self) -> int:
        return self.to_int().bit_count()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        return hash((self.length, self.to_int()))

    def __repr__(self) -> str:
        return "BitVector(" + "".join(map(str, self.to_bits())) + ")"


@dataclass(frozen=True, eq=False)
class BitMatrix:
    """Dense matrix over F2, one packed bit row per matrix row."""

    words: np.ndarray
    cols: int

    def __post_init__(self) -> None:
        w = np.asarray(self.words, dtype=_U64)
        if w.ndim != 2 or w.shape[1] != _nwords(self.cols):
            raise F2Error(f"word array shape {w.shape} does not fit {self.cols} columns")
        object.__setattr__(self, "words", _freeze(w))

    # construction

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(np.zeros((rows, _nwords(cols)), dtype=_U64), cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_dense(cls, dense) -> BitMatrix:
        dense = np.asarray(dense, dtype=np.uint8)
        if dense.ndim != 2:
            raise F2Error("dense matrix must be 2-d")
        return cls(_pack_dense(dense), dense.shape[1])

    @classmethod
    def from_supports(cls, supports: Iterable[Iterable[int]], cols: int) -> BitMatrix:
        rows = []
        for sup in supports:
            value = 0
            for j in sup:
                if not 0 <= j < cols:
                    raise F2Error(f"column index {j} out of range for {cols} columns")
                value ^= 1 << j
            rows.append(value)
        return cls.from_ints(rows, cols)

    @classmethod
    def from_ints(cls, rows: Sequence[int], cols: int) -> BitMatrix:
        nw = _nwords(cols)
        out = np.zeros((len(rows), nw), dtype=_U64)
        for i, value in enumerate(rows):
            if value >> cols:
                raise F2Error("row has bits beyond the column count")
            if value:
                out[i] = int_to_words(value, cols)
        return cls(out, cols)

    @classmethod
    def from_vectors(cls, vectors: Sequence[BitVector], cols: int | None = None) -> BitMatrix:
        if cols is None:
            if not vectors:
                raise F2Error("column count needed for an empty vector list")
            cols = vectors[0].length
        return cls.from_ints([v.to_int() for v in vectors], cols)

    # views

    @property
    def rows(self) -> int:
        return self.words.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_dense(self) -> np.ndarray:
        if self.rows == 0 or self.cols == 0:
            return np.zeros((self.rows, self.cols), dtype=np.uint8)
        b = self.words.astype("<u8").view(np.uint8).reshape(self.rows, -1)
        return np.unpackbits(b, axis=1, bitorder="little")[:, : self.cols].copy()

    def row_ints(self) -> list[int]:
        return [words_to_int(self.words[i]) for i in range(self.rows)]

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.words[i])

    def supports(self) -> list[list[int]]:
        d = self.to_dense()
        return [np.flatnonzero(r).tolist() for r in d]

    def __getitem__(self, key):
        i, j = key
        return int((self.words[i, j >> 6] >> _U64(j & 63)) & _U64(1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.cols == other.cols and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        return hash((self.shape, self.words.tobytes()))

    def __repr__(self) -> str:
        body = "\n".join("".join(map(str, r)) for r in self.to_dense())
        return f"BitMatrix({self.rows}x{self.cols})" + ("\n" + body if body else "")

    # algebra

    @property
    def T(self) -> BitMatrix:
        return BitMatrix.from_dense(self.to_dense().T)

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if self.shape != other.shape:
            raise F2Error(f"shape mismatch {self.shape} vs {other.shape}")
        return BitMatrix(self.words ^ other.words, self.cols)

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.rows:
            raise F2Error(f"cannot multiply {self.shape} by {other.shape}")
        a = self.to_dense().astype(np.int64)
        b = other.to_dense().astype(np.int64)
        return BitMatrix.from_dense((a @ b) & 1)

    def mul_vec(self, v: BitVector) -> BitVector:
        """``self . v^T`` as a vector of length ``rows``."""
        if v.length != self.cols:
            raise F2Error("vector length does not match column count")
        x = v.to_int()
        return BitVector.from_bits((r & x).bit_count() & 1 for r in self.row_ints())

    def is_zero(self) -> bool:
        return not self.words.any()

    def select_rows(self, idx: Sequence[int]) -> BitMatrix:
        return BitMatrix(self.words[list(idx)].reshape(len(idx), -1), self.cols)

    def permute_cols(self, perm: Sequence[int]) -> BitMatrix:
        """Column ``j`` moves to column ``perm[j]``."""
        d = self.to_dense()
        out = np.zeros_like(d)
        out[:, list(perm)] = d
        return BitMatrix.from_dense(out)


def hstack(mats: Sequence[BitMatrix]) -> BitMatrix:
    rows = {m.rows for m in mats}
    if len(rows) != 1:
        raise F2Error("hstack needs equal row counts")
    return BitMatrix.from_dense(np.hstack([m.to_dense() for m in mats]))


def vstack(mats: Sequence[BitMatrix]) -> BitMatrix:
    cols = {m.cols for m in mats}
    if len(cols) != 1:
        raise F2Error("vstack needs equal column counts")
    return BitMatrix(np.vstack([m.words for m in mats]), mats[0].cols)


def block_diag(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    out = np.zeros((a.rows + b.rows, a.cols + b.cols), dtype=np.uint8)
    out[: a.rows, : a.cols] = a.to_dense()
    out[a.rows :, a.cols :] = b.to_dense()
    return BitMatrix.from_dense(out)


def kron(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    return BitMatrix.from_dense(np.kron(a.to_dense(), b.to_dense()))


# elimination


def rref(m: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row echelon form and pivot columns (deterministic pivoting)."""
    if m.rows == 0 or m.cols == 0:
        return m, []
    out, piv = kernels.rref(m.words, m.cols)
    return BitMatrix(out, m.cols), [int(p) for p in piv]


def rank(m: BitMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: BitMatrix) -> BitMatrix:
    """Basis of ``{v : m . v^T = 0}``, one row per free column."""
    red, piv = rref(m)
    rows = red.row_ints()[: len(piv)]
    pivset = set(piv)
    basis = []
    for f in range(m.cols):
        if f in pivset:
            continue
        v = 1 << f
        for r, p in zip(rows, piv):
            if (r >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return BitMatrix.from_ints(basis, m.cols)


def solve(m: BitMatrix, b: BitVector) -> BitVector | None:
    """Some ``x`` with ``m . x^T = b^T``, or ``None`` if inconsistent."""
    if b.length != m.rows:
        raise F2Error(f"right-hand side has length {b.length}, expected {m.rows}")
    bits = b.to_int()
    aug = BitMatrix.from_ints(
        [r | (((bits >> i) & 1) << m.cols) for i, r in enumerate(m.row_ints())], m.cols + 1
    )
    red, piv = rref(aug)
    if piv and piv[-1] == m.cols:
        return None
    x = 0
    for r, p in zip(red.row_ints(), piv):
        if (r >> m.cols) & 1:
            x |= 1 << p
    return BitVector.from_int(x, m.cols)


class _Reducer:
    """Incremental echelon basis keyed by pivot (lowest set bit)."""

    def __init__(self) -> None:
        self.pivots: dict[int, int] = {}

    def reduce(self, v: int) -> int:
        while v:
            low = v & -v
            r = self.pivots.get(low)
            if r is None:
                return v
            v ^= r
        return 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        self.pivots[v & -v] = v
        return True


def in_row_space(m: BitMatrix, v: BitVector) -> bool:
    red = _Reducer()
    for r in m.row_ints():
        red.add(r)
    return red.reduce(v.to_int()) == 0


def rows_in_span(m: BitMatrix, vectors: BitMatrix) -> bool:
    """Whether every row of ``vectors`` lies in the row space of ``m``."""
    red = _Reducer()
    for r in m.row_ints():
        red.add(r)
    return all(red.reduce(v) == 0 for v in vectors.row_ints())


def quotient_basis(z: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Rows of ``z`` that complete a basis of ``row(b)`` to ``row(z)``.

    Rows of ``z`` are taken greedily in order, so every returned row is an
    actual row of ``z``.
    """
    if z.cols != b.cols:
        raise F2Error("column counts differ")
    zred = _Reducer()
    for r in z.row_ints():
        zred.add(r)
    red = _Reducer()
    for r in b.row_ints():
        if zred.reduce(r):
            raise F2Error("row space of b is not contained in row space of z")
        red.add(r)
    keep = [r for r in z.row_ints() if red.add(r)]
    return BitMatrix.from_ints(keep, z.cols)


def inverse(m: BitMatrix) -> BitMatrix:
    n = m.rows
    if m.cols != n:
        raise F2Error("only square matrices have inverses")
    aug = hstack([m, BitMatrix.identity(n)])
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise F2Error("matrix is singular")
    d = red.to_dense()
    return BitMatrix.from_dense(d[:, n:])


def coordinates(basis: BitMatrix, vectors: BitMatrix) -> BitMatrix:
    """Coefficients ``c`` with ``c . basis = vectors`` (basis rows independent)."""
    sol = solve_rows(basis, vectors)
    if sol is None:
        raise F2Error("vectors are not in the row space of the basis")
    return sol


def solve_rows(basis: BitMatrix, vectors: BitMatrix) -> BitMatrix | None:
    """Solve ``X . basis = vectors`` for ``X``; ``None`` if any row fails."""
    k = basis.rows
    out = []
    bt = basis.T
    for i in range(vectors.rows):
        x = solve(bt, vectors.row(i))
        if x is None:
            return None
        out.append(x.to_int())
    return BitMatrix.from_ints(out, k)
