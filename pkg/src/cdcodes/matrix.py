"""Dense matrices over GF(q): RREF, rank, and the text block format."""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .field import Field, field_of_order


class Matrix:
    """Immutable rows x cols matrix over a :class:`Field`.

    ``entries`` is a read-only int64 numpy array.  Equality and hashing use
    the field order, the shape and the raw entries.
    """

    __slots__ = ("field", "entries", "_key")

    def __init__(self, entries, field: Field):
        arr = np.array(entries, dtype=np.int64, copy=True)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ValueError(f"matrix entries must be 2-dimensional, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError(f"entries must be field elements in [0, {field.q})")
        arr.flags.writeable = False
        self.field = field
        self.entries = arr
        self._key = None

    @classmethod
    def _trusted(cls, arr: np.ndarray, field: Field) -> "Matrix":
        m = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.int64)
        arr.flags.writeable = False
        m.field = field
        m.entries = arr
        m._key = None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field) -> "Matrix":
        return cls._trusted(np.zeros((rows, cols), dtype=np.int64), field)

    @classmethod
    def identity(cls, n: int, field: Field) -> "Matrix":
        return cls._trusted(np.eye(n, dtype=np.int64), field)

    @classmethod
    def from_bits(cls, rows: Sequence[str], field: Field) -> "Matrix":
        """Matrix from digit strings like ``["110", "011"]`` (q <= 10)."""
        return cls([[int(c) for c in r] for r in rows], field)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def key(self) -> bytes:
        if self._key is None:
            self._key = self.field.q.to_bytes(2, "little") + bytes(
                np.array(self.shape, dtype=np.int64).tobytes()
            ) + self.entries.astype(np.uint16).tobytes()
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __getitem__(self, idx):
        return self.entries[idx]

    def __add__(self, other: "Matrix") -> "Matrix":
        _check_same(self, other)
        return Matrix._trusted(self.field.add_table[self.entries, other.entries], self.field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        _check_same(self, other)
        return Matrix._trusted(self.field.sub_table[self.entries, other.entries], self.field)

    def scale(self, c: int) -> "Matrix":
        return Matrix._trusted(self.field.mul_table[c, self.entries], self.field)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return Matrix._trusted(self.field.matmul(self.entries, other.entries), self.field)

    @property
    def T(self) -> "Matrix":
        return Matrix._trusted(self.entries.T, self.field)

    def hstack(self, other: "Matrix") -> "Matrix":
        return Matrix._trusted(np.hstack([self.entries, other.entries]), self.field)

    def vstack(self, other: "Matrix") -> "Matrix":
        return Matrix._trusted(np.vstack([self.entries, other.entries]), self.field)

    def is_zero(self) -> bool:
        return not self.entries.any()

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.entries)
        return f"Matrix(q={self.field.q}, {self.rows}x{self.cols}, [{body}])"


def _check_same(a: Matrix, b: Matrix) -> None:
    if a.field is not b.field or a.shape != b.shape:
        raise ValueError("matrices must share field and shape")


class RREF(NamedTuple):
    R: Matrix
    rank: int
    pivots: tuple[int, ...]  # 0-based column indices


def rref_array(a: np.ndarray, field: Field) -> tuple[np.ndarray, list[int]]:
    """Row-reduce a copy of ``a``; returns the reduced array and pivot columns."""
    a = np.array(a, dtype=np.int64, copy=True)
    rows, cols = a.shape
    mul, sub, inv = field.mul_table, field.sub_table, field.inv_table
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        pv = a[r, c]
        if pv != 1:
            a[r] = mul[inv[pv], a[r]]
        col = a[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            a[others] = sub[a[others], mul[col[others, None], a[r][None, :]]]
        pivots.append(c)
        r += 1
    return a, pivots


def rref(M: Matrix) -> RREF:
    """Reduced row echelon form of ``M``.

    Zero rows are kept at the bottom, so ``R`` has the same shape as ``M``.
    """
    a, pivots = rref_array(M.entries, M.field)
    return RREF(Matrix._trusted(a, M.field), len(pivots), tuple(pivots))


def rank(M: Matrix) -> int:
    return rref(M).rank


def batch_rank(a: np.ndarray, field: Field) -> np.ndarray:
    """Ranks of a stack of matrices, shape ``(B, rows, cols)`` -> ``(B,)``.

    Each row in turn is used as a pivot row on its first nonzero column and
    eliminated from the rows below it.  Nonzero rows left at the end are
    independent, so their count is the rank.
    """
    a = np.array(a, dtype=np.int64, copy=True)
    if a.ndim != 3:
        raise ValueError("expected a (B, rows, cols) array")
    B, R, C = a.shape
    if B == 0 or R == 0 or C == 0:
        return np.zeros(B, dtype=np.int64)
    mul, sub, inv = field.mul_table, field.sub_table, field.inv_table
    idx = np.arange(B)
    for r in range(R - 1):
        row = a[:, r, :]
        col = (row != 0).argmax(axis=1)
        pv = row[idx, col]
        below = a[:, r + 1 :, :]
        ent = below[idx, :, col]  # (B, R-r-1)
        if field.q == 2:
            # pv == 0 rows are all-zero, so ent & pv masks them out
            f = ent & pv[:, None]
            a[:, r + 1 :, :] = below ^ (f[:, :, None] & row[:, None, :])
        else:
            f = mul[ent, inv[pv][:, None]]
            a[:, r + 1 :, :] = sub[below, mul[f[:, :, None], row[:, None, :]]]
    return (a != 0).any(axis=2).sum(axis=1)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def format_matrix(M: Matrix) -> str:
    lines = [f"q={M.field.q} rows={M.rows} cols={M.cols}"]
    lines += [" ".join(str(int(x)) for x in row) for row in M.entries]
    return "\n".join(lines)


def parse_header(line: str) -> dict[str, str]:
    out = {}
    for tok in line.split():
        if "=" not in tok:
            raise ValueError(f"malformed header token {tok!r} in {line!r}")
        k, v = tok.split("=", 1)
        out[k] = v
    return out


def parse_matrix(lines: Sequence[str], field: Field | None = None) -> Matrix:
    """Parse one matrix block (header line plus ``rows`` entry lines)."""
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise ValueError("empty matrix block")
    hdr = parse_header(lines[0])
    try:
        q, rows, cols = int(hdr["q"]), int(hdr["rows"]), int(hdr["cols"])
    except KeyError as exc:
        raise ValueError(f"matrix header missing {exc}") from None
    if field is None:
        field = field_of_order(q)
    elif field.q != q:
        raise ValueError(f"matrix block has q={q}, expected {field.q}")
    body = lines[1:]
    if len(body) != rows:
        raise ValueError(f"expected {rows} rows, found {len(body)}")
    entries = [[int(x) for x in ln.split()] for ln in body]
    if any(len(r) != cols for r in entries):
        raise ValueError(f"expected {cols} entries per row")
    return Matrix(np.array(entries, dtype=np.int64).reshape(rows, cols), field)


def split_blocks(text: str) -> list[list[str]]:
    """Split text into blank-line separated blocks, dropping ``#`` comments
    but keeping them attached as the block's leading lines."""
    blocks: list[list[str]] = []
    cur: list[str] = []
    for raw in text.splitlines():
        if not raw.strip():
            if cur:
                blocks.append(cur)
                cur = []
            continue
        cur.append(raw.rstrip())
    if cur:
        blocks.append(cur)
    return blocks


def read_matrices(text: str, field: Field | None = None) -> Iterable[tuple[list[str], Matrix]]:
    """Yield ``(comments, matrix)`` for each matrix block in ``text``."""
    for block in split_blocks(text):
        comments = [ln for ln in block if ln.lstrip().startswith("#")]
        body = [ln for ln in block if not ln.lstrip().startswith("#")]
        if body:
            yield comments, parse_matrix(body, field)
