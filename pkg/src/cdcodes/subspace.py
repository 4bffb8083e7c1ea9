"""
Subspaces of GF(q)^n in canonical RREF form, subspace distance, identifying
vectors, Grassmannian enumeration and brute-force minimum distance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .field import Field, field_of_order
from .matrix import Matrix, batch_rank, format_matrix, parse_header, read_matrices, rref

ENUMERATION_CAP = 10**6


@dataclass(frozen=True, order=True)
class IdentifyingVector:
    """Binary pivot pattern of a subspace; ``bits`` is a 0/1 string."""

    bits: str

    def __post_init__(self):
        if not self.bits or set(self.bits) - {"0", "1"}:
            raise ValueError(f"identifying vector must be a nonempty 0/1 string, got {self.bits!r}")

    @classmethod
    def from_pivots(cls, pivots: Iterable[int], n: int) -> "IdentifyingVector":
        ps = set(pivots)
        return cls("".join("1" if i in ps else "0" for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def weight(self) -> int:
        return self.bits.count("1")

    @property
    def pivots(self) -> tuple[int, ...]:
        """0-based pivot columns."""
        return tuple(i for i, c in enumerate(self.bits) if c == "1")

    def as_int(self) -> int:
        return int(self.bits, 2)

    def hamming(self, other: "IdentifyingVector") -> int:
        if self.n != other.n:
            raise ValueError("identifying vectors differ in length")
        return (self.as_int() ^ other.as_int()).bit_count()

    def __str__(self) -> str:
        return self.bits


class Subspace:
    """A k-dimensional subspace of GF(q)^n, stored as its k x n RREF basis.

    Two subspaces are equal iff their bases are identical.
    """

    __slots__ = ("basis",)

    def __init__(self, basis: Matrix):
        self.basis = basis

    @classmethod
    def _from_rref(cls, arr: np.ndarray, field: Field) -> "Subspace":
        # caller guarantees arr is a full-rank RREF matrix
        return cls(Matrix._trusted(arr, field))

    @property
    def field(self) -> Field:
        return self.basis.field

    @property
    def n(self) -> int:
        return self.basis.cols

    @property
    def k(self) -> int:
        return self.basis.rows

    def key(self) -> bytes:
        return self.basis.key()

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.basis == other.basis

    def __hash__(self) -> int:
        return hash(self.basis)

    def __repr__(self) -> str:
        rows = " ".join("".join(str(int(x)) for x in r) for r in self.basis.entries) if self.field.q <= 10 else "..."
        return f"Subspace(q={self.field.q}, n={self.n}, k={self.k}, [{rows}])"


def canonicalize(generators: Matrix) -> Subspace:
    """Row space of ``generators`` as a canonical :class:`Subspace`."""
    red = rref(generators)
    if red.rank == 0:
        raise ValueError("generator matrix has rank 0")
    return Subspace(Matrix._trusted(red.R.entries[: red.rank], generators.field))


def _check_ambient(U: Subspace, W: Subspace) -> None:
    if U.n != W.n or U.field is not W.field:
        raise ValueError(f"ambient mismatch: GF({U.field.q})^{U.n} vs GF({W.field.q})^{W.n}")


def subspace_distance(U: Subspace, W: Subspace) -> int:
    _check_ambient(U, W)
    s = rref(U.basis.vstack(W.basis)).rank
    return 2 * s - U.k - W.k


def identifying_vector(U: Subspace) -> IdentifyingVector:
    piv = [int(np.flatnonzero(row)[0]) for row in U.basis.entries]
    return IdentifyingVector.from_pivots(piv, U.n)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """The q-binomial coefficient [n choose k]_q, exact."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def enumerate_grassmannian(n: int, k: int, field: Field, cap: int = ENUMERATION_CAP) -> Iterator[Subspace]:
    """Every k-dim subspace of GF(q)^n exactly once.

    Subspaces come out in lexicographic order of their basis matrices read
    row-major.
    """
    total = gaussian_binomial(n, k, field.q)
    if total > cap:
        raise ValueError(f"Grassmannian has {total} elements, above the cap {cap}")
    if k == 0:
        return
    q = field.q
    shapes = []
    for pivots in itertools.combinations(range(n), k):
        free = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivots]
        shapes.append((pivots, free))
    for block in _lex_subspaces(shapes, n, k, q):
        yield Subspace._from_rref(block, field)


def _lex_subspaces(shapes, n, k, q):
    # Materialise all bases (bounded by the cap) and sort row-major.
    out = []
    for pivots, free in shapes:
        base = np.zeros((k, n), dtype=np.int64)
        for i, p in enumerate(pivots):
            base[i, p] = 1
        if not free:
            out.append(base)
            continue
        vals = np.array(list(itertools.product(range(q), repeat=len(free))), dtype=np.int64)
        arr = np.repeat(base[None], len(vals), axis=0)
        rows = np.array([f[0] for f in free])
        cols = np.array([f[1] for f in free])
        arr[:, rows, cols] = vals
        out.extend(arr)
    out.sort(key=lambda a: tuple(a.ravel()))
    return out


@dataclass
class DistanceResult:
    distance: int
    witness: tuple[int, int] | None
    pairs_checked: int
    complete: bool  # False if stopped early at the threshold


def stack_bases(code: Sequence[Subspace]) -> np.ndarray:
    """``(N, kmax, n)`` array of bases, zero-padded to a common row count."""
    kmax = max(U.k for U in code)
    n = code[0].n
    arr = np.zeros((len(code), kmax, n), dtype=np.int64)
    for i, U in enumerate(code):
        arr[i, : U.k] = U.basis.entries
    return arr


def min_subspace_distance(code: Sequence[Subspace], threshold: int | None = None) -> DistanceResult:
    """Exhaustive minimum pairwise subspace distance.

    With ``threshold`` set, stops at the first pair closer than it.
    Duplicated codewords show up as distance 0.
    """
    if len(code) < 2:
        raise ValueError("need at least two codewords")
    field = code[0].field
    for U in code[1:]:
        _check_ambient(code[0], U)
    arr = stack_bases(code)
    dims = np.array([U.k for U in code], dtype=np.int64)
    best, witness, checked = None, None, 0
    N = len(code)
    for i in range(N - 1):
        others = arr[i + 1 :]
        # dim(U + W) = dim U + rank(W reduced modulo the RREF basis of U)
        U = code[i].basis.entries
        piv = [int(np.flatnonzero(row)[0]) for row in U]
        reduced = field.sub_table[others, field.matmul(others[:, :, piv], U)]
        s = dims[i] + batch_rank(reduced, field)
        dist = 2 * s - dims[i] - dims[i + 1 :]
        checked += len(others)
        j = int(dist.argmin())
        if best is None or dist[j] < best:
            best, witness = int(dist[j]), (i, i + 1 + j)
        if threshold is not None and best < threshold:
            return DistanceResult(best, witness, checked, False)
    return DistanceResult(best, witness, checked, True)


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------


def format_code(code: Sequence[Subspace], tags: Sequence[str] | None = None) -> str:
    """Code file text: a header line then one matrix block per codeword."""
    if not code:
        raise ValueError("cannot serialise an empty code")
    U0 = code[0]
    parts = [f"q={U0.field.q} n={U0.n} k={U0.k} count={len(code)}"]
    for i, U in enumerate(code):
        block = format_matrix(U.basis)
        if tags is not None:
            block = f"# part={tags[i]}\n" + block
        parts.append(block)
    return "\n\n".join(parts) + "\n"


def parse_code(text: str) -> tuple[list[Subspace], list[str | None]]:
    """Inverse of :func:`format_code`.  Returns codewords and their part tags."""
    lines = text.splitlines()
    first = next((i for i, ln in enumerate(lines) if ln.strip() and not ln.lstrip().startswith("#")), None)
    if first is None:
        raise ValueError("empty code file")
    hdr = parse_header(lines[first])
    try:
        q, n, count = (int(hdr[x]) for x in ("q", "n", "count"))
    except KeyError as exc:
        raise ValueError(f"code header missing {exc}") from None
    field = field_of_order(q)
    code, tags = [], []
    for comments, M in read_matrices("\n".join(lines[first + 1 :]), field):
        if M.cols != n:
            raise ValueError(f"codeword has {M.cols} columns, expected n={n}")
        code.append(canonicalize(M))
        tag = None
        for c in comments:
            c = c.lstrip("# ").strip()
            if c.startswith("part="):
                tag = c[5:]
        tags.append(tag)
    if len(code) != count:
        raise ValueError(f"header says count={count} but file has {len(code)} codewords")
    return code, tags


def parse_vectors(text: str) -> list[tuple[IdentifyingVector, dict[str, str]]]:
    """Identifying-vector file: one 0/1 string per line.

    ``#`` starts a comment; trailing ``key=value`` annotations inside the
    comment (such as ``# dim=12``) are returned with the vector.
    """
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body, _, comment = raw.partition("#")
        body = body.strip()
        if not body:
            continue
        try:
            v = IdentifyingVector(body)
        except ValueError:
            raise ValueError(f"line {lineno}: not a 0/1 string: {body!r}") from None
        notes = {}
        for tok in comment.split():
            if "=" in tok:
                key, val = tok.split("=", 1)
                notes[key] = val
        out.append((v, notes))
    return out


def format_vectors(vectors: Sequence[IdentifyingVector], dims: Sequence[int] | None = None) -> str:
    lines = []
    for i, v in enumerate(vectors):
        lines.append(f"{v.bits}  # dim={dims[i]}" if dims is not None else v.bits)
    return "\n".join(lines) + "\n"
