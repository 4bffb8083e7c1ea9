"""
Ferrers diagrams, the dimension upper bound for Ferrers diagram rank-metric
(FDRM) codes, an explicit FDRM search, and lifting FDRM codes to subspaces.

A diagram is stored as the dot count of each of its k rows.  Rows are
right-justified inside a k x l frame, l being the top row length, so row r
occupies frame columns ``l - row_lengths[r] .. l - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import Field, field_of_order
from .matrix import Matrix, batch_rank, format_matrix, parse_header, read_matrices
from .mrd import EXHAUSTIVE_BUDGET, BudgetExceeded, RankMetricCode, min_rank_distance, span_array
from .subspace import IdentifyingVector, Subspace, identifying_vector

ENUMERATION_CAP = 2**16


@dataclass(frozen=True)
class FerrersDiagram:
    row_lengths: tuple[int, ...]

    def __post_init__(self):
        rl = tuple(int(x) for x in self.row_lengths)
        object.__setattr__(self, "row_lengths", rl)
        if any(x < 0 for x in rl):
            raise ValueError("row lengths must be nonnegative")
        if any(a < b for a, b in zip(rl, rl[1:])):
            raise ValueError(f"row lengths must be non-increasing, got {rl}")

    @classmethod
    def parse(cls, text: str) -> "FerrersDiagram":
        return cls(tuple(int(x) for x in text.split(",")))

    def __str__(self) -> str:
        return ",".join(map(str, self.row_lengths))

    @property
    def k(self) -> int:
        return len(self.row_lengths)

    @property
    def total_dots(self) -> int:
        return sum(self.row_lengths)

    @property
    def top_row(self) -> int:
        return self.row_lengths[0] if self.row_lengths else 0

    @property
    def rightmost_column(self) -> int:
        return sum(1 for x in self.row_lengths if x > 0)

    def positions(self) -> list[tuple[int, int]]:
        """Dot positions (row, col) in the k x top_row frame, row-major."""
        l = self.top_row
        return [(r, c) for r, L in enumerate(self.row_lengths) for c in range(l - L, l)]

    def mask(self) -> np.ndarray:
        out = np.zeros((self.k, self.top_row), dtype=bool)
        for r, c in self.positions():
            out[r, c] = True
        return out


def diagram_from_vector(v: IdentifyingVector) -> FerrersDiagram:
    """Row i (1-based, pivot p_i) gets n - p_i - (k - i) dots."""
    k, n = v.weight, v.n
    if k == 0:
        raise ValueError("identifying vector has weight zero")
    return FerrersDiagram(tuple(n - (p + 1) - (k - i) for i, p in enumerate(v.pivots, 1)))


def dim_bound(F: FerrersDiagram, delta: int) -> int:
    """Upper bound on the dimension of an FDRM code on ``F`` with minimum
    rank distance ``delta``: the minimum over i < delta of the number of dots
    outside the first i rows and the rightmost delta-1-i columns."""
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")
    rows = F.row_lengths
    return min(sum(max(0, L - (delta - 1 - i)) for L in rows[i:]) for i in range(delta))


@dataclass(frozen=True)
class FdrmCode:
    diagram: FerrersDiagram
    delta: int
    field: Field
    basis: tuple[Matrix, ...]
    target: int  # the dimension bound the search aimed for
    seed: int = 0
    restart: int = 0  # restart index that produced this basis

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.field.q**self.dimension

    def as_rank_code(self) -> RankMetricCode:
        return RankMetricCode(self.diagram.k, self.diagram.top_row, self.field, self.delta, self.basis)

    def codeword_array(self, budget: int = EXHAUSTIVE_BUDGET) -> np.ndarray:
        return self.as_rank_code().codeword_array(budget)

    def min_rank(self, budget: int = EXHAUSTIVE_BUDGET) -> float:
        return min_rank_distance(self.as_rank_code(), budget)

    def respects_diagram(self) -> bool:
        outside = ~self.diagram.mask()
        return all(not B.entries[outside].any() for B in self.basis)


class _Coords:
    """Index arithmetic on GF(q)^t, vectors encoded as integers base q."""

    def __init__(self, t: int, field: Field):
        self.t, self.field, self.q = t, field, field.q
        self.size = field.q**t
        self.weights = field.q ** np.arange(t, dtype=np.int64)
        if field.q != 2:
            idx = np.arange(self.size, dtype=np.int64)
            self.digits = (idx[:, None] // self.weights[None, :]) % field.q

    def add(self, idx: np.ndarray, y: int) -> np.ndarray:
        if self.q == 2:
            return idx ^ y
        yd = (y // self.weights) % self.q
        return self.field.add_table[self.digits[idx], yd[None, :]] @ self.weights

    def scale(self, y: int, a: int) -> int:
        if self.q == 2:
            return y if a else 0
        yd = (y // self.weights) % self.q
        return int(self.field.mul_table[a, yd] @ self.weights)

    def decode(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self.weights) % self.q


def _to_matrices(vals: np.ndarray, F: FerrersDiagram) -> np.ndarray:
    """Place coordinate vectors ``(B, t)`` onto the diagram: ``(B, k, l)``."""
    pos = F.positions()
    out = np.zeros((len(vals), F.k, F.top_row), dtype=np.int64)
    if pos:
        r = np.array([p[0] for p in pos])
        c = np.array([p[1] for p in pos])
        out[:, r, c] = vals
    return out


def search_fdrm(
    F: FerrersDiagram,
    delta: int,
    field: Field,
    restarts: int = 100,
    seed: int = 0,
    *,
    verify: bool = True,
    budget: int = EXHAUSTIVE_BUDGET,
    enumeration_cap: int = ENUMERATION_CAP,
    attempts: int = 2000,
) -> FdrmCode:
    """Randomized greedy construction of a linear FDRM code.

    Each restart grows a basis one random diagram-supported matrix at a time,
    accepting a candidate only if every new span element has rank >= delta.
    The first restart reaching the dimension bound wins; otherwise the best
    restart (earliest on ties) is returned.  Output depends only on ``seed``.

    When q^dots fits in ``enumeration_cap``, admissibility of every candidate
    is tabulated and updated after each accepted matrix, so picks are uniform
    over all admissible candidates.  Larger diagrams fall back to rejection
    sampling with ``attempts`` tries per basis element.
    """
    target = dim_bound(F, delta)
    if verify and field.q**target > budget:
        raise BudgetExceeded(f"q^{target} codewords exceed the verification budget {budget}")
    t = F.total_dots
    if target == 0 or t == 0:
        return FdrmCode(F, delta, field, (), target, seed, 0)

    coords = _Coords(t, field) if field.q**t <= enumeration_cap else None
    if coords is not None:
        ranks = batch_rank(_to_matrices(coords.decode(np.arange(coords.size)), F), field)
        good = ranks >= delta

    best: list[int] | np.ndarray | None = None
    best_restart = 0
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        if coords is not None:
            chosen = _grow_tabulated(coords, good, target, rng)
        else:
            chosen = _grow_sampled(F, delta, field, t, target, rng, attempts)
        if best is None or len(chosen) > len(best):
            best, best_restart = chosen, r
        if len(best) == target:
            break

    if coords is not None:
        vecs = coords.decode(np.array(best, dtype=np.int64)).reshape(len(best), t)
    else:
        vecs = np.array(best, dtype=np.int64).reshape(len(best), t)
    mats = _to_matrices(vecs, F)
    code = FdrmCode(F, delta, field, tuple(Matrix._trusted(m, field) for m in mats), target, seed, best_restart)
    if verify and code.dimension and code.min_rank(budget) < delta:
        raise RuntimeError("FDRM search produced a code below the designed distance")
    return code


def _grow_tabulated(coords: _Coords, good: np.ndarray, target: int, rng) -> list[int]:
    admissible = good.copy()
    everything = np.arange(coords.size, dtype=np.int64)
    chosen: list[int] = []
    while len(chosen) < target:
        cand = np.flatnonzero(admissible)
        if cand.size == 0:
            break
        c = int(cand[rng.integers(cand.size)])
        chosen.append(c)
        # x stays admissible iff x + a*c is admissible for every scalar a
        new = admissible.copy()
        for a in range(1, coords.q):
            new &= admissible[coords.add(everything, coords.scale(c, a))]
        admissible = new
    return chosen


def _grow_sampled(F, delta, field, t, target, rng, attempts) -> list[np.ndarray]:
    chosen: list[np.ndarray] = []
    span = np.zeros((1, t), dtype=np.int64)
    while len(chosen) < target:
        for _ in range(attempts):
            x = rng.integers(0, field.q, size=t)
            shifted = field.add_table[span, x[None, :]]
            if (batch_rank(_to_matrices(shifted, F), field) >= delta).all():
                break
        else:
            break
        chosen.append(x)
        span = span_array(np.array(chosen), field)
    return chosen


def lift_fdrm(v: IdentifyingVector, code: FdrmCode, budget: int = EXHAUSTIVE_BUDGET) -> list[Subspace]:
    """Subspaces whose RREF has pivots at ``v`` and the codewords of ``code``
    on the free positions."""
    F = diagram_from_vector(v)
    if F != code.diagram:
        raise ValueError(f"code diagram {code.diagram} does not match {F} of vector {v}")
    words = code.codeword_array(budget)
    return [Subspace._from_rref(a, code.field) for a in lift_array(v, words)]


def lift_array(v: IdentifyingVector, words: np.ndarray) -> np.ndarray:
    """``(B, k, l)`` tableaux -> ``(B, k, n)`` RREF bases with pivots at ``v``."""
    k, n = v.weight, v.n
    piv = v.pivots
    nonpiv = [c for c in range(n) if c not in set(piv)]
    l = words.shape[2]
    out = np.zeros((len(words), k, n), dtype=np.int64)
    out[:, np.arange(k), list(piv)] = 1
    if l:
        out[:, :, nonpiv[len(nonpiv) - l :]] = words
    return out


def extract_tableaux(U: Subspace) -> tuple[IdentifyingVector, Matrix]:
    """Inverse of lifting: identifying vector and the k x l Ferrers tableaux."""
    v = identifying_vector(U)
    F = diagram_from_vector(v)
    nonpiv = [c for c in range(U.n) if c not in set(v.pivots)]
    l = F.top_row
    tab = U.basis.entries[:, nonpiv[len(nonpiv) - l :]] if l else np.zeros((U.k, 0), dtype=np.int64)
    return v, Matrix._trusted(tab, U.field)


def format_fdrm(v: IdentifyingVector, code: FdrmCode) -> str:
    head = f"v={v.bits} delta={code.delta} q={code.field.q} dim={code.dimension} target={code.target} seed={code.seed}"
    return "\n\n".join([head] + [format_matrix(B) for B in code.basis]) + "\n"


def parse_fdrm(text: str) -> tuple[IdentifyingVector, FdrmCode]:
    lines = text.strip().splitlines()
    hdr = parse_header(lines[0])
    v = IdentifyingVector(hdr["v"])
    field = field_of_order(int(hdr["q"]))
    F = diagram_from_vector(v)
    basis = tuple(M for _, M in read_matrices("\n".join(lines[1:]), field))
    delta = int(hdr["delta"])
    code = FdrmCode(F, delta, field, basis, int(hdr.get("target", dim_bound(F, delta))), int(hdr.get("seed", 0)))
    if not code.respects_diagram():
        raise ValueError("FDRM basis has entries outside the diagram")
    return v, code
