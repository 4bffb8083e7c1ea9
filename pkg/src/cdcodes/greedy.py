"""
Greedy selection of identifying vectors for the lifted FDRM part of a
linkage + echelon-Ferrers code.

Candidates are weight-k vectors of length n1 + n2 with at least d/2 ones in
the last n2 positions.  They are ranked by their FDRM dimension bound
(delta = d/2), the best one seeds the selection, and each dimension level is
then drained greedily: among the vectors still at Hamming distance >= d from
everything selected, take the one closest to the most recently added vector.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bounds import QPolynomial, dims_to_poly
from .ferrers import diagram_from_vector, dim_bound
from .subspace import IdentifyingVector


def check_parameters(n1: int, n2: int, k: int, d: int) -> None:
    if d % 2:
        raise ValueError(f"d must be even, got d={d}")
    if d < 2:
        raise ValueError(f"d must be >= 2, got d={d}")
    if min(n1, n2, k) < 1:
        raise ValueError("n1, n2 and k must be positive")
    h = d // 2
    if h > k:
        raise ValueError(f"d/2={h} exceeds k={k}")
    if h > n2:
        raise ValueError(f"d/2={h} exceeds n2={n2}")
    if k - h > n1:
        raise ValueError(f"k - d/2 = {k - h} exceeds n1={n1}")


def candidate_count(n1: int, n2: int, k: int, d: int) -> int:
    """Closed-form number of candidates: sum over the surplus of ones in the
    last n2 positions."""
    h = d // 2
    return sum(math.comb(n1, k - h - t) * math.comb(n2, h + t) for t in range(k - h + 1))


def candidates(n1: int, n2: int, k: int, d: int, prefix_min: int = 0) -> list[IdentifyingVector]:
    """All admissible vectors in lexicographic order.

    ``prefix_min`` additionally demands that many ones in the first n1
    positions (``d // 2`` gives the stricter admissibility of the
    three-part construction).
    """
    check_parameters(n1, n2, k, d)
    h = d // 2
    n = n1 + n2
    out = []
    for ones in itertools.combinations(range(n), k):
        tail = sum(1 for i in ones if i >= n1)
        if tail >= h and k - tail >= prefix_min:
            out.append(IdentifyingVector.from_pivots(ones, n))
    out.sort()
    return out


@dataclass
class SelectionResult:
    vectors: list[IdentifyingVector]
    dims: list[int]
    n1: int
    n2: int
    k: int
    d: int
    candidate_count: int
    trace: list[tuple[int, list[str]]] = field(default_factory=list)  # (level, picks)

    def poly(self) -> QPolynomial:
        return dims_to_poly(self.dims)

    def value(self, q: int) -> int:
        return self.poly()(q)


def greedy_select(n1: int, n2: int, k: int, d: int, prefix_min: int = 0) -> SelectionResult:
    """Run the greedy selection.

    Ties are broken lexicographically, both when ranking candidates of equal
    dimension and when several candidates are equally close to the latest
    pick.  Levels run from the maximum dimension down to 0; vectors sharing
    the maximum dimension with the seed are considered in the first level.
    """
    cands = candidates(n1, n2, k, d, prefix_min)
    delta = d // 2
    dims = np.array([dim_bound(diagram_from_vector(v), delta) for v in cands], dtype=np.int64)
    if not cands:
        return SelectionResult([], [], n1, n2, k, d, 0)
    order = sorted(range(len(cands)), key=lambda i: (-dims[i], cands[i].bits))
    ints = np.array([cands[i].as_int() for i in order], dtype=np.int64)
    dims = dims[order]
    cands = [cands[i] for i in order]

    seed = 0
    chosen = [seed]
    compatible = np.bitwise_count(ints ^ ints[seed]) >= d
    trace = [(int(dims[seed]), [cands[seed].bits])]
    for level in range(int(dims[0]), -1, -1):
        picks = []
        at_level = dims == level
        while True:
            pool = np.flatnonzero(compatible & at_level)
            if pool.size == 0:
                break
            dist = np.bitwise_count(ints[pool] ^ ints[chosen[-1]])
            # pool is sorted by (dim desc, bits asc), so argmin keeps the
            # lexicographically smallest among the closest
            j = int(pool[dist.argmin()])
            chosen.append(j)
            picks.append(cands[j].bits)
            compatible &= np.bitwise_count(ints ^ ints[j]) >= d
        if level == dims[0]:
            trace[0][1].extend(picks)
        elif picks:
            trace.append((level, picks))
    return SelectionResult(
        [cands[i] for i in chosen],
        [int(dims[i]) for i in chosen],
        n1,
        n2,
        k,
        d,
        len(cands),
        trace,
    )


@dataclass
class Violation:
    kind: str  # weight | length | condition-a | condition-a-prefix | condition-b | dim-mismatch
    indices: tuple[int, ...]
    detail: str


@dataclass
class SelectionReport:
    vectors: list[IdentifyingVector]
    dims: list[int]
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def poly(self) -> QPolynomial:
        return dims_to_poly(self.dims)


def validate_selection(
    vectors: Sequence[IdentifyingVector],
    n1: int,
    n2: int,
    k: int,
    d: int,
    *,
    claimed_dims: Sequence[int | None] | None = None,
    prefix_min: int = 0,
) -> SelectionReport:
    """Check length, weight, tail weight >= d/2, pairwise Hamming distance
    >= d and (if given) the claimed dimension of each vector.  Indices in the
    report are 0-based."""
    h = d // 2
    n = n1 + n2
    violations: list[Violation] = []
    dims: list[int] = []
    for i, v in enumerate(vectors):
        if v.n != n:
            violations.append(Violation("length", (i,), f"{v} has length {v.n}, expected {n}"))
            dims.append(-1)
            continue
        if v.weight != k:
            violations.append(Violation("weight", (i,), f"{v} has weight {v.weight}, expected {k}"))
        tail = v.bits[n1:].count("1")
        if tail < h:
            violations.append(Violation("condition-a", (i,), f"{v} has {tail} ones in the last {n2} positions, need {h}"))
        if prefix_min and v.bits[:n1].count("1") < prefix_min:
            violations.append(Violation("condition-a-prefix", (i,), f"{v} has fewer than {prefix_min} ones in the first {n1} positions"))
        dm = dim_bound(diagram_from_vector(v), h) if v.weight else 0
        dims.append(dm)
        if claimed_dims is not None and claimed_dims[i] is not None and claimed_dims[i] != dm:
            violations.append(Violation("dim-mismatch", (i,), f"{v} claimed dim {claimed_dims[i]}, recomputed {dm}"))
    for i, j in itertools.combinations(range(len(vectors)), 2):
        a, b = vectors[i], vectors[j]
        if a.n == b.n and a.hamming(b) < d:
            violations.append(Violation("condition-b", (i, j), f"H({a}, {b}) = {a.hamming(b)} < {d}"))
    return SelectionReport(list(vectors), dims, violations)
