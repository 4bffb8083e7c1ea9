"""
Assembly and verification of constant-dimension codes.

Three assemblies are provided:

* :func:`linkage` -- ``{im(U | M)}`` for U in an SC-representation set and M
  in a linear rank-metric code;
* :func:`general_construct` -- linkage part plus lifted FDRM codes on
  identifying vectors with >= d/2 ones in the last n2 positions;
* :func:`li_construct` -- additionally ``{im(0 | U)}`` for a second
  SC-representation set, with the stricter vector condition and k >= d.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .field import Field
from .ferrers import FdrmCode, diagram_from_vector, lift_array
from .greedy import validate_selection
from .matrix import Matrix, batch_rank, rref_array
from .mrd import EXHAUSTIVE_BUDGET, RankMetricCode, gabidulin, min_rank_distance
from .subspace import IdentifyingVector, Subspace, canonicalize, identifying_vector, min_subspace_distance

LINKAGE = "linkage"
LIFTED = "lifted"
ZERO_PREFIX = "zero-prefix"

PAIR_BUDGET = 10**8


class ConstructionError(ValueError):
    """A construction precondition does not hold."""


@dataclass
class ConstructionSpec:
    n1: int
    n2: int
    k: int
    d: int
    field: Field
    U1: list[Matrix]
    rank_code: RankMetricCode
    selection: list[tuple[IdentifyingVector, FdrmCode]] = field(default_factory=list)


@dataclass
class AssembledCode:
    codewords: list[Subspace]
    tags: list[str]
    n: int
    k: int
    field: Field
    notes: list[str] = field(default_factory=list)
    sizes: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.codewords)

    def part(self, tag: str) -> list[Subspace]:
        return [w for w, t in zip(self.codewords, self.tags) if t == tag]

    def formula_size(self) -> int:
        """Size predicted by the construction's counting formula."""
        s = self.sizes
        return s.get("N2", 0) + s.get("N1", 0) * s.get("NR", 0) + s.get("lifted", 0)


# ---------------------------------------------------------------------------
# SC-representation sets
# ---------------------------------------------------------------------------


def check_sc_set(U_set: Sequence[Matrix], k: int, n: int, d: int | None = None) -> list[Subspace]:
    """Validate an SC-representation set and return the row spaces.

    Every matrix must be k x n of rank k with pairwise distinct row spaces;
    with ``d`` given, pairwise subspace distance must also be >= d.
    """
    spaces = []
    seen: dict[bytes, int] = {}
    for i, U in enumerate(U_set):
        if U.shape != (k, n):
            raise ConstructionError(f"SC-set matrix {i} has shape {U.shape}, expected {(k, n)}")
        S = canonicalize(U) if U.entries.any() else None
        if S is None or S.k != k:
            raise ConstructionError(f"SC-set matrix {i} is rank deficient: {U!r}")
        if S.key() in seen:
            raise ConstructionError(f"SC-set matrices {seen[S.key()]} and {i} span the same subspace")
        seen[S.key()] = i
        spaces.append(S)
    if d is not None and len(spaces) > 1:
        res = min_subspace_distance(spaces, threshold=d)
        if res.distance < d:
            i, j = res.witness
            raise ConstructionError(f"SC-set matrices {i} and {j} are at subspace distance {res.distance} < {d}")
    return spaces


def lifted_mrd_sc_set(k: int, n: int, d: int, field: Field) -> list[Matrix]:
    """SC-representation set ``{(I_k | A)}`` over a Gabidulin code with
    rank distance d/2; for n == k it is just ``{I_k}``."""
    if n < k:
        raise ValueError(f"n={n} must be >= k={k}")
    if n == k:
        return [Matrix.identity(k, field)]
    code = gabidulin(k, n - k, d // 2, field)
    eye = np.eye(k, dtype=np.int64)
    return [Matrix._trusted(np.hstack([eye, A]), field) for A in code.codeword_array(budget=10**7)]


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------


def _linkage_words(U_set: Sequence[Matrix], rank_code: RankMetricCode) -> list[Subspace]:
    field = rank_code.field
    k = rank_code.k
    words = rank_code.codeword_array(budget=10**7)
    out = []
    for U in U_set:
        # rref(U | I) = (E U | E) with E invertible, so rref(U | M) = (E U | E M)
        red, piv = rref_array(np.hstack([U.entries, np.eye(k, dtype=np.int64)]), field)
        n1 = U.cols
        if len(piv) < k or piv[-1] >= n1:
            raise ConstructionError(f"SC-set matrix is rank deficient: {U!r}")
        RU, E = red[:, :n1], red[:, n1:]
        EM = field.matmul(E, words)
        block = np.concatenate([np.broadcast_to(RU, (len(words),) + RU.shape), EM], axis=2)
        out.extend(Subspace._from_rref(b, field) for b in block)
    return out


def linkage(U_set: Sequence[Matrix], rank_code: RankMetricCode) -> AssembledCode:
    """``{im(U | M) : U in U_set, M in rank_code}``."""
    if not U_set:
        raise ConstructionError("empty SC-representation set")
    k = rank_code.k
    n1 = U_set[0].cols
    if any(U.field is not rank_code.field for U in U_set):
        raise ConstructionError("SC-set and rank code are over different fields")
    check_sc_set(U_set, k, n1)
    words = _linkage_words(U_set, rank_code)
    return AssembledCode(
        words,
        [LINKAGE] * len(words),
        n1 + rank_code.m,
        k,
        rank_code.field,
        sizes={"N1": len(U_set), "NR": rank_code.size},
    )


def _check_common(spec: ConstructionSpec, prefix_min: int, budget: int) -> None:
    n1, n2, k, d = spec.n1, spec.n2, spec.k, spec.d
    if d % 2:
        raise ConstructionError(f"d must be even, got d={d}")
    h = d // 2
    if n1 < k or n2 < k:
        raise ConstructionError(f"need n1 >= k and n2 >= k, got n1={n1}, n2={n2}, k={k}")
    rc = spec.rank_code
    if (rc.k, rc.m) != (k, n2):
        raise ConstructionError(f"rank code is {rc.k}x{rc.m}, expected {k}x{n2}")
    if rc.field is not spec.field:
        raise ConstructionError("rank code is over a different field")
    if rc.delta != h:
        raise ConstructionError(f"rank code has designed distance {rc.delta}, expected d/2={h}")
    if rc.size <= budget and rc.dimension and min_rank_distance(rc, budget) < h:
        raise ConstructionError(f"rank code has minimum rank distance below {h}")
    check_sc_set(spec.U1, k, n1, d)

    vecs = [v for v, _ in spec.selection]
    report = validate_selection(vecs, n1, n2, k, d, prefix_min=prefix_min)
    if not report.ok:
        bad = report.violations[0]
        raise ConstructionError(f"identifying vector violation ({bad.kind}): {bad.detail}")
    for v, code in spec.selection:
        if code.diagram != diagram_from_vector(v):
            raise ConstructionError(f"FDRM code diagram {code.diagram} does not belong to vector {v}")
        if code.field is not spec.field:
            raise ConstructionError(f"FDRM code for {v} is over a different field")
        if not code.respects_diagram():
            raise ConstructionError(f"FDRM code for {v} has entries outside its diagram")
        if code.dimension and code.min_rank(budget) < h:
            raise ConstructionError(f"FDRM code for {v} has minimum rank below {h}")


def _lifted_words(spec: ConstructionSpec, budget: int) -> list[Subspace]:
    out = []
    for v, code in spec.selection:
        arr = lift_array(v, code.codeword_array(budget))
        out.extend(Subspace._from_rref(a, spec.field) for a in arr)
    return out


def _finish(words: list[Subspace], tags: list[str], spec: ConstructionSpec, sizes, notes) -> AssembledCode:
    seen: dict[bytes, int] = {}
    for i, w in enumerate(words):
        key = w.key()
        if key in seen:
            raise ConstructionError(f"codewords {seen[key]} ({tags[seen[key]]}) and {i} ({tags[i]}) coincide: {w!r}")
        seen[key] = i
    return AssembledCode(words, tags, spec.n1 + spec.n2, spec.k, spec.field, notes, sizes)


def general_construct(spec: ConstructionSpec, budget: int = EXHAUSTIVE_BUDGET) -> AssembledCode:
    """Linkage part plus lifted FDRM codes.

    Size is N1 * N_R + sum_j q^dim_j; duplicated codewords raise.
    """
    _check_common(spec, 0, budget)
    c1 = _linkage_words(spec.U1, spec.rank_code)
    c2 = _lifted_words(spec, budget)
    sizes = {"N1": len(spec.U1), "NR": spec.rank_code.size, "lifted": sum(c.size for _, c in spec.selection)}
    return _finish(c1 + c2, [LINKAGE] * len(c1) + [LIFTED] * len(c2), spec, sizes, [])


def li_construct(spec: ConstructionSpec, U2: Sequence[Matrix], budget: int = EXHAUSTIVE_BUDGET) -> AssembledCode:
    """Three-part construction: linkage part, ``{im(0 | U) : U in U2}`` and
    lifted FDRM codes on vectors with >= d/2 ones in both blocks.

    Requires k >= d.  The strict inequalities n1 > k, n2 > k of the original
    statement are not enforced; equality is reported in ``notes``.
    """
    k, d = spec.k, spec.d
    if k < d:
        raise ConstructionError(f"three-part construction needs k >= d, got k={k}, d={d}")
    _check_common(spec, d // 2, budget)
    notes = []
    if spec.n1 == k:
        notes.append("boundary case: n1 == k (original statement assumes n1 > k)")
    if spec.n2 == k:
        notes.append("boundary case: n2 == k (original statement assumes n2 > k)")
    spaces2 = check_sc_set(U2, k, spec.n2, d) if U2 else []
    c1 = _linkage_words(spec.U1, spec.rank_code)
    zero = np.zeros((k, spec.n1), dtype=np.int64)
    c2 = [Subspace._from_rref(np.hstack([zero, S.basis.entries]), spec.field) for S in spaces2]
    c3 = _lifted_words(spec, budget)
    sizes = {
        "N1": len(spec.U1),
        "NR": spec.rank_code.size,
        "N2": len(spaces2),
        "lifted": sum(c.size for _, c in spec.selection),
    }
    tags = [LINKAGE] * len(c1) + [ZERO_PREFIX] * len(c2) + [LIFTED] * len(c3)
    return _finish(c1 + c2 + c3, tags, spec, sizes, notes)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass
class VerifyReport:
    codewords: int
    k: int
    d: int
    dims_ok: bool
    duplicates: int
    min_distance: float | None  # None when fewer than two codewords
    witness: tuple[int, int] | None
    mode: str  # exhaustive | sampled
    pairs_checked: int

    @property
    def ok(self) -> bool:
        dist_ok = self.min_distance is None or self.min_distance >= self.d
        return self.dims_ok and self.duplicates == 0 and dist_ok

    def to_text(self) -> str:
        w = "none" if self.witness is None else f"{self.witness[0] + 1},{self.witness[1] + 1}"
        md = "undefined" if self.min_distance is None else self.min_distance
        lines = [
            f"codewords={self.codewords}",
            f"k={self.k}",
            f"d={self.d}",
            f"dims_ok={str(self.dims_ok).lower()}",
            f"duplicates={self.duplicates}",
            f"min_distance={md}",
            f"witness={w}",
            f"mode={self.mode}",
            f"pairs_checked={self.pairs_checked}",
            f"valid={str(self.ok).lower()}",
        ]
        return "\n".join(lines) + "\n"


def verify_cdc(
    code: AssembledCode | Sequence[Subspace],
    k: int,
    d: int,
    *,
    budget: int = PAIR_BUDGET,
    samples: int = 200_000,
    seed: int = 0,
) -> VerifyReport:
    """Check dimensions, duplicates and minimum subspace distance.

    All pairs are compared when there are at most ``budget`` of them;
    otherwise ``samples`` random pairs are, and the report says ``sampled``.
    Witness indices in :meth:`VerifyReport.to_text` are 1-based.
    """
    words = list(code.codewords if isinstance(code, AssembledCode) else code)
    N = len(words)
    dims_ok = all(w.k == k for w in words)
    keys = [w.key() for w in words]
    duplicates = N - len(set(keys))
    if N < 2:
        return VerifyReport(N, k, d, dims_ok, duplicates, None, None, "exhaustive", 0)
    pairs = N * (N - 1) // 2
    if pairs <= budget:
        res = min_subspace_distance(words)
        return VerifyReport(N, k, d, dims_ok, duplicates, res.distance, res.witness, "exhaustive", res.pairs_checked)

    rng = np.random.default_rng(seed)
    i = rng.integers(0, N, size=samples)
    j = rng.integers(0, N - 1, size=samples)
    j = np.where(j >= i, j + 1, j)
    best, witness = None, None
    field = words[0].field
    kmax = max(w.k for w in words)
    chunk = 50_000
    for s in range(0, samples, chunk):
        a, b = i[s : s + chunk], j[s : s + chunk]
        stacked = np.zeros((len(a), 2 * kmax, words[0].n), dtype=np.int64)
        for t, (x, y) in enumerate(zip(a, b)):
            stacked[t, : words[x].k] = words[x].basis.entries
            stacked[t, kmax : kmax + words[y].k] = words[y].basis.entries
        dims = np.array([words[x].k + words[y].k for x, y in zip(a, b)])
        dist = 2 * batch_rank(stacked, field) - dims
        t = int(dist.argmin())
        if best is None or dist[t] < best:
            best, witness = int(dist[t]), (int(a[t]), int(b[t]))
    if duplicates:
        first: dict[bytes, int] = {}
        for idx, key in enumerate(keys):
            if key in first:
                best, witness = 0, (first[key], idx)
                break
            first[key] = idx
    return VerifyReport(N, k, d, dims_ok, duplicates, best, witness, "sampled", samples)


def min_cross_dimension(A: Sequence[Subspace], B: Sequence[Subspace]) -> int:
    """min over a in A, b in B of dim(a + b), exhaustively."""
    if not A or not B:
        raise ValueError("both parts must be nonempty")
    field = A[0].field
    arr = np.stack([a.basis.entries for a in A])
    best = None
    for b in B:
        U = b.basis.entries
        piv = [int(np.flatnonzero(row)[0]) for row in U]
        reduced = field.sub_table[arr, field.matmul(arr[:, :, piv], U)]
        s = int(batch_rank(reduced, field).min()) + b.k
        best = s if best is None else min(best, s)
    return best


def structural_report(code: AssembledCode, n1: int, d: int) -> dict[str, bool]:
    """Pivot-placement invariants that keep the parts disjoint."""
    h = d // 2
    out = {"linkage_pivots_in_prefix": True, "lifted_tail_weight": True}
    for w, tag in zip(code.codewords, code.tags):
        v = identifying_vector(w)
        if tag == LINKAGE and v.bits[n1:].count("1") != 0:
            out["linkage_pivots_in_prefix"] = False
        if tag == LIFTED and v.bits[n1:].count("1") < h:
            out["lifted_tail_weight"] = False
    return out


__all__ = [
    "LIFTED",
    "LINKAGE",
    "ZERO_PREFIX",
    "AssembledCode",
    "ConstructionError",
    "ConstructionSpec",
    "VerifyReport",
    "check_sc_set",
    "general_construct",
    "li_construct",
    "lifted_mrd_sc_set",
    "linkage",
    "min_cross_dimension",
    "structural_report",
    "verify_cdc",
]
