"""
Linear rank-metric codes and the Gabidulin MRD family, as k x m matrix codes
over GF(q).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Iterator

import numpy as np

from .field import ExtensionField, Field, field_of_order
from .matrix import Matrix, batch_rank, format_matrix, parse_header, read_matrices, rref_array

EXHAUSTIVE_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """Raised when an exhaustive computation would exceed its budget."""


@dataclass(frozen=True)
class RankMetricCode:
    """A GF(q)-linear code of k x m matrices given by a basis."""

    k: int
    m: int
    field: Field
    delta: int
    basis: tuple[Matrix, ...] = dc_field(default=())

    def __post_init__(self):
        for B in self.basis:
            if B.shape != (self.k, self.m) or B.field is not self.field:
                raise ValueError(f"basis matrix of shape {B.shape} does not fit a {self.k}x{self.m} code")

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.field.q**self.dimension

    def basis_array(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((0, self.k, self.m), dtype=np.int64)
        return np.stack([B.entries for B in self.basis])

    def codeword_array(self, budget: int = EXHAUSTIVE_BUDGET) -> np.ndarray:
        """All q^dim codewords as a ``(size, k, m)`` array; index 0 is zero."""
        if self.size > budget:
            raise BudgetExceeded(f"code has {self.size} codewords, budget is {budget}")
        return span_array(self.basis_array(), self.field)

    def codewords(self, budget: int = EXHAUSTIVE_BUDGET) -> Iterator[Matrix]:
        for a in self.codeword_array(budget):
            yield Matrix._trusted(a, self.field)

    def is_linearly_independent(self) -> bool:
        if not self.basis:
            return True
        flat = self.basis_array().reshape(self.dimension, -1)
        _, piv = rref_array(flat, self.field)
        return len(piv) == self.dimension


def coefficient_tuples(dim: int, q: int) -> np.ndarray:
    """All of GF(q)^dim in lexicographic order, as a ``(q^dim, dim)`` array."""
    if dim == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(q), repeat=dim)), dtype=np.int64)


def span_array(basis: np.ndarray, field: Field) -> np.ndarray:
    """Every GF(q)-combination of the ``(dim, ...)`` basis array."""
    dim = basis.shape[0]
    shape = basis.shape[1:]
    coeffs = coefficient_tuples(dim, field.q)
    out = np.zeros((len(coeffs),) + shape, dtype=np.int64)
    for t in range(dim):
        c = coeffs[:, t].reshape((-1,) + (1,) * len(shape))
        out = field.add_table[out, field.mul_table[c, basis[t][None]]]
    return out


def gabidulin(k: int, m: int, delta: int, field: Field) -> RankMetricCode:
    """Gabidulin MRD code of k x m matrices with minimum rank distance delta.

    Codewords come from linearized polynomials
    ``f(x) = sum_{i<K} f_i x^(q^i)`` with ``f_i`` in GF(q^M), M = max(k, m),
    K = min(k, m) - delta + 1, evaluated at 1, x, ..., x^(N-1) with
    N = min(k, m).  Each evaluation is expanded in the polynomial basis of
    GF(q^M) to give one row (k <= m) or one column (k > m) of the matrix.
    """
    if k < 1 or m < 1:
        raise ValueError("k and m must be positive")
    N, M = min(k, m), max(k, m)
    if not 1 <= delta <= N:
        raise ValueError(f"delta must lie in [1, {N}], got {delta}")
    K = N - delta + 1
    ext = ExtensionField(field, M)
    points = [ext.basis_element(j) for j in range(N)]
    # points[j]^(q^i) for i < K
    frob = [[p] for p in points]
    for j in range(N):
        for _ in range(1, K):
            frob[j].append(ext.frobenius(frob[j][-1]))
    basis = []
    for i in range(K):
        for t in range(M):
            beta = ext.basis_element(t)
            rows = np.array([ext.mul(beta, frob[j][i]) for j in range(N)], dtype=np.int64)  # N x M
            mat = rows if k <= m else rows.T
            basis.append(Matrix._trusted(mat, field))
    return RankMetricCode(k, m, field, delta, tuple(basis))


def min_rank_distance(code: RankMetricCode, budget: int = EXHAUSTIVE_BUDGET) -> float:
    """Minimum rank over the nonzero codewords; ``math.inf`` for the zero code."""
    if code.dimension == 0:
        return math.inf
    words = code.codeword_array(budget)[1:]
    return int(batch_rank(words, code.field).min())


def zero_code(k: int, m: int, field: Field, delta: int = 1) -> RankMetricCode:
    return RankMetricCode(k, m, field, delta, ())


def format_rank_code(code: RankMetricCode) -> str:
    head = f"k={code.k} m={code.m} q={code.field.q} delta={code.delta} dim={code.dimension}"
    return "\n\n".join([head] + [format_matrix(B) for B in code.basis]) + "\n"


def parse_rank_code(text: str, field: Field | None = None) -> RankMetricCode:
    lines = text.strip().splitlines()
    hdr = parse_header(lines[0])
    q = int(hdr["q"])
    if field is None:
        field = field_of_order(q)
    basis = tuple(M for _, M in read_matrices("\n".join(lines[1:]), field))
    code = RankMetricCode(int(hdr["k"]), int(hdr["m"]), field, int(hdr["delta"]), basis)
    if "dim" in hdr and int(hdr["dim"]) != code.dimension:
        raise ValueError(f"header says dim={hdr['dim']} but file has {code.dimension} basis matrices")
    return code
