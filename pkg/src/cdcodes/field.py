"""
Finite field arithmetic for GF(p^e), p prime, p^e <= 512.

Elements are integers in ``[0, q)``.  The base-p digits of an element are the
coefficients of its polynomial representative, lowest degree first, so
``a = c_0 + c_1 p + ... + c_{e-1} p^{e-1}`` stands for
``c_0 + c_1 x + ... + c_{e-1} x^{e-1}`` modulo the field's modulus.

All arithmetic goes through precomputed q x q lookup tables so that numpy
arrays of elements can be combined with fancy indexing.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

MAX_ORDER = 512


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise ``ValueError`` otherwise."""
    if q < 2:
        raise ValueError(f"q must be a prime power >= 2, got {q}")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"q={q} is not a prime power")
    return p, e


# ---------------------------------------------------------------------------
# Polynomials over a field, as coefficient lists (lowest degree first).
# `F` below is anything exposing scalar add/sub/mul/inv and `q`.
# ---------------------------------------------------------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], m: Sequence[int], F) -> list[int]:
    a = _trim(list(a))
    m = _trim(list(m))
    if not m:
        raise ZeroDivisionError("polynomial modulus is zero")
    lead_inv = F.inv(m[-1])
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = F.mul(a[-1], lead_inv)
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = F.sub(a[shift + i], F.mul(c, mi))
        _trim(a)
    return a


def poly_mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], F) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return poly_mod(out, m, F)


def poly_powmod(a: Sequence[int], n: int, m: Sequence[int], F) -> list[int]:
    result = [1]
    base = poly_mod(a, m, F)
    while n:
        if n & 1:
            result = poly_mulmod(result, base, m, F)
        base = poly_mulmod(base, base, m, F)
        n >>= 1
    return poly_mod(result, m, F)


def poly_gcd(a: Sequence[int], b: Sequence[int], F) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, poly_mod(a, b, F)
    return a


def _prime_factors(n: int) -> list[int]:
    return [f for f in range(2, n + 1) if n % f == 0 and is_prime(f)]


def is_irreducible(f: Sequence[int], F) -> bool:
    """Rabin's irreducibility test for a monic polynomial over ``F``."""
    f = _trim(list(f))
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]

    def frob(k: int) -> list[int]:
        # x^(q^k) mod f
        r = x
        for _ in range(k):
            r = poly_powmod(r, F.q, f, F)
        return r

    if frob(n) != poly_mod(x, f, F):
        return False
    for r in _prime_factors(n):
        h = frob(n // r)
        diff = _trim([F.sub(hi, xi) for hi, xi in itertools.zip_longest(h, x, fillvalue=0)])
        if len(poly_gcd(f, diff, F)) != 1:
            return False
    return True


def monic_polynomials(degree: int, q: int) -> Iterator[tuple[int, ...]]:
    """Monic polynomials of ``degree`` in lexicographic order of their
    low-to-high coefficient tuples."""
    for low in itertools.product(range(q), repeat=degree):
        yield low + (1,)


def smallest_irreducible(degree: int, F) -> tuple[int, ...]:
    for f in monic_polynomials(degree, F.q):
        if is_irreducible(f, F):
            return f
    raise RuntimeError(f"no irreducible polynomial of degree {degree}")  # unreachable


class _PrimeScalars:
    """Scalar arithmetic mod p, used while bootstrapping a Field."""

    def __init__(self, p: int):
        self.q = p

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def mul(self, a, b):
        return (a * b) % self.q

    def inv(self, a):
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.q - 2, self.q)


class Field:
    """GF(p^e) with lookup tables.

    Construct through :func:`make_field`; instances are cached so that two
    requests for the same field return the same object.
    """

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = tuple(modulus)
        q = self.q

        digits = np.array([[(a // p**i) % p for i in range(e)] for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(e, dtype=np.int64)
        self.add_table = (((digits[:, None, :] + digits[None, :, :]) % p) @ weights).astype(np.int64)
        self.neg_table = (((-digits) % p) @ weights).astype(np.int64)
        self.sub_table = self.add_table[:, self.neg_table]

        scal = _PrimeScalars(p)
        mul = np.zeros((q, q), dtype=np.int64)
        if e == 1:
            r = np.arange(q, dtype=np.int64)
            mul = np.outer(r, r) % p
        else:
            # x^j mod modulus for j < 2e-1, as digit vectors
            red = []
            for j in range(2 * e - 1):
                mono = [0] * j + [1]
                r = poly_mod(mono, self.modulus, scal)
                red.append(r + [0] * (e - len(r)))
            red = np.array(red, dtype=np.int64)
            # product coefficients before reduction: conv of digit vectors
            conv = np.zeros((q, q, 2 * e - 1), dtype=np.int64)
            for i in range(e):
                for j in range(e):
                    conv[:, :, i + j] += np.outer(digits[:, i], digits[:, j])
            mul = ((conv @ red) % p) @ weights
        self.mul_table = mul.astype(np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(self.mul_table[a] == 1)[0][0])
        self.inv_table = inv  # inv_table[0] == 0 by convention

    # scalar helpers -------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.sub_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.inv_table[a])

    @property
    def is_prime(self) -> bool:
        return self.e == 1

    def elements(self) -> range:
        return range(self.q)

    # array helpers --------------------------------------------------------
    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product over the field; broadcasts like ``np.matmul``."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.is_prime:
            return np.matmul(a, b) % self.p
        shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (a.shape[-2], b.shape[-1])
        out = np.zeros(shape, dtype=np.int64)
        for t in range(a.shape[-1]):
            term = self.mul_table[a[..., :, t, None], b[..., t, None, :]]
            out = self.add_table[out, term]
        return out

    def __repr__(self) -> str:
        return f"Field(q={self.q}, modulus={self.modulus})"


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> Field:
    """Build GF(p^e) using the lexicographically smallest monic irreducible
    modulus of degree ``e`` (coefficients compared lowest degree first)."""
    if not is_prime(p):
        raise ValueError(f"characteristic must be prime, got {p}")
    if e < 1:
        raise ValueError(f"extension degree must be >= 1, got {e}")
    if p**e > MAX_ORDER:
        raise ValueError(f"q={p}^{e}={p**e} exceeds the supported maximum {MAX_ORDER}")
    modulus = smallest_irreducible(e, _PrimeScalars(p))
    return Field(p, e, modulus)


def field_of_order(q: int) -> Field:
    p, e = prime_power(q)
    return make_field(p, e)


class ExtensionField:
    """GF(q^m) as polynomials of degree < m over a base :class:`Field`.

    Elements are length-m integer arrays of base-field coordinates in the
    polynomial basis 1, x, ..., x^(m-1).  No tables are built, so q^m may be
    large.
    """

    def __init__(self, base: Field, m: int):
        self.base = base
        self.m = m
        self.q = base.q**m
        self.modulus = smallest_irreducible(m, base)
        # x^j reduced, for j < 2m - 1
        red = []
        for j in range(2 * m - 1):
            r = poly_mod([0] * j + [1], self.modulus, base)
            red.append(r + [0] * (m - len(r)))
        self._red = np.array(red, dtype=np.int64)

    def basis_element(self, j: int) -> np.ndarray:
        v = np.zeros(self.m, dtype=np.int64)
        v[j] = 1
        return v

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        F = self.base
        conv = np.zeros(2 * self.m - 1, dtype=np.int64)
        for i in range(self.m):
            if a[i]:
                conv[i : i + self.m] = F.add_table[conv[i : i + self.m], F.mul_table[a[i], b]]
        out = np.zeros(self.m, dtype=np.int64)
        for j in range(2 * self.m - 1):
            if conv[j]:
                out = F.add_table[out, F.mul_table[conv[j], self._red[j]]]
        return out

    def pow(self, a: np.ndarray, n: int) -> np.ndarray:
        result = self.basis_element(0)
        base = np.array(a, dtype=np.int64)
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def frobenius(self, a: np.ndarray, times: int = 1) -> np.ndarray:
        """a^(q^times), q the base-field order."""
        for _ in range(times):
            a = self.pow(a, self.base.q)
        return a
