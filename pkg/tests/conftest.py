"""Independent brute-force oracles shared by the test modules.

None of these use row reduction: ranks and dimensions come from counting
the elements of spans, so they cross-check the elimination code.
"""

import itertools
import math

import numpy as np
import pytest

from cdcodes.field import make_field


def span_set(rows, field):
    """Set of all vectors (as tuples) in the GF(q)-span of ``rows``."""
    rows = [np.asarray(r, dtype=np.int64) for r in rows]
    n = len(rows[0]) if rows else 0
    out = set()
    for coeffs in itertools.product(range(field.q), repeat=len(rows)):
        v = np.zeros(n, dtype=np.int64)
        for c, r in zip(coeffs, rows):
            v = field.add_table[v, field.mul_table[c, r]]
        out.add(tuple(int(x) for x in v))
    return out


def log_q(size, q):
    r = round(math.log(size, q))
    assert q**r == size
    return r


def rank_oracle(a, field):
    """Rank as log_q of the row-space size."""
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return log_q(len(span_set(list(a), field)), field.q)


def distance_oracle(U, W):
    """dim U + dim W - 2 dim(U cap W), intersection by enumeration."""
    su = span_set(list(U.basis.entries), U.field)
    sw = span_set(list(W.basis.entries), W.field)
    inter = log_q(len(su & sw), U.field.q)
    return U.k + W.k - 2 * inter


def irreducible_oracle(coeffs, p):
    """Trial division by every monic polynomial of degree 1..deg/2 over GF(p)."""
    deg = len(coeffs) - 1
    for dd in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=dd):
            g = list(low) + [1]
            r = list(coeffs)
            for shift in range(deg - dd, -1, -1):
                c = r[shift + dd]
                if c:
                    for i, gi in enumerate(g):
                        r[shift + i] = (r[shift + i] - c * gi) % p
            if not any(r):
                return False
    return True


@pytest.fixture
def gf2():
    return make_field(2)


@pytest.fixture
def gf3():
    return make_field(3)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            props = dict(getattr(rep, "user_properties", []))
            if "criterion" in props and getattr(rep, "when", "call") in ("call", "setup"):
                if status == "passed" and rep.when != "call":
                    continue
                lines.append((rep.nodeid, "PASS" if status == "passed" else "FAIL", props["criterion"]))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, verdict, text in sorted(lines):
        terminalreporter.write_line(f"{verdict}  criterion {text}")
