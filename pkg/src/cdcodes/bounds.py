"""
Exact lower-bound accounting for linkage plus echelon-Ferrers codes.

A code built from a base code of size N1, an MRD code of k x n2 matrices and
lifted FDRM codes of dimensions dim_1, dim_2, ... has size

    N1 * q^(max(k,n2) * (min(k,n2) - delta + 1)) + sum_j q^dim_j.

The sum is kept symbolically as a :class:`QPolynomial`.  Everything is
evaluated with Python integers, so values of any size are exact.
"""

from __future__ import annotations

import csv
import io
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Sequence

from .ferrers import diagram_from_vector, dim_bound
from .subspace import IdentifyingVector, parse_vectors


class QPolynomial:
    """Polynomial in q with nonnegative integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {int(e): int(m) for e, m in (coeffs or {}).items() if m}
        if any(e < 0 or m < 0 for e, m in c.items()):
            raise ValueError("exponents and coefficients must be nonnegative")
        self.coeffs = dict(sorted(c.items(), reverse=True))

    @classmethod
    def from_dims(cls, dims: Iterable[int]) -> "QPolynomial":
        dims = list(dims)
        if any(d < 0 for d in dims):
            raise ValueError("dimensions must be nonnegative")
        return cls(Counter(dims))

    @classmethod
    def parse(cls, text: str) -> "QPolynomial":
        """Parse forms like ``q^{15}+2q^13+3q^12+q+1``."""
        c: Counter = Counter()
        s = re.sub(r"[\s{}]", "", text)
        if not s or s == "0":
            return cls()
        for term in s.split("+"):
            m = re.fullmatch(r"(\d*)\*?(q(?:\^(\d+))?)?", term)
            if not m or (not m.group(1) and not m.group(2)):
                raise ValueError(f"cannot parse term {term!r}")
            coef = int(m.group(1)) if m.group(1) else 1
            exp = 0 if not m.group(2) else int(m.group(3) or 1)
            c[exp] += coef
        return cls(c)

    def __call__(self, q: int) -> int:
        return eval_poly(self, q)

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def coefficient_list(self) -> list[int]:
        """Dense coefficients, constant term first."""
        return [self.coeffs.get(e, 0) for e in range(self.degree + 1)]

    def term_count(self) -> int:
        return sum(self.coeffs.values())

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        c = Counter(self.coeffs)
        c.update(other.coeffs)
        return QPolynomial(c)

    def __eq__(self, other) -> bool:
        return isinstance(other, QPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs.items()))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, m in self.coeffs.items():
            c = "" if m == 1 and e else str(m)
            parts.append(c if e == 0 else f"{c}q" if e == 1 else f"{c}q^{e}")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"QPolynomial({self})"


def dims_to_poly(dims: Iterable[int]) -> QPolynomial:
    return QPolynomial.from_dims(dims)


def eval_poly(p: QPolynomial, q: int) -> int:
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    return sum(m * q**e for e, m in p.coeffs.items())


def mrd_size(k: int, n2: int, delta: int, q: int) -> int:
    if not 1 <= delta <= min(k, n2):
        raise ValueError(f"delta={delta} outside [1, min(k, n2)={min(k, n2)}]")
    return q ** (max(k, n2) * (min(k, n2) - delta + 1))


def compute_bound(N1: int, k: int, n2: int, delta: int, poly: QPolynomial, q: int) -> int:
    return N1 * mrd_size(k, n2, delta, q) + eval_poly(poly, q)


def poly_of_vectors(vectors: Sequence[IdentifyingVector], delta: int) -> QPolynomial:
    return dims_to_poly(dim_bound(diagram_from_vector(v), delta) for v in vectors)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

Key = tuple[int, int, int, int]  # (q, n, d, k)


class BoundRegistry:
    """Known lower bounds A_q(n, d, k) >= value, each with a provenance note."""

    def __init__(self):
        self.entries: dict[Key, tuple[int, str]] = {}

    def set(self, q: int, n: int, d: int, k: int, value: int, provenance: str) -> None:
        if value <= 0:
            raise ValueError("registry values must be positive")
        if not provenance:
            raise ValueError("registry entries need a provenance note")
        self.entries[(q, n, d, k)] = (int(value), provenance)

    def get(self, q: int, n: int, d: int, k: int) -> int | None:
        e = self.entries.get((q, n, d, k))
        return None if e is None else e[0]

    def __contains__(self, key: Key) -> bool:
        return key in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def remove(self, q: int, n: int, d: int, k: int) -> None:
        del self.entries[(q, n, d, k)]

    def dumps(self) -> str:
        lines = [f"A {q} {n} {d} {k} = {v} # {prov}" for (q, n, d, k), (v, prov) in sorted(self.entries.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "BoundRegistry":
        reg = cls()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            m = re.fullmatch(r"A\s+(\d+)\s+(\d+)\s+(\d+)\s+(\d+)\s*=\s*(\d+)\s*(?:#\s*(.*))?", line)
            if not m:
                raise ValueError(f"registry line {lineno} malformed: {raw!r}")
            q, n, d, k, v = (int(m.group(i)) for i in range(1, 6))
            reg.set(q, n, d, k, v, (m.group(6) or "").strip() or "unspecified")
        return reg


@dataclass(frozen=True)
class BoundRow:
    """A claimed bound A_q(n1+n2, d, k) >= value built on a base code A_q(n1, d, k)."""

    q: int
    n1: int
    n2: int
    d: int
    k: int
    value: int
    poly: QPolynomial
    source: str = ""

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    def mrd(self) -> int:
        return mrd_size(self.k, self.n2, self.d // 2, self.q)


@dataclass
class DerivationFlag:
    row: BoundRow
    reason: str


def derive_registry(rows: Iterable[BoundRow]) -> tuple[BoundRegistry, list[DerivationFlag]]:
    """Back-solve base sizes N1 = (value - poly(q)) / MRD size.

    Every row must divide exactly, and all rows sharing a base code
    (q, n1, d, k) must agree; offending rows are flagged and do not enter
    the registry.
    """
    solved: dict[Key, list[tuple[int, BoundRow]]] = {}
    flags: list[DerivationFlag] = []
    for row in rows:
        num = row.value - eval_poly(row.poly, row.q)
        den = row.mrd()
        if num <= 0 or num % den:
            flags.append(DerivationFlag(row, f"non-exact division ({num} / {den})"))
            continue
        solved.setdefault((row.q, row.n1, row.d, row.k), []).append((num // den, row))
    reg = BoundRegistry()
    for key, vals in sorted(solved.items()):
        distinct = Counter(v for v, _ in vals)
        if len(distinct) > 1:
            for v, row in vals:
                flags.append(DerivationFlag(row, f"inconsistent base size {v}; candidates {sorted(distinct)}"))
            continue
        ns = ",".join(str(r.n) for _, r in vals)
        reg.set(*key, vals[0][0], f"back-solved from A_{key[0]}(n,{key[2]},{key[3]}) for n={ns}")
    return reg, flags


# ---------------------------------------------------------------------------
# shipped data and table reproduction
# ---------------------------------------------------------------------------

DATA_PACKAGE = "cdcodes.data"
VECTOR_FILES = {12: "vectors_12_4_4.txt", 13: "vectors_13_4_4.txt", 14: "vectors_14_4_4.txt", 15: "vectors_15_4_4.txt"}


def data_text(name: str) -> str:
    return resources.files(DATA_PACKAGE).joinpath(name).read_text()


def load_vector_set(n: int) -> list[tuple[IdentifyingVector, dict[str, str]]]:
    return parse_vectors(data_text(VECTOR_FILES[n]))


@dataclass(frozen=True)
class TableEntry:
    q: int
    n: int
    d: int
    k: int
    new: int
    old: int


def load_table() -> list[TableEntry]:
    rows = csv.DictReader(io.StringIO(data_text("bound_table.csv")))
    return [TableEntry(*(int(r[c]) for c in ("q", "n", "d", "k", "new", "old"))) for r in rows]


def load_claims() -> list[dict]:
    return json.loads(data_text("claims.json"))


def table_rows(table: Sequence[TableEntry] | None = None, n1: int = 8) -> list[BoundRow]:
    """Table entries as :class:`BoundRow`, polynomials recomputed from the
    shipped identifying vectors."""
    table = load_table() if table is None else table
    polys: dict[int, QPolynomial] = {}
    out = []
    for t in table:
        if t.n not in polys:
            vecs = [v for v, _ in load_vector_set(t.n)]
            polys[t.n] = poly_of_vectors(vecs, t.d // 2)
        out.append(BoundRow(t.q, n1, t.n - n1, t.d, t.k, t.new, polys[t.n], VECTOR_FILES[t.n]))
    return out


def claim_rows(claims: Sequence[dict] | None = None) -> list[BoundRow]:
    claims = load_claims() if claims is None else claims
    out = []
    for c in claims:
        if "vectors" in c:
            vecs = [v for v, _ in parse_vectors(data_text(c["vectors"]))]
            poly, src = poly_of_vectors(vecs, c["d"] // 2), c["vectors"]
        else:
            poly, src = QPolynomial.parse(c["poly"]), "closed form"
        out.append(BoundRow(c["q"], c["n1"], c["n2"], c["d"], c["k"], int(c["value"]), poly, src))
    return out


def default_derivation_rows() -> list[BoundRow]:
    """Rows the shipped registry is derived from: the A_q(13..15,4,4) table and
    the A_2(10..12,4,3) chain."""
    return table_rows() + [r for r in claim_rows() if (r.d, r.k) == (4, 3)]


def default_registry() -> BoundRegistry:
    return BoundRegistry.loads(data_text("registry.txt"))


@dataclass
class ReportRow:
    section: str  # "table" or "claim"
    q: int
    n: int
    d: int
    k: int
    expected: int
    computed: int | None
    status: str  # match | mismatch | missing
    source: str = ""

    @property
    def match(self) -> bool:
        return self.status == "match"


@dataclass
class TableReport:
    rows: list[ReportRow] = field(default_factory=list)

    def section(self, name: str) -> list[ReportRow]:
        return [r for r in self.rows if r.section == name]

    def all_match(self, section: str | None = None) -> bool:
        rows = self.rows if section is None else self.section(section)
        return all(r.match for r in rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["q", "n", "d", "k", "expected", "computed", "match"])
        for r in self.rows:
            w.writerow([r.q, r.n, r.d, r.k, r.expected, "" if r.computed is None else r.computed, str(r.match).lower()])
        return buf.getvalue()

    def to_text(self) -> str:
        head = ("section", "A_q(n,d,k)", "expected", "computed", "status")
        body = [
            (r.section, f"A_{r.q}({r.n},{r.d},{r.k})", str(r.expected), "-" if r.computed is None else str(r.computed), r.status)
            for r in self.rows
        ]
        widths = [max(len(x[i]) for x in [head] + body) for i in range(len(head))]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths)
        lines = [fmt.format(*head), fmt.format(*("-" * w for w in widths))]
        lines += [fmt.format(*b) for b in body]
        lines = [ln.rstrip() for ln in lines]
        for name in ("table", "claim"):
            rows = self.section(name)
            if rows:
                lines.append(f"{name}: {sum(r.match for r in rows)}/{len(rows)} match")
        return "\n".join(lines) + "\n"


def _check(section: str, row: BoundRow, registry: BoundRegistry) -> ReportRow:
    N1 = registry.get(row.q, row.n1, row.d, row.k)
    if N1 is None:
        return ReportRow(section, row.q, row.n, row.d, row.k, row.value, None, "missing", f"no A_{row.q}({row.n1},{row.d},{row.k})")
    got = compute_bound(N1, row.k, row.n2, row.d // 2, row.poly, row.q)
    return ReportRow(section, row.q, row.n, row.d, row.k, row.value, got, "match" if got == row.value else "mismatch", row.source)


def reproduce_tables(registry: BoundRegistry, rows: Sequence[BoundRow] | None = None, claims: Sequence[BoundRow] | None = None) -> TableReport:
    """Recompute every tabulated bound and every scalar claim from the
    registry's base sizes and the dimension data."""
    rows = table_rows() if rows is None else rows
    claims = claim_rows() if claims is None else claims
    report = TableReport()
    report.rows += [_check("table", r, registry) for r in rows]
    report.rows += [_check("claim", r, registry) for r in claims]
    return report
