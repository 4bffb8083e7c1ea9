"""Command-line front end: ``cdc <subcommand> ...``.

Exit codes: 0 success, 1 validation failure, 2 usage or input error,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .bounds import BoundRegistry, default_derivation_rows, default_registry, derive_registry, reproduce_tables
from .construction import ConstructionError, ConstructionSpec, general_construct, li_construct, lifted_mrd_sc_set, verify_cdc
from .ferrers import diagram_from_vector, dim_bound, search_fdrm
from .field import field_of_order
from .greedy import check_parameters, greedy_select, validate_selection
from .mrd import EXHAUSTIVE_BUDGET, BudgetExceeded, gabidulin
from .subspace import IdentifyingVector, format_code, format_vectors, parse_code, parse_vectors

OK, INVALID, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _field(q: int):
    try:
        return field_of_order(q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _params(a) -> None:
    try:
        check_parameters(a.n1, a.n2, a.k, a.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_dim(a) -> int:
    try:
        v = IdentifyingVector(a.vector)
    except ValueError as exc:
        raise UsageError(f"malformed vector {a.vector!r}: {exc}") from None
    if v.weight == 0:
        raise UsageError("vector has no ones")
    F = diagram_from_vector(v)
    print(f"rows={F} dim={dim_bound(F, a.delta)}")
    return OK


def cmd_greedy(a) -> int:
    _params(a)
    _field(a.q)
    res = greedy_select(a.n1, a.n2, a.k, a.d, prefix_min=a.prefix_min)
    poly = res.poly()
    head = [
        f"# greedy selection n1={a.n1} n2={a.n2} k={a.k} d={a.d} prefix_min={a.prefix_min}",
        f"# candidates={res.candidate_count} selected={len(res.vectors)}",
    ]
    text = "\n".join(head) + "\n" + format_vectors(res.vectors, res.dims)
    summary = f"candidates={res.candidate_count} selected={len(res.vectors)} q={a.q} poly={poly.coefficient_list()} value@q={poly(a.q)}"
    if a.out:
        _write(a.out, text)
    else:
        sys.stdout.write(text)
    print(summary)
    return OK


def cmd_verify_set(a) -> int:
    _field(a.q)
    try:
        entries = parse_vectors(_read(a.file))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not entries:
        raise UsageError(f"{a.file} contains no vectors")
    vecs = [v for v, _ in entries]
    n = vecs[0].n
    n2 = a.n2 if a.n2 is not None else n - a.n1
    k = a.k if a.k is not None else vecs[0].weight
    claimed = [int(notes["dim"]) if "dim" in notes else None for _, notes in entries]
    prefix = a.d // 2 if a.li else 0
    rep = validate_selection(vecs, a.n1, n2, k, a.d, claimed_dims=claimed, prefix_min=prefix)
    for i, (v, dm) in enumerate(zip(vecs, rep.dims), 1):
        print(f"{i:>4} {v.bits} dim={dm}")
    for viol in rep.violations:
        idx = ",".join(str(i + 1) for i in viol.indices)
        print(f"violation {viol.kind} [{idx}]: {viol.detail}")
    print(f"vectors={len(vecs)} violations={len(rep.violations)} poly={rep.poly().coefficient_list()} value@q={rep.poly()(a.q)}")
    return OK if rep.ok else INVALID


def _sc_set(path: str | None, k: int, n: int, d: int, field, label: str):
    if path is None:
        return lifted_mrd_sc_set(k, n, d, field), f"lifted Gabidulin k={k} n={n} d={d}"
    try:
        code, _ = parse_code(_read(path))
    except ValueError as exc:
        raise UsageError(f"{label}: {exc}") from None
    if code and code[0].field is not field:
        raise UsageError(f"{label}: code is over GF({code[0].field.q}), expected GF({field.q})")
    return [U.basis for U in code], f"file {Path(path).name}"


def cmd_construct(a) -> int:
    _params(a)
    if a.n1 < a.k or a.n2 < a.k:
        raise UsageError(f"need n1 >= k and n2 >= k, got n1={a.n1}, n2={a.n2}, k={a.k}")
    field = _field(a.q)
    li = a.mode == "li"
    if li and a.k < a.d:
        print(f"error: three-part construction needs k >= d, got k={a.k}, d={a.d}", file=sys.stderr)
        return INVALID
    h = a.d // 2
    rank_code = gabidulin(a.k, a.n2, h, field)
    if rank_code.size > a.budget:
        raise BudgetExceeded(f"rank code has {rank_code.size} codewords, budget is {a.budget}")
    U1, src1 = _sc_set(a.u1, a.k, a.n1, a.d, field, "--u1")
    U2, src2 = _sc_set(a.u2, a.k, a.n2, a.d, field, "--u2") if li else ([], "")
    sel = greedy_select(a.n1, a.n2, a.k, a.d, prefix_min=h if li else 0)
    selection = []
    for v in sel.vectors:
        code = search_fdrm(diagram_from_vector(v), h, field, a.restarts, a.seed, budget=a.budget)
        selection.append((v, code))
    predicted = len(U1) * rank_code.size + len(U2) + sum(c.size for _, c in selection)
    if predicted > a.budget:
        raise BudgetExceeded(f"code would have {predicted} codewords, budget is {a.budget}")
    spec = ConstructionSpec(a.n1, a.n2, a.k, a.d, field, U1, rank_code, selection)
    code = li_construct(spec, U2, budget=a.budget) if li else general_construct(spec, budget=a.budget)

    s = code.sizes
    lifted_terms = "+".join(f"{a.q}^{c.dimension}" for _, c in selection) or "0"
    formula = f"{s['N1']}*{s['NR']}" + (f"+{s['N2']}" if li else "") + f"+({lifted_terms})"
    prov = [
        f"# construction mode={a.mode} q={a.q} n1={a.n1} n2={a.n2} k={a.k} d={a.d} seed={a.seed} restarts={a.restarts}",
        f"# U1: {src1}, {s['N1']} matrices; rank code: Gabidulin {a.k}x{a.n2} delta={h}, {s['NR']} codewords",
    ]
    if li:
        prov.append(f"# U2: {src2}, {s['N2']} matrices")
    for v, c in selection:
        prov.append(f"# lifted v={v.bits} dim={c.dimension} target={c.target} restart={c.restart}")
    prov += [f"# note: {n}" for n in code.notes]
    prov.append(f"# size={len(code)} formula={formula}")
    text = "\n".join(prov) + "\n" + format_code(code.codewords, code.tags)
    if a.out:
        _write(a.out, text)
    for n in code.notes:
        print(f"note: {n}")
    print(f"size={len(code)} formula={formula}={code.formula_size()}")
    if a.verify:
        rep = verify_cdc(code, a.k, a.d, budget=a.pair_budget, seed=a.seed)
        sys.stdout.write(rep.to_text())
        return OK if rep.ok else INVALID
    return OK


def cmd_checkdist(a) -> int:
    try:
        code, _ = parse_code(_read(a.codefile))
    except ValueError as exc:
        raise UsageError(f"{a.codefile}: {exc}") from None
    k = a.k if a.k is not None else code[0].k
    rep = verify_cdc(code, k, a.d, budget=a.pair_budget, seed=a.seed)
    sys.stdout.write(rep.to_text())
    return OK if rep.ok else INVALID


def cmd_tables(a) -> int:
    reg = BoundRegistry.loads(_read(a.registry)) if a.registry else default_registry()
    rep = reproduce_tables(reg)
    sys.stdout.write(rep.to_text())
    if a.out:
        _write(a.out, rep.to_csv())
    return OK if rep.all_match("table") else INVALID


def cmd_derive_registry(a) -> int:
    reg, flags = derive_registry(default_derivation_rows())
    text = "# base-code lower bounds A q n d k = value # provenance\n" + reg.dumps()
    _write(a.out, text)
    for f in flags:
        r = f.row
        print(f"flag A_{r.q}({r.n},{r.d},{r.k}): {f.reason}", file=sys.stderr)
    return OK if not flags else INVALID


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cdc", description="Constant-dimension subspace code toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def params(sp, n2_required=True, k_required=True):
        sp.add_argument("--n1", type=int, required=True)
        sp.add_argument("--n2", type=int, required=n2_required)
        sp.add_argument("--d", type=int, required=True)
        sp.add_argument("--k", type=int, required=k_required)
        sp.add_argument("--q", type=int, default=2)

    sp = sub.add_parser("dim", help="Ferrers diagram and dimension bound of an identifying vector")
    sp.add_argument("vector")
    sp.add_argument("--delta", type=int, default=2)
    sp.set_defaults(func=cmd_dim)

    sp = sub.add_parser("greedy", help="greedy identifying-vector selection")
    params(sp)
    sp.add_argument("--prefix-min", type=int, default=0, help="minimum ones in the first n1 positions")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_greedy)

    sp = sub.add_parser("verify-set", help="validate an identifying-vector file")
    sp.add_argument("file")
    params(sp, n2_required=False, k_required=False)
    sp.add_argument("--li", action="store_true", help="also require d/2 ones in the first n1 positions")
    sp.set_defaults(func=cmd_verify_set)

    sp = sub.add_parser("construct", help="assemble an explicit code")
    params(sp)
    sp.add_argument("--mode", choices=["general", "li"], default="general")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--restarts", type=int, default=100)
    sp.add_argument("--budget", type=int, default=EXHAUSTIVE_BUDGET, help="maximum codewords materialised")
    sp.add_argument("--pair-budget", type=int, default=10**8)
    sp.add_argument("--u1", help="code file supplying the first SC-representation set")
    sp.add_argument("--u2", help="code file supplying the second SC-representation set (li mode)")
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("checkdist", help="verify a code file")
    sp.add_argument("codefile")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--k", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--pair-budget", "--budget", dest="pair_budget", type=int, default=10**8)
    sp.set_defaults(func=cmd_checkdist)

    sp = sub.add_parser("tables", help="reproduce the bound tables")
    sp.add_argument("--registry")
    sp.add_argument("--out", help="CSV output path")
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("derive-registry", help="back-solve base-code sizes from the shipped tables")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_derive_registry)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(a, "d", None) is not None and a.d % 2:
        print(f"error: d must be even, got d={a.d}", file=sys.stderr)
        return USAGE
    try:
        return a.func(a)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except ConstructionError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
