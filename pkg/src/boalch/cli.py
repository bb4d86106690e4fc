"""Command-line interface.

Exit codes: 0 when everything is EQUAL or valid, 1 on any NOT_EQUAL or
violation, 2 on any UNDECIDED, 3 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import quiver as qv
from . import repscheme as rs
from .dbracket import BracketTable, MissingEntry, Report, check_moment_map, check_quasi_poisson, qp_rhs, table_from_json, table_to_json
from .families import FIXTURES, CoefficientFamily, InvalidFamily, check_conditions, family_bracket_table, search_admissible, table1, verify_fixture
from .families.search import CLASSES
from .ncalg import DEFAULT_CHAIN, AlgElem, Kind, ParseError, Tensor, Verdict, decide, parse, parse_chain, parse_tensor, render
from .ncalg.syntax import default_resolver

EXIT = {Verdict.EQUAL: 0, Verdict.NOT_EQUAL: 1, Verdict.UNDECIDED: 2}
INPUT_ERROR = 3
BUILTIN_QUIVERS = {"interval": qv.interval_quiver, "triangle": qv.triangle_quiver, "table1": qv.triangle_quiver}


class InputError(Exception):
    pass


# -- inputs ------------------------------------------------------------------


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load_quiver(spec: Optional[str]) -> Optional[qv.ColoredQuiver]:
    if spec is None:
        return None
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if name not in BUILTIN_QUIVERS:
            raise InputError(f"unknown builtin quiver {name!r}; choose from {sorted(BUILTIN_QUIVERS)}")
        return BUILTIN_QUIVERS[name]()
    data = _read_json(spec)
    q = qv.from_json(data.get("quiver", data))
    problems = qv.validate(q)
    if problems:
        raise InputError(f"{spec}: invalid colored quiver: " + "; ".join(problems))
    return q


def builtin_table(name: str) -> BracketTable:
    """The generator table of a builtin, plus its verified reference entries."""
    if name == "table1":
        return family_bracket_table(3, table1())
    if name not in FIXTURES:
        raise InputError(f"unknown builtin table {name!r}; choose from {sorted(FIXTURES) + ['table1']}")
    fx = FIXTURES[name]()
    entries = dict(fx.table.entries)
    for e in fx.expected:
        a, b = _symbol(e.a), _symbol(e.b)
        if a.kind != Kind.V or b.kind != Kind.V:
            entries[(a, b)] = parse_tensor(e.value)
    return BracketTable(entries, fx.table.definitions, name=fx.table.name, metadata=fx.table.metadata)


def _symbol(text: str):
    (w,) = parse(text).terms
    return w[0]


def load_table(spec: Optional[str]) -> Optional[BracketTable]:
    if spec is None:
        return None
    if spec.startswith("builtin:"):
        return builtin_table(spec.split(":", 1)[1])
    data = _read_json(spec)
    try:
        return table_from_json(data.get("table", data))
    except (ValueError, ParseError) as exc:
        raise InputError(f"{spec}: {exc}") from exc


def default_quiver(args) -> qv.ColoredQuiver:
    q = load_quiver(args.quiver)
    if q is not None:
        return q
    if args.table and args.table.startswith("builtin:"):
        return load_quiver(args.table)
    if args.table:
        data = _read_json(args.table)
        if "quiver" in data:
            return qv.from_json(data["quiver"])
    raise InputError("--quiver is required")


def load_family_arg(spec: Optional[str]) -> CoefficientFamily:
    if spec is None:
        raise InputError("--family is required")
    if spec == "builtin:table1":
        return table1()
    if spec.startswith("builtin:"):
        raise InputError(f"unknown builtin family {spec!r}; only builtin:table1 is available")
    try:
        cf = CoefficientFamily.from_json(_read_json(spec))
        cf.validate()
    except InvalidFamily as exc:
        raise InputError(f"{spec}: {exc}") from exc
    return cf


def parse_expr(text: str, q: qv.ColoredQuiver):
    def resolver(kind, color, t, s):
        sym = default_resolver(kind, color, t, s)
        if kind != Kind.IDEMPOTENT and not qv.symbol_exists(q, sym):
            raise ValueError(f"symbol {sym!r} is not in the extended double of the quiver")
        return sym

    x = parse(text, resolver)
    bad = sorted({s.source for s in x.symbols() if s.kind == Kind.IDEMPOTENT and not 1 <= s.source <= q.n})
    if bad:
        raise InputError(f"{text!r}: idempotent e{bad[0]} is not a vertex of the quiver (1..{q.n})")
    return x


def _ints(text: str, what: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"{what} must be comma-separated integers, got {text!r}") from None


def _fractions(text: str, what: str) -> List[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{what} must be comma-separated rationals, got {text!r}") from None


def _chain(args):
    if not args.strategy:
        return DEFAULT_CHAIN
    try:
        return parse_chain(args.strategy)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _algebra(q: qv.ColoredQuiver, args):
    """The Boalch algebra of ``q`` with a lazily built representation oracle."""
    cache: Dict[str, list] = {}

    def oracle(x, y):
        if "reps" not in cache:
            lo, hi = _range(args)
            cache["reps"] = rs.default_reps(q, seeds=(args.seed, args.seed + 1, args.seed + 2), entry_range=range(lo, hi + 1))
        return rs.oracle_equal(x, y, cache["reps"])

    return qv.boalch_algebra(q, oracle=oracle)


def _range(args):
    lo, hi = _ints(args.range, "--range")
    if lo > hi:
        raise InputError("--range needs LO <= HI")
    return lo, hi


# -- output ------------------------------------------------------------------


def _emit(args, payload: dict, text_lines: Sequence[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _summary(report: Report) -> Dict[str, int]:
    return {v.value: report.count(v) for v in Verdict}


def _report(args, command: str, report: Report, extra: Optional[dict] = None) -> int:
    s = _summary(report)
    payload = {"command": command, "total": len(report), "summary": s, "verdict": report.verdict.value, "entries": report.to_json()}
    payload.update(extra or {})
    lines = []
    for e in report.entries:
        line = f"{e.label}: {e.verdict.value} [{e.decision.strategy.value}]"
        if e.decision.evidence_only:
            line += " (evidence only)"
        lines.append(line)
        if e.verdict != Verdict.EQUAL:
            lines.append(f"    lhs: {render(e.lhs)}")
            lines.append(f"    rhs: {render(e.rhs)}")
            w = e.decision.witness
            if w is not None:
                lines.append(f"    witness: {render(w) if isinstance(w, (AlgElem, Tensor)) else w}")
    lines.append(f"{command}: {s['EQUAL']}/{len(report)} EQUAL, {s['NOT_EQUAL']} NOT_EQUAL, {s['UNDECIDED']} UNDECIDED")
    _emit(args, payload, lines)
    return EXIT[report.verdict]


# -- commands ----------------------------------------------------------------


def cmd_validate_quiver(args) -> int:
    if args.quiver is None:
        raise InputError("--quiver is required")
    if args.quiver.startswith("builtin:"):
        q = load_quiver(args.quiver)
    else:
        data = _read_json(args.quiver)
        q = qv.from_json(data.get("quiver", data))
    problems = qv.validate(q)
    lines = ["valid"] if not problems else [f"invalid: {p}" for p in problems]
    _emit(args, {"command": "validate-quiver", "valid": not problems, "problems": problems}, lines)
    return 1 if problems else 0


def cmd_build_boalch(args) -> int:
    q = default_quiver(args)
    table = load_table(args.table)
    if args.dump:
        payload = {"quiver": qv.to_json(q)}
        if table is not None:
            payload["table"] = table_to_json(table)
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0
    ext = qv.extended_double(q)
    rels = qv.boalch_relations(q)
    defs = qv.derived_generators(q)
    payload = {
        "command": "build-boalch",
        "symbols": [repr(s) for s in ext.symbols],
        "relations": [{"label": r.label, "lhs": render(r.lhs), "rhs": render(r.rhs)} for r in rels.all_components()],
        "derived": [{"symbol": repr(d.symbol), "value": render(d.value)} for d in defs],
    }
    lines = ["generators: " + " ".join(payload["symbols"])]
    lines += [f"{r['label']}: {r['lhs']} = {r['rhs']}" for r in payload["relations"]]
    lines += [f"{d['symbol']} = {d['value']}" for d in payload["derived"]]
    _emit(args, payload, lines)
    return 0


def _need_table(args) -> BracketTable:
    t = load_table(args.table)
    if t is None:
        raise InputError("--table is required")
    return t


def cmd_bracket(args) -> int:
    q = default_quiver(args)
    t = _need_table(args)
    a, b = parse_expr(args.a, q), parse_expr(args.b, q)
    if not isinstance(a, AlgElem) or not isinstance(b, AlgElem):
        raise InputError("bracket arguments must be algebra elements, not tensors")
    value = t.dbl(a, b)
    _emit(args, {"command": "bracket", "a": args.a, "b": args.b, "value": render(value)}, [render(value)])
    return 0


def cmd_triple(args) -> int:
    q = default_quiver(args)
    t = _need_table(args)
    elems = [parse_expr(x, q) for x in (args.a, args.b, args.c)]
    if not all(isinstance(x, AlgElem) for x in elems):
        raise InputError("triple bracket arguments must be algebra elements")
    value = t.triple(*elems)
    payload = {"command": "triple", "args": [args.a, args.b, args.c], "value": render(value)}
    lines = [render(value)]
    code = 0
    if args.qp:
        rhs = qp_rhs(*elems, q.vertices)
        d = decide(value, rhs, _algebra(q, args), _chain(args))
        payload.update(qp=render(rhs), verdict=d.verdict.value, strategy_used=d.strategy.value, evidence_only=d.evidence_only)
        lines.append(f"quasi-Poisson value: {render(rhs)}")
        lines.append(f"{d.verdict.value} [{d.strategy.value}]")
        code = EXIT[d.verdict]
    _emit(args, payload, lines)
    return code


def _v_generators(t: BracketTable):
    return [s for s in t.generators if s.kind == Kind.V]


def cmd_check_qp(args) -> int:
    q = default_quiver(args)
    t = _need_table(args)
    gens = _v_generators(t)
    t0 = time.perf_counter()
    report = check_quasi_poisson(t, gens, q.vertices, _algebra(q, args), _chain(args))
    return _report(args, "check-qp", report, {"seconds": round(time.perf_counter() - t0, 3)} if args.timing else None)


def _moment_map(q: qv.ColoredQuiver):
    """Ordered product of the loops at each vertex, and its inverse."""
    phi, phi_inv = {}, {}
    for s in q.vertices:
        loops = [c for c in q.colors if s in c.vertices]
        g = AlgElem.e(s)
        gi = AlgElem.e(s)
        for c in loops:
            g = g * AlgElem.symbol(qv._g(c, s))
        for c in reversed(loops):
            gi = gi * AlgElem.symbol(qv._g(c, s, True))
        phi[s], phi_inv[s] = g, gi
    return phi, phi_inv


def cmd_check_moment(args) -> int:
    q = default_quiver(args)
    t = _need_table(args)
    phi, phi_inv = _moment_map(q)
    report = check_moment_map(phi, t, _v_generators(t), _algebra(q, args), phi_inv=phi_inv, chain=_chain(args))
    return _report(args, "check-moment", report)


def cmd_check_conditions(args) -> int:
    cf = load_family_arg(args.family)
    t0 = time.perf_counter()
    rep = check_conditions(cf)
    elapsed = time.perf_counter() - t0
    payload = rep.to_json()
    payload["command"] = "check-conditions"
    if args.timing:
        payload["seconds"] = round(elapsed, 3)
    lines = [f"{e.lemma} {e.subcase} {e.indices}: {e.condition} -> {e.value} VIOLATED" for e in rep.violations]
    lines.append(f"check-conditions: {len(rep.entries) - len(rep.violations)}/{len(rep.entries)} satisfied, {len(rep.violations)} violations")
    _emit(args, payload, lines)
    return 0 if rep.ok else 1


def cmd_verify_fixtures(args) -> int:
    names = sorted(FIXTURES) if not args.table else [args.table.split(":", 1)[1] if args.table.startswith("builtin:") else args.table]
    report = Report()
    corrections = []
    for name in names:
        if name not in FIXTURES:
            raise InputError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}")
        fx = FIXTURES[name]()
        part = verify_fixture(fx, _algebra(fx.quiver, args), _chain(args))
        for e in part.entries:
            e.label = f"{name} {e.label}"
        report.entries += part.entries
        corrections += [{"fixture": name, "a": a, "b": b, "printed": p, "corrected": c} for a, b, p, c in fx.printed_corrections()]
    return _report(args, "verify-fixtures", report, {"corrections": corrections})


def cmd_search(args) -> int:
    grid = {}
    for c in CLASSES:
        raw = getattr(args, c)
        if raw is not None:
            grid[c] = _fractions(raw, f"--{c}")
    found = search_admissible(args.n, grid, limit=args.limit, verify=not args.no_verify)
    payload = {"command": "search", "n": args.n, "count": len(found), "families": [cf.to_json() for cf in found]}
    lines = []
    for k, cf in enumerate(found, 1):
        parts = []
        for name in CLASSES:
            m = getattr(cf, name)
            parts += [f"{name}{key}={v}" for key, v in sorted(m.items())]
        lines.append(f"#{k}: " + (" ".join(parts) or "all zero"))
    lines.append(f"search: {len(found)} admissible families")
    _emit(args, payload, lines)
    return 0


def cmd_rep_verify(args) -> int:
    q = default_quiver(args)
    dims = _ints(args.dims, "--dims") if args.dims else [1] * q.n
    lo, hi = _range(args)
    try:
        r = rs.random_rep(q, dims, args.seed, range(lo, hi + 1))
    except (ValueError, rs.RepresentationError) as exc:
        raise InputError(str(exc)) from exc
    residuals = rs.relation_residuals(r)
    bad = sorted(k for k, m in residuals.items() if not rs.is_zero(m))
    expected = rs.dimension_count(q, r.dims)
    payload = {
        "command": "rep-verify",
        "dims": list(r.dims),
        "seed": r.seed,
        "digest": r.digest(),
        "relations": len(residuals),
        "nonzero_residuals": bad,
        "sampled": r.sampled,
        "dimension_count": expected,
        "representation": rs.to_json(r),
    }
    lines = [f"representation dims={r.dims} seed={r.seed} digest={r.digest()}"]
    lines.append(f"relations: {len(residuals) - len(bad)}/{len(residuals)} exact zero")
    lines += [f"    nonzero: {k}" for k in bad]
    lines.append(f"free parameters: sampled {r.sampled}, dimension count {expected}")
    failed = bool(bad) or r.sampled != expected
    t = load_table(args.table)
    if t is not None:
        gens = _v_generators(t)
        trace_fail = []
        for a in gens:
            for b in gens:
                ok, _, _ = rs.trace_bracket_check(AlgElem.symbol(a), AlgElem.symbol(b), t, r)
                if not ok:
                    trace_fail.append(f"{a!r},{b!r}")
        payload["trace_checks"] = len(gens) ** 2
        payload["trace_failures"] = trace_fail
        lines.append(f"trace bracket identity: {len(gens) ** 2 - len(trace_fail)}/{len(gens) ** 2} exact")
        failed = failed or bool(trace_fail)
    _emit(args, payload, lines)
    return 1 if failed else 0


COMMANDS = {
    "validate-quiver": cmd_validate_quiver,
    "build-boalch": cmd_build_boalch,
    "bracket": cmd_bracket,
    "triple": cmd_triple,
    "check-qp": cmd_check_qp,
    "check-moment": cmd_check_moment,
    "check-conditions": cmd_check_conditions,
    "verify-fixtures": cmd_verify_fixtures,
    "search": cmd_search,
    "rep-verify": cmd_rep_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiver", help="quiver JSON file or builtin:NAME")
    common.add_argument("--table", help="bracket table: builtin:NAME or a JSON file")
    common.add_argument("--family", help="coefficient family JSON file or builtin:table1")
    common.add_argument("--dims", help="dimension vector d1,d2,...")
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--range", default="-3,3", help="integer entry range LO,HI")
    common.add_argument("--strategy", help="equality strategy chain, e.g. STRUCTURAL,EXPANDED,ORACLE")
    common.add_argument("--jobs", type=int, default=1, help="accepted for compatibility; checks run in one process")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--timing", action="store_true", help="include wall-clock time in the report")

    p = argparse.ArgumentParser(prog="boalch", description="Double quasi-Poisson brackets on Boalch algebras.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate-quiver", parents=[common])
    b = sub.add_parser("build-boalch", parents=[common])
    b.add_argument("--dump", action="store_true", help="print the quiver (and table) as re-importable JSON")
    b = sub.add_parser("bracket", parents=[common])
    b.add_argument("a")
    b.add_argument("b")
    b = sub.add_parser("triple", parents=[common])
    b.add_argument("a")
    b.add_argument("b")
    b.add_argument("c")
    b.add_argument("--qp", action="store_true", help="compare with the quasi-Poisson value")
    for name in ("check-qp", "check-moment", "check-conditions", "verify-fixtures", "rep-verify"):
        sub.add_parser(name, parents=[common])
    b = sub.add_parser("search", parents=[common])
    b.add_argument("--n", type=int, default=3)
    for c in CLASSES:
        b.add_argument(f"--{c}", help=f"comma-separated values for {c} (default 0)")
    b.add_argument("--limit", type=int)
    b.add_argument("--no-verify", action="store_true", help="skip the brute-force recheck of each hit")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else 0
    try:
        return COMMANDS[args.command](args)
    except (InputError, ParseError, qv.InvalidQuiver, InvalidFamily, MissingEntry) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
