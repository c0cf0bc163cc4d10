"""Command-line entry point: ``python -m confgsb <command> ...``.

Exit codes: 0 success, 1 mathematical failure (verification or PBW
mismatch, invalid Lie data, completion not converging), 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .basis import Bounds, PATTERNS, graded_count, enumerate_terminal, hilbert, pbw_check
from .confluence import RoundCapExceeded, complete, verify_gsb
from .elements import format_element, parse_element
from .lie import LieDataError, load
from .presets import (PRESET_IDS, U2_VARIANTS, preset_AX, preset_bfk, preset_conf_module, preset_U2,
                      preset_U3)
from .rewrite import NonTermination, normal_form, reduce_once
from .rules import RuleError, RuleSet, parse_rules, read_header
from .terms import ORDERS, ParseError


class UsageError(Exception):
    pass


def _lie(args):
    if not args.lie:
        raise UsageError("--lie is required for this preset")
    try:
        return load(args.lie)
    except FileNotFoundError as exc:
        raise UsageError(f"no such Lie data file: {args.lie}") from exc


def build_preset(preset: str, args) -> RuleSet:
    n = args.nmax
    if preset == "bfk":
        return preset_bfk(n)
    if preset == "conf":
        gens = [g.strip() for g in (args.gens or "a").split(",") if g.strip()]
        return preset_conf_module(gens, args.N or 2, n)
    if preset == "ax":
        return preset_AX(_lie(args), n)
    if preset == "u3":
        return preset_U3(_lie(args), max(n, 3))
    if preset == "u2":
        return preset_U2(_lie(args), max(n, 3), args.variant)
    raise UsageError(f"unknown preset {preset!r}")


def load_rules_file(path: str, args) -> RuleSet:
    """A rules file: optional ``# preset:`` header plus ``lhs -> rhs`` lines.

    With a preset header the rules are added on top of that preset's
    families; otherwise ``# order:`` / ``# generators:`` headers define a
    finite rule set.
    """
    p = Path(path)
    if not p.exists():
        raise UsageError(f"no such rules file: {path}")
    text = p.read_text()
    head = read_header(text)
    preset = _preset_header(text)
    if preset:
        rs = build_preset(preset, args)
    else:
        order_cls = ORDERS.get(head.get("order", "envelope"))
        if order_cls is None:
            raise ParseError(f"unknown order {head.get('order')!r}")
        gens = head.get("generators", "").split()
        if not gens:
            raise ParseError("rules file needs a '# generators:' header")
        rs = RuleSet(order_cls(gens, central=head.get("central") or None), name=p.stem)
    for r in parse_rules(text, rs.order, name=p.stem):
        rs.add(r)
    return rs


def _preset_header(text: str) -> str | None:
    for raw in text.splitlines():
        s = raw.strip()
        if s.startswith("#") and s[1:].strip().startswith("preset:"):
            return s[1:].strip()[len("preset:"):].strip()
    return None


def get_rules(args) -> RuleSet:
    if getattr(args, "rules", None):
        return load_rules_file(args.rules, args)
    if not args.preset:
        raise UsageError("either --preset or --rules is required")
    return build_preset(args.preset, args)


def provenance(args, rs: RuleSet | None = None) -> dict:
    d = {"tool": "confgsb", "version": __version__, "command": args.command}
    for k in ("preset", "lie", "rules", "nmax", "deg", "index", "dpow", "rounds", "seed",
              "variant", "N", "gens"):
        v = getattr(args, k, None)
        if k == "variant" and getattr(args, "preset", None) != "u2":
            continue
        if v is not None:
            d[k] = Path(v).name if k in ("lie", "rules") else v
    if rs is not None:
        d["order"] = rs.order.name
        d["rule_counts"] = {"algebra": len(rs.algebra), "module": len(rs.module),
                            "explicit": len(rs.extra)}
    return d


def emit(obj, args) -> None:
    if args.format == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(_text(obj))


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_text(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {v}"
                         for v in obj)
    return f"{pad}{obj}"


# ---------------------------------------------------------------------------
# commands

def cmd_validate(args) -> int:
    if not args.lie:
        raise UsageError("validate needs --lie")
    try:
        data = load(args.lie)
    except FileNotFoundError as exc:
        raise UsageError(f"no such Lie data file: {args.lie}") from exc
    except LieDataError as exc:
        emit({"valid": False, "error": type(exc).__name__, "detail": str(exc)}, args)
        return 1
    emit({"valid": True, "basis": list(data.basis), "central": data.central,
          "nonzero_brackets": len(data.brackets) // 2, "nonzero_form_entries": len(data.form)},
         args)
    return 0


def _expr(args, rs):
    if not args.expr:
        raise UsageError("--expr is required")
    return parse_element(args.expr)


def cmd_nf(args) -> int:
    rs = get_rules(args)
    x = _expr(args, rs)
    nf, tr = normal_form(x, rs, strategy=args.strategy, seed=args.seed, trace=True,
                         budget=args.budget)
    if args.format == "json":
        out = {"input": format_element(x, rs.order), "normal_form": format_element(nf, rs.order),
               "steps": len(tr)}
        if args.trace:
            out["trace"] = [s.format() for s in tr]
        emit(out, args)
    else:
        print(format_element(nf, rs.order))
        if args.trace:
            for s in tr:
                print("  " + s.format())
    return 0


def cmd_reduce(args) -> int:
    rs = get_rules(args)
    x = _expr(args, rs)
    y = reduce_once(x, rs, strategy=args.strategy, seed=args.seed)
    print("terminal" if y is None else format_element(y, rs.order))
    return 0


def cmd_verify(args) -> int:
    rs = get_rules(args)
    index = args.index if args.index is not None else args.nmax
    rep = verify_gsb(rs, args.deg, index, jobs=args.jobs)
    out = {"provenance": provenance(args, rs), "report": rep.to_dict(rs.order, args.timing)}
    emit(out, args)
    return 0 if rep.ok else 1


def cmd_complete(args) -> int:
    rs = get_rules(args)
    index = args.index if args.index is not None else args.nmax
    status = 0
    try:
        out, log = complete(rs, args.deg, index, args.rounds)
    except RoundCapExceeded as exc:
        out, log, status = exc.rules, exc.log, 1
    text = rules_file_text(out, args)
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text, end="")
    if args.log:
        payload = {"provenance": provenance(args, out), "converged": status == 0,
                   "log": log.to_dict(out.order)}
        Path(args.log).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        print(f"# rounds: {log.rounds}, added: {len(log.added)}, removed: {len(log.removed)}",
              file=sys.stderr)
    return status


def rules_file_text(rs: RuleSet, args) -> str:
    lines = []
    if getattr(args, "preset", None) and not getattr(args, "rules", None):
        lines.append(f"# preset: {args.preset}")
    lines.append(f"# order: {rs.order.name}")
    lines.append(f"# generators: {' '.join(rs.order.names)}")
    if rs.order.central:
        lines.append(f"# central: {rs.order.central}")
    for r in sorted(rs.extra.values(), key=rs.rule_sort_key):
        lines.append(f"{r.format(rs.order)}    # {r.name}")
    return "\n".join(lines) + "\n"


def _bounds(args) -> Bounds:
    index = args.index if args.index is not None else args.nmax
    return Bounds(args.deg, args.dpow, index).check()


def cmd_basis(args) -> int:
    rs = get_rules(args)
    b = _bounds(args)
    mons = enumerate_terminal(rs, None, b)
    counts = graded_count(mons)
    if args.format == "json":
        emit({"provenance": provenance(args, rs), "bounds": list(b),
              "counts": {str(k): v for k, v in counts.items()},
              "monomials": [str(m) for m in mons]}, args)
    elif args.show == "count":
        for d, c in counts.items():
            print(f"{d}: {c}")
    elif args.show == "hilbert":
        print(hilbert(counts))
    else:
        for m in mons:
            print(m)
    return 0


def cmd_pbw(args) -> int:
    data = _lie(args)
    if args.N not in (2, 3):
        raise UsageError("--N must be 2 or 3")
    rep = pbw_check(data, args.N, _bounds(args))
    emit({"provenance": provenance(args), "report": rep.to_dict()}, args)
    return 0 if rep.ok else 1


def cmd_selftest(args) -> int:
    from .selftest import run_selftest
    results = run_selftest(quick=args.quick, rules_file=args.rules)
    failed = [r for r in results if not r["passed"]]
    if args.format == "json":
        # wall times are left out so that reports are reproducible byte for byte
        shown = [{k: v for k, v in r.items() if k != "seconds"} for r in results]
        emit({"results": shown, "failed": len(failed)}, args)
    else:
        for r in results:
            print(f"{'PASS' if r['passed'] else 'FAIL'}  {r['name']}  {r['detail']}"
                  f"  ({r['seconds']} s)")
        print(f"{len(results) - len(failed)}/{len(results)} passed")
    return 1 if failed else 0


COMMANDS = {"validate": cmd_validate, "nf": cmd_nf, "reduce": cmd_reduce, "verify": cmd_verify,
            "complete": cmd_complete, "basis": cmd_basis, "pbw": cmd_pbw,
            "selftest": cmd_selftest}


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="confgsb", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, rules=True):
        p.add_argument("--preset", choices=PRESET_IDS)
        p.add_argument("--lie", help="Lie algebra file (.toml/.json) or a shipped name")
        if rules:
            p.add_argument("--rules", help="rules file (lhs -> rhs lines)")
        p.add_argument("--nmax", type=int, default=6, help="index cap for rule families")
        p.add_argument("--variant", choices=U2_VARIANTS, default="corrected")
        p.add_argument("--gens", help="generators for the conf preset, comma separated")
        p.add_argument("--N", type=int, default=None, help="locality (conf preset, pbw)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("validate", help="validate a Lie algebra file")
    p.add_argument("--lie")
    p.add_argument("--format", choices=("text", "json"), default="text")
    for name in ("nf", "reduce"):
        p = sub.add_parser(name, help="normal form" if name == "nf" else "one rewriting step")
        common(p)
        p.add_argument("--expr", required=True)
        p.add_argument("--strategy", choices=("leftmost-largest", "random"),
                       default="leftmost-largest")
        if name == "nf":
            p.add_argument("--trace", action="store_true")
            p.add_argument("--budget", type=int, default=10 ** 6)
    p = sub.add_parser("verify", help="check every composition within caps")
    common(p)
    p.add_argument("--deg", type=int, default=5, help="ambiguity length cap")
    p.add_argument("--index", type=int, default=None, help="letter index cap (default --nmax)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include wall time in the report")
    p = sub.add_parser("complete", help="completion; prints the added rules")
    common(p)
    p.add_argument("--deg", type=int, default=6)
    p.add_argument("--index", type=int, default=None)
    p.add_argument("--rounds", type=int, default=20)
    p.add_argument("--out", help="write the rules file here")
    p.add_argument("--log", help="write the JSON log here")
    p = sub.add_parser("basis", help="terminal monomials within bounds")
    common(p)
    p.add_argument("--deg", type=int, default=3, help="x-degree bound")
    p.add_argument("--dpow", type=int, default=2)
    p.add_argument("--index", type=int, default=None)
    p.add_argument("--show", choices=("list", "count", "hilbert"), default="list")
    p = sub.add_parser("pbw", help="compare terminal counts with the commutative basis")
    common(p, rules=False)
    p.add_argument("--deg", type=int, default=3)
    p.add_argument("--dpow", type=int, default=2)
    p.add_argument("--index", type=int, default=None)
    p.set_defaults(N=3)
    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--rules", help="also load and verify this rules file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return ap


def run(argv=None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, RuleError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (NonTermination, LieDataError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
