"""Command-line front end.

Exit codes: 0 success, 1 semantic error (unstratifiable program, allowability
or composition violations, failed checks, oracle mismatch), 2 parse or I/O
error, 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import sys

from . import components, engine, justify, meta, oracle
from .errors import IndsemError, ParseError, ResourceLimitError
from .parser import Program, parse_paramset, parse_program, parse_query
from .terms import is_ground, term_to_str, variables_of


def _add_common(p: argparse.ArgumentParser, facts=True):
    if facts:
        p.add_argument("--facts", action="append", default=[], metavar="FILE",
                       help="parameter-set file (repeatable; union)")
    p.add_argument("--wrap", metavar="FUNCTOR",
                   help="wrap every literal with FUNCTOR before evaluation")
    p.add_argument("--exclude-wrap", action="append", default=[], metavar="NAME/ARITY",
                   help="leave NAME/ARITY literals unwrapped (default: clause/2)")
    p.add_argument("--meta", action="store_true",
                   help="include builtin rules, call/1, and clause/2 facts "
                        "synthesized from #object clauses")
    p.add_argument("--max-atoms", type=int, default=engine.DEFAULT_MAX_ATOMS)
    p.add_argument("--max-iters", type=int, default=engine.DEFAULT_MAX_ITERS)
    p.add_argument("--max-depth", type=int, default=10_000)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="indsem",
        description="Evaluate logic programs as parameterized inductive definitions.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("model", help="compute and dump the least model")
    p.add_argument("programs", nargs="+", metavar="PROGRAM")
    _add_common(p)
    p.add_argument("--oracle", action="store_true",
                   help="cross-check the model against the brute-force oracle")

    p = sub.add_parser("query", help="enumerate answers for a query")
    p.add_argument("programs", nargs="+", metavar="PROGRAM")
    p.add_argument("-q", "--query", required=True)
    _add_common(p)
    p.add_argument("--oracle", action="store_true")

    p = sub.add_parser("explain", help="print a justification for a ground goal")
    p.add_argument("programs", nargs="+", metavar="PROGRAM")
    p.add_argument("-q", "--query", required=True)
    _add_common(p)

    p = sub.add_parser("strata", help="print the stratification")
    p.add_argument("programs", nargs="+", metavar="PROGRAM")
    _add_common(p)

    p = sub.add_parser("check", help="allowability, stratification, and "
                                     "composition-precondition report")
    p.add_argument("programs", nargs="+", metavar="PROGRAM",
                   help="one program, or upper and lower for a composition check")
    _add_common(p)

    p = sub.add_parser("compose", help="evaluate upper over the lower component's output")
    p.add_argument("upper", metavar="UPPER")
    p.add_argument("lower", metavar="LOWER")
    _add_common(p)
    p.add_argument("--verify-union", action="store_true",
                   help="also evaluate the union program and require agreement")

    p = sub.add_parser("repl", help="interactive query loop")
    p.add_argument("programs", nargs="+", metavar="PROGRAM")
    _add_common(p)
    return ap


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_program(paths, args) -> Program:
    prog = Program()
    for path in paths:
        prog = prog + parse_program(_read(path), path)
    if args.meta:
        prog = meta.assemble_meta(prog)
    if args.wrap:
        exclude = set(meta.DEFAULT_WRAP_EXCLUDE)
        for spec_item in args.exclude_wrap:
            name, _, arity = spec_item.rpartition("/")
            exclude.add((name, int(arity)))
        prog = meta.wrap(prog, args.wrap, frozenset(exclude))
    return prog


def _load_params(args):
    out = frozenset()
    for path in getattr(args, "facts", []):
        out |= parse_paramset(_read(path), path)
    if args.wrap:
        out = meta.wrap_atoms(out, args.wrap)
    return out


def _limits(args) -> engine.Limits:
    return engine.Limits(args.max_atoms, args.max_iters, args.max_depth)


def _require_allowable(prog, params):
    report = components.check_allowable(prog, params)
    if not report.ok:
        raise IndsemError(f"parameter set is not allowable:\n{report}")


def _oracle_check(prog, params, atoms, out=sys.stderr) -> bool:
    universe = oracle.universe_for(prog, params, atoms)
    rules = oracle.preground(prog, universe)
    reference = oracle.naive_least_closed(rules, params)
    if reference == atoms:
        return True
    for t in sorted(atoms - reference, key=term_to_str):
        print(f"engine only: {term_to_str(t)}", file=out)
    for t in sorted(reference - atoms, key=term_to_str):
        print(f"oracle only: {term_to_str(t)}", file=out)
    return False


def _cmd_model(args) -> int:
    prog = _load_program(args.programs, args)
    params = _load_params(args)
    _require_allowable(prog, params)
    model = engine.least_fixpoint(prog, params, _limits(args))
    sys.stdout.write(engine.dump_model(model.atoms))
    if args.oracle and not _oracle_check(prog, params, model.atoms):
        return 1
    return 0


def _cmd_query(args) -> int:
    prog = _load_program(args.programs, args)
    params = _load_params(args)
    _require_allowable(prog, params)
    goal = parse_query(args.query)
    answers = engine.query(prog, params, goal, _limits(args))
    if is_ground(goal):
        print("true." if answers else "false.")
    else:
        names = variables_of(goal)
        for s in answers:
            print(", ".join(f"{n} = {term_to_str(s[n])}" for n in names if n in s))
    if args.oracle:
        model = engine.least_fixpoint(prog, params, _limits(args))
        if not _oracle_check(prog, params, model.atoms):
            return 1
    return 0


def _cmd_explain(args) -> int:
    prog = _load_program(args.programs, args)
    params = _load_params(args)
    _require_allowable(prog, params)
    goal = parse_query(args.query)
    j = justify.prove(prog, params, goal, _limits(args))
    if j is None:
        print(f"no justification for {term_to_str(goal)}", file=sys.stderr)
        return 1
    print(justify.format_justification(j))
    return 0


def _cmd_strata(args) -> int:
    prog = _load_program(args.programs, args)
    strat = components.stratify(prog)
    for i, stratum in enumerate(strat.strata):
        locs = ", ".join(str(t.loc) for t in stratum)
        print(f"stratum {i}: {locs}")
    return 0


def _cmd_check(args) -> int:
    if len(args.programs) > 2:
        print("check takes one program, or upper and lower", file=sys.stderr)
        return 2
    progs = [
        parse_program(_read(p), p) for p in args.programs
    ]
    params = _load_params(args)
    ok = True
    whole = progs[0] if len(progs) == 1 else Program(progs[0].templates + progs[1].templates)

    report = components.check_allowable(whole, params)
    if report.ok:
        print("allowability: ok")
    else:
        ok = False
        print(f"allowability: {len(report.violations)} violation(s)")
        for v in report.violations:
            print(f"  {v}", file=sys.stderr)

    try:
        strat = components.stratify(whole)
        print(f"stratification: ok ({len(strat.strata)} strata)")
    except IndsemError as exc:
        ok = False
        print("stratification: unstratifiable")
        print(f"  {exc}", file=sys.stderr)

    for w in components.nested_negation_warnings(whole):
        print(f"warning: {w}", file=sys.stderr)

    if len(progs) == 2:
        try:
            upper, lower = progs
            pairs = []
            lower_terms = [(t.head, f"head at {t.loc}") for t in lower.templates]
            lower_terms += [(b, f"body at {t.loc}") for t in lower.templates
                            for b in t.pos_body]
            from .terms import unifiable
            for t in upper.templates:
                for term, where in lower_terms:
                    if unifiable(t.head, term):
                        pairs.append((t.head, term, where))
            if pairs:
                ok = False
                print(f"composition precondition: {len(pairs)} violation(s)")
                for h, term, where in pairs:
                    print(f"  head {term_to_str(h)} unifies with "
                          f"{term_to_str(term)} ({where})", file=sys.stderr)
            else:
                print("composition precondition: ok")
        except IndsemError as exc:
            ok = False
            print(f"composition precondition: error: {exc}", file=sys.stderr)
    return 0 if ok else 1


def _cmd_compose(args) -> int:
    upper = parse_program(_read(args.upper), args.upper)
    lower = parse_program(_read(args.lower), args.lower)
    params = _load_params(args)
    model = components.compose(upper, lower, params, _limits(args),
                               verify_union=args.verify_union)
    sys.stdout.write(engine.dump_model(model.atoms))
    return 0


def _cmd_repl(args) -> int:
    prog = _load_program(args.programs, args)
    params = _load_params(args)
    _require_allowable(prog, params)
    cache = {}

    def model():
        if "m" not in cache:
            cache["m"] = engine.least_fixpoint(prog, params, _limits(args))
        return cache["m"]

    while True:
        try:
            line = input("indsem> ").strip()
        except EOFError:
            return 0
        if not line:
            continue
        try:
            if line in ("quit.", "quit", "halt."):
                return 0
            if line.startswith("?-"):
                goal = parse_query(line[2:].strip())
                if is_ground(goal):
                    print("true." if goal in model().atoms else "false.")
                else:
                    names = variables_of(goal)
                    from .terms import match
                    for g in sorted(model().atoms, key=lambda t: term_to_str(t)):
                        s = match(goal, g)
                        if s is not None:
                            print(", ".join(f"{n} = {term_to_str(s[n])}"
                                            for n in names if n in s))
            elif line.startswith("explain "):
                goal = parse_query(line[len("explain "):].strip())
                j = justify.prove(prog, params, goal, _limits(args))
                if j is None:
                    print(f"no justification for {term_to_str(goal)}")
                else:
                    print(justify.format_justification(j))
            else:
                print("commands: ?- <query>.   explain <ground term>.   quit.")
        except IndsemError as exc:
            print(f"error: {exc}", file=sys.stderr)


_COMMANDS = {
    "model": _cmd_model,
    "query": _cmd_query,
    "explain": _cmd_explain,
    "strata": _cmd_strata,
    "check": _cmd_check,
    "compose": _cmd_compose,
    "repl": _cmd_repl,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except IndsemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
