"""Command-line interface: ``treeperm <command> ...``.

Exit codes: 0 success (or "true"), 1 a predicate answered "false" or a
closure exceeded its limit, 2 usage or parse errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import catalog
from .automata import (
    Exceeded,
    MachineFormatError,
    default_limit,
    equal,
    is_trivial,
    machine_of,
    order_bounded,
    parse_machine,
    portrait,
    states,
)
from .dsl import DslError, DslProgram, elaborate, parse, program_from_machine
from .gdata import concat, refine, represent, theorem_b_extend, theorem_c_extend
from .groups import AbelianBase
from .tree_ops import EncodingTree, NotRealizable, deflate, inflate


class UsageError(Exception):
    pass


def _load_program(args) -> DslProgram:
    if getattr(args, "catalog", None):
        return _catalog_program(args.catalog)
    if not getattr(args, "file", None):
        raise UsageError("a machine source is required (-f FILE or -c NAME)")
    path = Path(args.file)
    if not path.exists():
        if path.name in catalog.ENTRIES:
            return _catalog_program(path.name)
        raise UsageError(f"no such file: {args.file}")
    text = path.read_text()
    if text.lstrip().startswith("treeperm-machine"):
        prog = program_from_machine(parse_machine(text))
        entry = catalog.ENTRIES.get(path.name)
        if entry and entry.aliases:
            prog = parse(prog.to_text() + "".join(f"{n} = {e}\n" for n, e in entry.aliases))
        return prog
    return parse(text)


def _catalog_program(name: str) -> DslProgram:
    try:
        return catalog.load(name).program()
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None


def _word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"vertex words are comma-separated integers, got {text!r}") from None


def _tree(text: str) -> EncodingTree:
    if text in catalog.ENTRIES:
        return catalog.load(text).tree
    path = Path(text)
    if path.exists():
        text = "".join(l for l in path.read_text().splitlines() if not l.lstrip().startswith("#"))
    elif Path(text).name in catalog.ENTRIES and catalog.ENTRIES[Path(text).name].kind == "tree":
        return catalog.load(Path(text).name).tree
    try:
        return EncodingTree.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad encoding tree: {exc}") from None


def _one(args):
    if not args.expr:
        raise UsageError("an expression is required (-e EXPR)")
    if len(args.expr) != 1:
        raise UsageError("exactly one expression is expected")
    return elaborate(_load_program(args), args.expr[0])


def _named(args) -> dict:
    prog = _load_program(args)
    if args.expr:
        return {f"g{i + 1}" if len(args.expr) > 1 else "g": elaborate(prog, e) for i, e in enumerate(args.expr)}
    return {d.name: prog.element(d.name) for d in prog.definitions if d.is_state}


def _print_machine(out, m) -> int:
    if isinstance(m, Exceeded):
        print(f"exceeded the state limit ({m.limit})", file=sys.stderr)
        return 1
    out.write(m.to_text())
    return 0


def _bool(out, answer) -> int:
    if isinstance(answer, Exceeded):
        print(f"unknown: exceeded the state limit ({answer.limit})", file=out)
        return 1
    print("true" if answer else "false", file=out)
    return 0 if answer else 1


# ---------------------------------------------------------------------------
# commands


def cmd_act(args, out):
    print(",".join(map(str, _one(args).act(_word(args.word)))), file=out)
    return 0


def cmd_section(args, out):
    return _print_machine(out, machine_of({"s": _one(args).section(_word(args.word))}, args.limit))


def cmd_states(args, out):
    q = states(_one(args), args.limit)
    if isinstance(q, Exceeded):
        print(f"exceeded the state limit ({q.limit})", file=out)
        return 1
    print(f"{len(q)} states", file=out)
    return 0


def cmd_equal(args, out):
    if not args.expr or len(args.expr) != 2:
        raise UsageError("equal needs exactly two expressions (-e A -e B)")
    prog = _load_program(args)
    a, b = (elaborate(prog, e) for e in args.expr)
    return _bool(out, equal(a, b, args.limit))


def cmd_trivial(args, out):
    return _bool(out, is_trivial(_one(args), args.limit))


def cmd_order(args, out):
    n = order_bounded(_one(args), args.max, args.limit)
    print("unknown" if n is None else n, file=out)
    return 0


def cmd_portrait(args, out):
    p = portrait(_one(args), args.depth)
    if args.dot:
        lines = ["digraph portrait {", '  node [shape=box];']
        for v in sorted(p, key=lambda v: (len(v), v)):
            name = '"' + (",".join(map(str, v)) or "root") + '"'
            lines.append(f"  {name} [label={name[:-1]} / {p[v].to_cycles()}\"];")
            if v:
                parent = '"' + (",".join(map(str, v[:-1])) or "root") + '"'
                lines.append(f'  {parent} -> {name} [label="{v[-1]}"];')
        lines.append("}")
        print("\n".join(lines), file=out)
    else:
        for v in sorted(p, key=lambda v: (len(v), v)):
            print(f"{','.join(map(str, v)) or '-'}: {p[v].to_cycles()}", file=out)
    return 0


def cmd_minimize(args, out):
    m = machine_of(_named(args), args.limit)
    if args.dot and not isinstance(m, Exceeded):
        out.write(m.to_dot())
        return 0
    return _print_machine(out, m)


def cmd_inflate(args, out):
    if args.k < 1:
        raise UsageError("k must be at least 1")
    return _print_machine(out, machine_of({n: inflate(g, args.k) for n, g in _named(args).items()}, args.limit))


def cmd_deflate(args, out):
    tree = _tree(args.tree)
    res = {}
    for n, g in _named(args).items():
        d = deflate(g, tree, args.limit)
        if isinstance(d, Exceeded):
            return _print_machine(out, d)
        res[n] = d
    return _print_machine(out, machine_of(res, args.limit))


_CORES = {"zwrz": catalog.builders.zwrz_even, "c2wrz": catalog.builders.c2wrz_even}


def _base(spec: str) -> AbelianBase:
    s = spec.strip().upper()
    if s in ("1", "TRIVIAL"):
        return AbelianBase(())
    if s == "Z":
        return AbelianBase.of(1)
    if s.startswith("C") and s[1:].isdigit():
        return AbelianBase.of(0, (int(s[1:]),))
    raise UsageError(f"unknown base {spec!r}; use Z, C<n> or 1")


def cmd_gdata(args, out):
    name = args.name.removesuffix("-gdata")
    if name not in catalog.builders.GDATA:
        raise UsageError(f"unknown G-data {args.name!r}; known: {', '.join(catalog.builders.GDATA)}")
    gd = catalog.builders.GDATA[name]()
    op = args.op
    if op == "refine":
        if name not in _CORES:
            raise UsageError(f"no core oracle is shipped for {name!r}")
        gd = refine(gd, _CORES[name]())
    elif op == "extend-b":
        gd = theorem_b_extend(gd, _base(args.base[0] if args.base else "Z"))
    elif op == "extend-c":
        if not gd.trivial_parabolic:
            raise UsageError(f"{name} is not flagged trivial_parabolic; use zwrz-refined")
        gd = theorem_c_extend(gd, base=_base(args.base[0] if args.base else "Z"))
    elif op == "concat":
        bases = args.base or ["Z", "Z"]
        if len(bases) < 2:
            raise UsageError("concat needs at least two --base values")
        parts = [theorem_b_extend(gd, _base(b)) for b in bases]
        gd = parts[0]
        for other in parts[1:]:
            gd = concat(gd, other)
    print(f"# degree {gd.degree}, orbit type {gd.orbit_type}", file=out)
    gens = {n: represent(gd, g) for n, g in gd.ambient.generators.items()}
    return _print_machine(out, machine_of(gens, args.limit))


def cmd_catalog(args, out):
    if args.action == "list":
        for name, e in catalog.ENTRIES.items():
            print(f"{name:18} degree {e.degree:<3} {e.kind:8} {e.description}", file=out)
        return 0
    if not args.name:
        raise UsageError("catalog show needs a NAME")
    try:
        e = catalog.load(args.name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    print(f"# {e.name}: degree {e.degree}; {e.description}", file=out)
    if e.kind != "gdata":
        out.write(e.path.read_text())
    return 0


def cmd_check(args, out):
    try:
        report = catalog.run_suite(args.name, args.limit)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    for rel, ans in report.failures:
        want = "trivial" if rel.trivial else "nontrivial"
        print(f"FAILED {rel.text}: expected {want}, got {ans}", file=out)
    print(report.summary(), file=out)
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treeperm", description="Finite-state tree automorphisms.")
    p.add_argument("--limit", type=int, default=None,
                   help="state limit for closures (default: $TREEPERM_LIMIT or 100000)")
    sub = p.add_subparsers(dest="command", required=True)

    def source(sp, expr=True, many=False):
        sp.add_argument("-f", "--file", help="DSL program or machine file")
        sp.add_argument("-c", "--catalog", help="catalog entry name")
        if expr:
            sp.add_argument("-e", "--expr", action="append", help="group word over the defined names")
        sp.add_argument("--limit", type=int, default=argparse.SUPPRESS)
        return sp

    sp = source(sub.add_parser("act", help="image of a vertex word"))
    sp.add_argument("-w", "--word", required=True, help="comma-separated letters, e.g. 1,2")
    sp.set_defaults(func=cmd_act)
    sp = source(sub.add_parser("section", help="section at a vertex"))
    sp.add_argument("-w", "--word", required=True)
    sp.set_defaults(func=cmd_section)
    source(sub.add_parser("states", help="size of the state closure")).set_defaults(func=cmd_states)
    source(sub.add_parser("equal", help="decide equality of two words")).set_defaults(func=cmd_equal)
    source(sub.add_parser("trivial", help="decide triviality")).set_defaults(func=cmd_trivial)
    sp = source(sub.add_parser("order", help="bounded order search"))
    sp.add_argument("--max", type=int, required=True)
    sp.set_defaults(func=cmd_order)
    sp = source(sub.add_parser("portrait", help="activities down to a depth"))
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--dot", action="store_true")
    sp.set_defaults(func=cmd_portrait)
    sp = source(sub.add_parser("minimize", help="minimized machine of the generators or given words"))
    sp.add_argument("--dot", action="store_true")
    sp.set_defaults(func=cmd_minimize)
    sp = source(sub.add_parser("inflate", help="k-inflation"))
    sp.add_argument("-k", type=int, required=True)
    sp.set_defaults(func=cmd_inflate)
    sp = source(sub.add_parser("deflate", help="deflation to the binary tree"))
    sp.add_argument("--tree", required=True, help="tree text, file or catalog entry")
    sp.set_defaults(func=cmd_deflate)
    sp = sub.add_parser("gdata", help="machines from shipped G-data")
    sp.add_argument("name")
    sp.add_argument("--op", choices=["represent", "refine", "extend-b", "extend-c", "concat"],
                    default="represent")
    sp.add_argument("--base", action="append", help="Z, C<n> or 1 (repeat for concat)")
    sp.add_argument("--limit", type=int, default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_gdata)
    sp = sub.add_parser("catalog", help="list or show catalog entries")
    sp.add_argument("action", choices=["list", "show"])
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_catalog)
    sp = sub.add_parser("check", help="run an entry's relation suite")
    sp.add_argument("name")
    sp.add_argument("--limit", type=int, default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_check)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.limit is None:
        args.limit = default_limit()
    try:
        return args.func(args, out)
    except DslError as exc:
        for d in exc.diagnostics:
            print(d, file=sys.stderr)
        return 2
    except (UsageError, MachineFormatError, NotRealizable) as exc:
        print(f"treeperm: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"treeperm: {exc}", file=sys.stderr)
        return 2


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
