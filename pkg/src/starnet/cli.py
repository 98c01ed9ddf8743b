"""Command-line front end.

Exit codes: 0 success, 1 a goal or check failed, 2 parse/type error,
3 inconclusive (class-size limit reached).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .criterion import BACKEND, BoundExceeded, InternalFault
from .cutelim import (
    CutError,
    check_one_sided,
    chain_sequent,
    normalize_stepwise,
    one_to_two,
    parse_one_sided,
    turbo_normalize,
)
from .diagram import (
    EXIT_ERROR,
    EXIT_FAIL,
    EXIT_INCONCLUSIVE,
    EXIT_OK,
    Diagram,
    DiagramError,
    elaborate,
    export_dot,
    load_diagram,
    parse_term,
    run_diagram,
)
from .linking import Linking, LinkingError, check_linking, compose, format_linking
from .net import DEFAULT_MAX_CLASS_SIZE, EnumerationLimit, enumerate_linkings, enumerate_nets, equivalent
from .shape import ShapeSyntaxError, _parse


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _linkings(d: Diagram, names: Sequence[str] | None) -> list[tuple[str, Linking]]:
    if names:
        return [(n, d.morphism(n)) for n in names]
    return list(d.morphisms.items())


def _is_sequent_file(path: str) -> bool:
    text = Path(path).read_text(encoding="utf-8")
    return any(l.split("#", 1)[0].strip().startswith("sequent:") for l in text.splitlines())


def cmd_check(args) -> int:
    if _is_sequent_file(args.file):
        L = parse_one_sided(Path(args.file).read_text(encoding="utf-8"))
        rep = check_one_sided(L, oracle=args.oracle)
        _out(f"{args.file}: {rep}")
        return EXIT_OK if rep.valid else EXIT_FAIL
    d = load_diagram(args.file)
    code = EXIT_OK
    for name, f in _linkings(d, args.names):
        rep = check_linking(f, d.base, oracle=args.oracle)
        _out(f"{name}: {rep}")
        if not rep.valid:
            if rep.witness is not None:
                _out(f"  witness: {rep.witness}")
            code = EXIT_FAIL
    return code


def cmd_compose(args) -> int:
    d = load_diagram(args.file)
    fs = [f for _, f in _linkings(d, args.names)]
    if len(fs) < 2:
        raise DiagramError("compose needs at least two linkings")
    for name, f in zip(args.names or d.morphisms, fs):
        rep = check_linking(f, d.base)
        if not rep.valid:
            raise DiagramError(f"{name} is not a valid linking: {rep}")
    if args.engine == "path":
        h = fs[0]
        for f in fs[1:]:
            h = compose(h, f)
    else:
        L = chain_sequent(fs)
        if args.engine == "turbo":
            h = one_to_two(turbo_normalize(L))
        else:
            h = one_to_two(normalize_stepwise(L, args.strategy, args.seed))
    _out(format_linking(h, args.output_name))
    return EXIT_OK


def cmd_normalize(args) -> int:
    L = parse_one_sided(Path(args.file).read_text(encoding="utf-8"))
    rep = check_one_sided(L)
    if not rep.valid:
        raise DiagramError(f"input is not a valid one-sided linking: {rep}")
    if args.strategy == "turbo":
        N = turbo_normalize(L)
    else:
        N = normalize_stepwise(L, args.strategy, args.seed)
    _out(str(N))
    return EXIT_OK


def cmd_eq(args) -> int:
    d = load_diagram(args.file)
    pairs = _linkings(d, args.names)
    if len(pairs) != 2:
        raise DiagramError("eq needs exactly two linkings")
    (nf, f), (ng, g) = pairs
    for name, x in pairs:
        rep = check_linking(x, d.base)
        if not rep.valid:
            raise DiagramError(f"{name} is not a valid linking: {rep}")
    v = equivalent(f, g, args.max_class_size, not args.no_rewiring)
    _out(f"{nf} vs {ng}: {v.outcome} (explored {v.explored})")
    for step in v.witness or ():
        _out(f"  rewire {step}")
    return {"equal": EXIT_OK, "distinct": EXIT_FAIL}.get(v.outcome, EXIT_INCONCLUSIVE)


def cmd_eval(args) -> int:
    d = load_diagram(args.diagram) if args.diagram else Diagram()
    f = elaborate(parse_term(args.term), d)
    rep = check_linking(f, d.base)
    _out(format_linking(f, args.output_name))
    _out(f"# {rep}")
    return EXIT_OK if rep.valid else EXIT_FAIL


def cmd_diagram(args) -> int:
    code = EXIT_OK
    for path in args.files:
        lines, c = run_diagram(
            path,
            max_class_size=args.max_class_size,
            oracle=args.oracle,
            allow_rewiring=not args.no_rewiring,
        )
        _out(f"== {path}")
        for line in lines:
            _out(line)
        code = max(code, c, key=lambda x: (0, 3, 1, 2).index(x))
    return code


def cmd_enumerate(args) -> int:
    s = _parse(args.source, sugar=True)
    t = _parse(args.target, sugar=True)
    if args.nets:
        classes = enumerate_nets(s, t, args.limit)
        total = sum(len(c) for c in classes)
        _out(f"{total} linkings in {len(classes)} net(s)")
        for i, cls in enumerate(classes):
            _out(f"# net {i}: {len(cls)} linking(s)")
            for j, f in enumerate(sorted(cls, key=Linking.key)):
                _out(format_linking(f, f"n{i}_{j}"))
    else:
        fs = sorted(enumerate_linkings(s, t, args.limit), key=Linking.key)
        _out(f"{len(fs)} linkings")
        for j, f in enumerate(fs):
            _out(format_linking(f, f"f{j}"))
    return EXIT_OK


def cmd_dot(args) -> int:
    d = load_diagram(args.file)
    name, f = _linkings(d, [args.name] if args.name else None)[0]
    _out(export_dot(f, name))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="starnet",
        description="Linkings, nets and cut elimination for free star-autonomous categories.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 ({BACKEND} kernel)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, oracle=False, classes=False, seed=False):
        if oracle:
            sp.add_argument("--oracle", action="store_true", help="use the brute-force switching enumerator")
        if classes:
            sp.add_argument("--max-class-size", type=int, default=DEFAULT_MAX_CLASS_SIZE)
            sp.add_argument("--no-rewiring", action="store_true", help=argparse.SUPPRESS)
        if seed:
            sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("check", help="check linkings (or a sequent file) against the criterion")
    sp.add_argument("file")
    sp.add_argument("names", nargs="*")
    common(sp, oracle=True)
    sp.set_defaults(run=cmd_check)

    sp = sub.add_parser("compose", help="compose linkings in file order")
    sp.add_argument("file")
    sp.add_argument("names", nargs="*")
    sp.add_argument("--engine", choices=("path", "turbo", "stepwise"), default="path")
    sp.add_argument("--strategy", choices=("leftmost", "rightmost", "random"), default="leftmost")
    sp.add_argument("--output-name", default="h")
    common(sp, seed=True)
    sp.set_defaults(run=cmd_compose)

    sp = sub.add_parser("normalize", help="eliminate the cuts of a sequent file")
    sp.add_argument("file")
    sp.add_argument("--strategy", choices=("leftmost", "rightmost", "random", "turbo"), default="turbo")
    common(sp, seed=True)
    sp.set_defaults(run=cmd_normalize)

    sp = sub.add_parser("eq", help="decide equality of two linkings as nets")
    sp.add_argument("file")
    sp.add_argument("names", nargs="*")
    common(sp, classes=True)
    sp.set_defaults(run=cmd_eq)

    sp = sub.add_parser("eval", help="elaborate a morphism term")
    sp.add_argument("term")
    sp.add_argument("--diagram", help="diagram file supplying declarations")
    sp.add_argument("--output-name", default="f")
    sp.set_defaults(run=cmd_eval)

    sp = sub.add_parser("diagram", help="check the goals of diagram files")
    sp.add_argument("files", nargs="+")
    common(sp, oracle=True, classes=True)
    sp.set_defaults(run=cmd_diagram)

    sp = sub.add_parser("enumerate", help="list all linkings (or nets) between two shapes")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.add_argument("--nets", action="store_true")
    sp.add_argument("--limit", type=int, default=12, help="maximum total leaf count")
    common(sp, seed=True)
    sp.set_defaults(run=cmd_enumerate)

    sp = sub.add_parser("dot", help="render a linking as Graphviz DOT")
    sp.add_argument("file")
    sp.add_argument("--name")
    sp.set_defaults(run=cmd_dot)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (
        DiagramError,
        LinkingError,
        CutError,
        ShapeSyntaxError,
        EnumerationLimit,
        BoundExceeded,
        OSError,
    ) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    except InternalFault as exc:
        sys.stderr.write(f"internal error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
