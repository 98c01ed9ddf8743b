"""Diagram files: declarations, morphism terms, goals; plus DOT export.

Grammar (line oriented, ``#`` comments)::

    object a
    arrow x : a -> b
    shape P = (a * b')'
    morphism f : S -> T {          # explicit linking literal
      s0 -> t0 [x]
    }
    linking f : S -> T             # same, ended by a blank line
    s0 -> t0 [x]
    term g = seq(l(S), lbar(S))
    include other.diag
    expect equal f g | expect distinct f g | expect valid f | expect invalid f

Shape positions accept the sugar ``A -o B`` for ``(A * B')'`` and ``bot``
for ``I'``, and may mention declared shape names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .base import BaseCategoryError, BaseGraph
from .criterion import InternalFault
from .linking import (
    Linking,
    LinkingError,
    assoc,
    assoc_inv,
    check_linking,
    compose,
    curry,
    dual_mor,
    edges_from_lines,
    gen,
    identity,
    proof_graph,
    sym,
    tensor_mor,
    uncurry,
    unit_l,
    unit_l_inv,
    unit_r,
    unit_r_inv,
)
from .net import DEFAULT_MAX_CLASS_SIZE, equivalent
from .shape import Shape, ShapeSyntaxError, _parse, print_shape

__all__ = [
    "DiagramError",
    "Term",
    "Diagram",
    "Goal",
    "GoalResult",
    "parse_term",
    "parse_diagram",
    "load_diagram",
    "elaborate",
    "run_diagram",
    "export_dot",
    "EXIT_OK",
    "EXIT_FAIL",
    "EXIT_ERROR",
    "EXIT_INCONCLUSIVE",
]

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2
EXIT_INCONCLUSIVE = 3


class DiagramError(ValueError):
    """Parse, name-resolution or typing error in a diagram or term."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None and line is not None:
            where = f"{source}:{line}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


# -- terms ------------------------------------------------------------------------

SHAPE_OPS: dict[str, tuple[int, Callable[..., Linking]]] = {
    "id": (1, identity),
    "assoc": (3, assoc),
    "assoc_inv": (3, assoc_inv),
    "sym": (2, sym),
    "l": (1, unit_l),
    "r": (1, unit_r),
    "lbar": (1, unit_l_inv),
    "rbar": (1, unit_r_inv),
}
TERM_OPS: dict[str, int] = {"curry": 1, "uncurry": 1, "dual": 1, "tensor": 2, "seq": 2}


@dataclass(frozen=True)
class Term:
    """``op`` is a constructor name; ``args`` are shape texts, sub-terms or a name."""

    op: str
    args: tuple = ()

    def __str__(self) -> str:
        if self.op == "ref":
            return self.args[0]
        return f"{self.op}({', '.join(str(a) for a in self.args)})"


def _split_args(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise DiagramError("unbalanced ')'")
        cur.append(ch)
    if depth:
        raise DiagramError("unbalanced '('")
    parts.append("".join(cur).strip())
    if parts == [""]:
        return []
    if any(not p for p in parts):
        raise DiagramError("empty argument")
    return parts


_CALL = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$", re.S)


def parse_term(text: str) -> Term:
    m = _CALL.match(text)
    if not m:
        raise DiagramError(f"bad term {text.strip()!r}")
    name, body = m.group(1), m.group(2)
    if body is None:
        return Term("ref", (name,))
    args = _split_args(body)
    if name in SHAPE_OPS:
        arity = SHAPE_OPS[name][0]
        if len(args) != arity:
            raise DiagramError(f"{name} takes {arity} shape argument(s), got {len(args)}")
        return Term(name, tuple(args))
    if name in TERM_OPS:
        arity = TERM_OPS[name]
        if len(args) != arity:
            raise DiagramError(f"{name} takes {arity} argument(s), got {len(args)}")
        return Term(name, tuple(parse_term(a) for a in args))
    if name == "gen":
        if len(args) != 1:
            raise DiagramError("gen takes one arrow name")
        return Term("gen", (args[0],))
    if name == "ref":
        if len(args) != 1:
            raise DiagramError("ref takes one morphism name")
        return Term("ref", (args[0],))
    raise DiagramError(f"unknown constructor {name!r}")


# -- diagrams ---------------------------------------------------------------------


@dataclass(frozen=True)
class Goal:
    kind: str  # equal | distinct | valid | invalid
    names: tuple[str, ...]
    line: int

    def __str__(self) -> str:
        return f"expect {self.kind} {' '.join(self.names)}"


@dataclass
class Diagram:
    objects: list[str] = field(default_factory=list)
    arrows: list[tuple[str, str, str]] = field(default_factory=list)
    shapes: dict[str, Shape] = field(default_factory=dict)
    morphisms: dict[str, Linking] = field(default_factory=dict)
    terms: dict[str, Term] = field(default_factory=dict)
    goals: list[Goal] = field(default_factory=list)

    @property
    def base(self) -> BaseGraph | None:
        if not self.objects:
            return None
        return BaseGraph(tuple(self.objects), tuple(self.arrows))

    def shape(self, text: str) -> Shape:
        base = self.base
        objects = None if base is None else base.objects
        return _parse(text, objects, sugar=True, names=self.shapes)

    def morphism(self, name: str) -> Linking:
        try:
            return self.morphisms[name]
        except KeyError:
            raise DiagramError(f"unknown morphism {name!r}") from None


def _diag(f: Linking) -> str:
    return f"{print_shape(f.source)} -> {print_shape(f.target)}"


def _valid(f: Linking, what: str) -> Linking:
    rep = check_linking(f)
    if not rep.valid:
        raise DiagramError(f"{what} is not a valid linking: {rep}")
    return f


def elaborate(t: Term, d: Diagram) -> Linking:
    """The linking denoted by a term in the context of a diagram."""
    op = t.op
    if op == "ref":
        return d.morphism(t.args[0])
    if op in SHAPE_OPS:
        shapes = []
        for text in t.args:
            try:
                shapes.append(d.shape(text))
            except ShapeSyntaxError as exc:
                raise DiagramError(f"in {op}: {exc}") from None
        return SHAPE_OPS[op][1](*shapes)
    if op == "gen":
        base = d.base
        if base is None:
            raise DiagramError("gen needs declared objects and arrows")
        try:
            return gen(t.args[0], base)
        except BaseCategoryError as exc:
            raise DiagramError(str(exc)) from None
    subs = [elaborate(a, d) for a in t.args]
    try:
        if op == "seq":
            f, g = (_valid(x, f"argument of seq ({_diag(x)})") for x in subs)
            if f.target != g.source:
                raise DiagramError(
                    f"seq: first term ends at {print_shape(f.target)}, "
                    f"second starts at {print_shape(g.source)}"
                )
            return compose(f, g)
        if op == "tensor":
            return tensor_mor(*subs)
        if op == "dual":
            return dual_mor(subs[0])
        if op == "curry":
            return curry(subs[0])
        if op == "uncurry":
            return uncurry(subs[0])
    except LinkingError as exc:
        raise DiagramError(f"{op}: {exc}") from None
    raise DiagramError(f"unknown constructor {op!r}")


_OBJECT = re.compile(r"^object\s+(.+)$")
_ARROW = re.compile(r"^arrow\s+([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(\S+)\s*->\s*(\S+)$")
_SHAPE = re.compile(r"^shape\s+([A-Z][A-Za-z0-9_]*)\s*=\s*(.+)$")
_MORPHISM = re.compile(r"^(morphism|linking)\s+([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(.+?)\s*->\s*(.+?)\s*(\{.*)?$")
_TERM = re.compile(r"^term\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)$")
_EXPECT = re.compile(r"^expect\s+(equal|distinct|valid|invalid)\s+(.+)$")
_INCLUDE = re.compile(r"^include\s+(\S+)$")
_KEYWORDS = ("object", "arrow", "shape", "morphism", "linking", "term", "expect", "include")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_diagram(
    text: str,
    source: str | None = None,
    into: Diagram | None = None,
    base_dir: Path | None = None,
    _depth: int = 0,
) -> Diagram:
    d = into if into is not None else Diagram()
    lines = text.splitlines()
    i = 0

    def err(msg: str, lineno: int) -> DiagramError:
        return DiagramError(msg, lineno, source)

    def fresh(name: str, lineno: int) -> None:
        if name in d.morphisms:
            raise err(f"duplicate morphism name {name!r}", lineno)

    while i < len(lines):
        lineno = i + 1
        line = _strip(lines[i])
        i += 1
        if not line:
            continue
        try:
            if m := _OBJECT.match(line):
                for name in m.group(1).replace(",", " ").split():
                    if name in d.objects:
                        raise err(f"duplicate object {name!r}", lineno)
                    if name == "I" or not re.fullmatch(r"[a-z][A-Za-z0-9_]*", name):
                        raise err(f"bad object name {name!r}", lineno)
                    d.objects.append(name)
            elif m := _ARROW.match(line):
                name, a, b = m.groups()
                if any(x[0] == name for x in d.arrows):
                    raise err(f"duplicate arrow {name!r}", lineno)
                for o in (a, b):
                    if o not in d.objects:
                        raise err(f"arrow {name} mentions undeclared object {o!r}", lineno)
                d.arrows.append((name, a, b))
            elif m := _SHAPE.match(line):
                name = m.group(1)
                if name in d.shapes:
                    raise err(f"duplicate shape name {name!r}", lineno)
                d.shapes[name] = d.shape(m.group(2))
            elif m := _MORPHISM.match(line):
                kind, name, s_text, t_text, brace = m.groups()
                fresh(name, lineno)
                body: list[str] = []
                if kind == "morphism":
                    if brace is None:
                        raise err("morphism literal needs '{ ... }'", lineno)
                    rest = brace[1:]
                    closed = "}" in rest
                    body += rest.split("}", 1)[0].split(";")
                    while not closed:
                        if i >= len(lines):
                            raise err("unterminated '{'", lineno)
                        nxt = _strip(lines[i])
                        i += 1
                        closed = "}" in nxt
                        body += nxt.split("}", 1)[0].split(";")
                else:
                    while i < len(lines):
                        nxt = _strip(lines[i])
                        if not lines[i].strip() or nxt.split(" ", 1)[0] in _KEYWORDS:
                            break
                        body.append(nxt)
                        i += 1
                s, t = d.shape(s_text), d.shape(t_text)
                d.morphisms[name] = Linking(s, t, edges_from_lines(s, t, body, d.base))
            elif m := _TERM.match(line):
                name = m.group(1)
                fresh(name, lineno)
                term = parse_term(m.group(2))
                d.terms[name] = term
                d.morphisms[name] = elaborate(term, d)
            elif m := _EXPECT.match(line):
                kind = m.group(1)
                names = tuple(m.group(2).split())
                want = 2 if kind in ("equal", "distinct") else 1
                if len(names) != want:
                    raise err(f"expect {kind} takes {want} name(s)", lineno)
                d.goals.append(Goal(kind, names, lineno))
            elif m := _INCLUDE.match(line):
                if _depth > 8:
                    raise err("include nesting too deep", lineno)
                where = (base_dir or Path(".")) / m.group(1)
                if not where.exists():
                    from importlib import resources

                    packaged = resources.files("starnet") / "diagrams" / m.group(1)
                    if not packaged.is_file():
                        raise err(f"cannot include {m.group(1)!r}", lineno)
                    inc_text, where = packaged.read_text(encoding="utf-8"), Path(str(packaged))
                else:
                    inc_text = where.read_text(encoding="utf-8")
                parse_diagram(inc_text, str(where), d, where.parent, _depth + 1)
            else:
                raise err(f"cannot parse {line!r}", lineno)
        except DiagramError as exc:
            if exc.line is None:
                raise err(str(exc), lineno) from None
            raise
        except (ShapeSyntaxError, LinkingError, BaseCategoryError) as exc:
            raise err(str(exc), lineno) from None
    for goal in d.goals:
        for name in goal.names:
            if name not in d.morphisms:
                raise DiagramError(f"goal mentions unknown morphism {name!r}", goal.line, source)
    return d


def load_diagram(path: str | Path) -> Diagram:
    p = Path(path)
    return parse_diagram(p.read_text(encoding="utf-8"), str(p), base_dir=p.parent)


@dataclass(frozen=True)
class GoalResult:
    goal: Goal
    status: str  # pass | fail | inconclusive
    detail: str = ""
    witness: tuple = ()


def check_goal(
    d: Diagram,
    goal: Goal,
    max_class_size: int = DEFAULT_MAX_CLASS_SIZE,
    oracle: bool = False,
    allow_rewiring: bool = True,
) -> GoalResult:
    fs = [d.morphisms[n] for n in goal.names]
    if goal.kind in ("valid", "invalid"):
        rep = check_linking(fs[0], d.base, oracle=oracle)
        ok = rep.valid == (goal.kind == "valid")
        return GoalResult(goal, "pass" if ok else "fail", str(rep))
    f, g = fs
    if f.source != g.source or f.target != g.target:
        ok = goal.kind == "distinct"
        return GoalResult(goal, "pass" if ok else "fail", f"different types: {_diag(f)} vs {_diag(g)}")
    for x, name in zip(fs, goal.names):
        rep = check_linking(x, d.base, oracle=oracle)
        if not rep.valid:
            return GoalResult(goal, "fail", f"{name} is not a valid linking: {rep}")
    v = equivalent(f, g, max_class_size, allow_rewiring)
    if v.outcome == "inconclusive":
        return GoalResult(goal, "inconclusive", f"class search hit the limit after {v.explored} linkings")
    ok = (v.outcome == "equal") == (goal.kind == "equal")
    if v.outcome == "equal":
        detail = f"equal, witness of {len(v.witness)} rewiring step(s)"
        return GoalResult(goal, "pass" if ok else "fail", detail, v.witness)
    return GoalResult(goal, "pass" if ok else "fail", f"distinct ({v.explored} linkings in class)")


def run_diagram(
    path_or_text: str | Path,
    *,
    max_class_size: int = DEFAULT_MAX_CLASS_SIZE,
    oracle: bool = False,
    allow_rewiring: bool = True,
    is_text: bool = False,
) -> tuple[list[str], int]:
    """Check every goal; returns report lines and the exit code."""
    try:
        if is_text:
            d = parse_diagram(str(path_or_text))
        else:
            d = load_diagram(path_or_text)
    except (DiagramError, OSError, InternalFault) as exc:
        return [f"error: {exc}"], EXIT_ERROR
    lines = []
    statuses = []
    for goal in d.goals:
        res = check_goal(d, goal, max_class_size, oracle, allow_rewiring)
        statuses.append(res.status)
        lines.append(f"{res.status.upper():12} {goal}  ({res.detail})")
        for step in res.witness:
            lines.append(f"    rewire {step}")
    if "fail" in statuses:
        code = EXIT_FAIL
    elif "inconclusive" in statuses:
        code = EXIT_INCONCLUSIVE
    else:
        code = EXIT_OK
    n_pass = statuses.count("pass")
    lines.append(f"{n_pass}/{len(statuses)} goals passed")
    return lines, code


# -- DOT ------------------------------------------------------------------------------


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(f: Linking, name: str = "linking") -> str:
    """Parse trees (solid, undirected), leaf-function edges (dashed, directed).

    Switched tensors are filled grey.  Output is a pure function of ``f``.
    """
    g = proof_graph(f)
    switched = set(g.switched)
    out = [f'digraph "{_dot_escape(name)}" {{', "  node [fontname=\"Helvetica\"];"]
    for tree, (shape, side) in enumerate(((f.source, "s"), (f.target, "t"))):
        out.append(f'  subgraph "cluster_{side}" {{')
        out.append(f'    label="{"source" if side == "s" else "target"}: {_dot_escape(print_shape(shape))}";')
        leaf_index = {p: i for i, p in enumerate(shape.leaf_positions)}
        for pos, tok in enumerate(shape.tokens):
            node = f"{side}_{pos}"
            if pos in leaf_index:
                sign = "-" if shape.parity[pos] else "+"
                text = f"{side}{leaf_index[pos]}: {tok}{sign}"
                out.append(f'    {node} [label="{_dot_escape(text)}", shape=box];')
            else:
                text = "⊗" if tok == "*" else "dual"
                extra = ', style=filled, fillcolor="gray80"' if (tree, pos) in switched else ""
                out.append(f'    {node} [label="{text}", shape=circle{extra}];')
        for pos, kids in enumerate(shape.children):
            for c in kids:
                out.append(f"    {side}_{pos} -> {side}_{c} [dir=none];")
        out.append("  }")
    for d, c, lab in f:
        u = f"{d.side}_{(f.source if d.side == 's' else f.target).leaf_positions[d.index]}"
        v = f"{c.side}_{(f.source if c.side == 's' else f.target).leaf_positions[c.index]}"
        attrs = "style=dashed, constraint=false"
        if lab is not None and not lab.is_identity:
            attrs += f', label="{_dot_escape(lab.applicative())}"'
        out.append(f"  {u} -> {v} [{attrs}];")
    out.append("}")
    return "\n".join(out) + "\n"
