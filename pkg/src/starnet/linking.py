"""Two-sided linkings ``S -> T`` and the split star-autonomous structure on them."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .base import BaseCategoryError, BaseGraph, PathMorphism
from .criterion import (
    BoundExceeded,
    InternalFault,
    ProofGraph,
    bruteforce_check,
    contract_check,
    switching_is_tree,
)
from .goi import (
    Endpoint,
    LeafFunctionError,
    PartialLeafFun,
    Sign,
    compose_plf,
    domain_of,
    src,
    tgt,
)
from .shape import Shape, leaves, print_shape

__all__ = [
    "Linking",
    "LinkingError",
    "SwitchingReport",
    "check_linking",
    "check_switching_bruteforce",
    "compose",
    "compatibility_check",
    "identity",
    "assoc",
    "assoc_inv",
    "sym",
    "unit_l",
    "unit_r",
    "unit_l_inv",
    "unit_r_inv",
    "curry",
    "uncurry",
    "dual_mor",
    "tensor_mor",
    "gen",
    "format_linking",
    "parse_linking",
    "parse_label",
    "InternalFault",
    "BoundExceeded",
]


class LinkingError(ValueError):
    """Shape mismatch, malformed endpoint, or a pattern that does not apply."""


EdgeMap = Mapping[Endpoint, "tuple[Endpoint, PathMorphism | None]"]


class Linking:
    """A leaf function between two shapes, possibly labelled.

    Construction only checks that every edge runs from a domain endpoint
    to a codomain endpoint; use :func:`check_linking` for the linking
    conditions.  Values are immutable and compare edge-for-edge.
    """

    __slots__ = ("source", "target", "fun", "_key")

    def __init__(self, source: Shape, target: Shape, edges: EdgeMap | PartialLeafFun):
        self.source = source
        self.target = target
        if isinstance(edges, PartialLeafFun):
            fun = edges
        else:
            try:
                fun = PartialLeafFun(leaves(source), leaves(target), edges)
            except LeafFunctionError as exc:
                raise LinkingError(str(exc)) from None
        self.fun = fun
        self._key = None

    @property
    def edges(self) -> Mapping[Endpoint, tuple[Endpoint, PathMorphism | None]]:
        return self.fun.edges

    def __call__(self, e: Endpoint) -> Endpoint | None:
        return self.fun(e)

    def label(self, e: Endpoint) -> PathMorphism | None:
        return self.fun.label(e)

    def __iter__(self) -> Iterator[tuple[Endpoint, Endpoint, PathMorphism | None]]:
        return iter(self.fun)

    def __len__(self) -> int:
        return len(self.fun.edges)

    def key(self) -> tuple:
        """Canonical serialization: shapes and the sorted labelled edge list."""
        if self._key is None:
            self._key = (self.source.tokens, self.target.tokens, self.fun.key())
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Linking):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.fun.edges == other.fun.edges
        )

    def __hash__(self) -> int:
        return hash(self.key())

    def with_edges(self, edges: EdgeMap) -> Linking:
        return Linking(self.source, self.target, edges)

    def __repr__(self) -> str:
        return f"Linking({print_shape(self.source)!r} -> {print_shape(self.target)!r}, {len(self)} edges)"

    def __str__(self) -> str:
        return format_linking(self)


# -- criterion ------------------------------------------------------------------


@dataclass(frozen=True)
class SwitchingReport:
    """Verdict of a criterion check.

    When invalid, ``condition`` is one of ``"totality"``, ``"bijection"``,
    ``"labelling"``, ``"switching"``.  ``witness`` is the offending
    endpoint for the first three.  For ``"switching"`` it is a failing
    switching, one ``(side, postfix position, kept child)`` triple per
    switched tensor, where side is ``"s"`` or ``"t"`` and kept child is
    0 (left) or 1 (right).
    """

    valid: bool
    condition: str | None = None
    witness: object = None
    detail: str = ""

    @property
    def verdict(self) -> str:
        return "valid" if self.valid else "invalid"

    def __bool__(self) -> bool:
        return self.valid

    def __str__(self) -> str:
        if self.valid:
            return "valid"
        return f"invalid ({self.condition}): {self.detail}"


def _local_conditions(f: Linking, base: BaseGraph | None) -> SwitchingReport | None:
    fun = f.fun
    edges = fun.edges
    ls, lt = fun.source, fun.target
    pos, neg = Sign.POS, Sign.NEG
    # edges are keyed by domain endpoints, so counting decides totality
    n_dom = sum(1 for leaf in ls if leaf.sign is pos) + sum(1 for leaf in lt if leaf.sign is neg)
    if len(edges) != n_dom:
        for d in domain_of(ls, lt):
            if d not in edges:
                return SwitchingReport(False, "totality", d, f"no edge from {d}")
    hit: set[Endpoint] = set()
    for d, (c, lab) in edges.items():
        a = (ls if d[0] == "s" else lt)[d[1]][0]
        b = (ls if c[0] == "s" else lt)[c[1]][0]
        if a == "I":
            if lab is not None:
                return SwitchingReport(False, "labelling", d, f"unit edge {d} -> {c} is labelled")
            continue
        if b == "I":
            return SwitchingReport(False, "bijection", d, f"generator leaf {d} points at a unit leaf")
        if c in hit:
            return SwitchingReport(False, "bijection", c, f"{c} is hit twice")
        hit.add(c)
        if lab is None or lab.source != a or lab.target != b:
            shown = "none" if lab is None else f"{lab.source}->{lab.target}"
            return SwitchingReport(
                False, "labelling", d, f"edge {d} -> {c} needs a path {a}->{b}, has {shown}"
            )
        if base is not None and lab.arrows:
            try:
                base.validate(lab)
            except BaseCategoryError as exc:
                return SwitchingReport(False, "labelling", d, str(exc))
    # totality and injectivity make len(hit) the generator domain size;
    # surjectivity then means the generator codomain has the same size
    n_gen = sum(1 for leaf in ls if leaf[0] != "I") + sum(1 for leaf in lt if leaf[0] != "I")
    if n_gen - len(hit) != len(hit):
        missing = _first_unhit(f, hit)
        return SwitchingReport(False, "bijection", missing, f"{missing} is never hit")
    return None


def _first_unhit(f: Linking, hit: set[Endpoint]) -> Endpoint | None:
    fun = f.fun
    for i, leaf in enumerate(fun.source):
        if leaf.sign is Sign.NEG and not leaf.is_unit and src(i) not in hit:
            return src(i)
    for i, leaf in enumerate(fun.target):
        if leaf.sign is Sign.POS and not leaf.is_unit and tgt(i) not in hit:
            return tgt(i)
    return None


def proof_graph(f: Linking) -> ProofGraph:
    """Parse trees of source (switched where positive) and target, plus f-edges."""
    g = ProofGraph([(f.source, 1), (f.target, 0)])
    spos = f.source.leaf_positions
    tpos = f.target.leaf_positions
    off = g.offsets[1]
    items = f.fun.edges.items()
    g.add_edges(
        [spos[d[1]] if d[0] == "s" else off + tpos[d[1]] for d, _ in items],
        [spos[c[1]] if c[0] == "s" else off + tpos[c[1]] for _, (c, _) in items],
    )
    return g


def _switching_report(f: Linking, g: ProofGraph, result) -> SwitchingReport:
    if result.valid:
        return SwitchingReport(True)
    if result.choices is None:
        return SwitchingReport(False, "switching", None, result.reason)
    sides = "st"
    witness = tuple(
        (sides[tree], pos, c) for (tree, pos), c in zip(g.switched, result.choices)
    )
    return SwitchingReport(False, "switching", witness, f"a switching is {result.reason}")


def check_linking(
    f: Linking, base: BaseGraph | None = None, *, oracle: bool = False
) -> SwitchingReport:
    """Totality, bijection, labelling, then the switching condition.

    The switching condition uses graph contraction, or exhaustive
    enumeration when ``oracle`` is set.
    """
    bad = _local_conditions(f, base)
    if bad is not None:
        return bad
    g = proof_graph(f)
    result = bruteforce_check(g) if oracle else contract_check(g)
    return _switching_report(f, g, result)


def check_switching_bruteforce(f: Linking, bound: int = 20) -> SwitchingReport:
    """Like :func:`check_linking`, but enumerating every switching.

    Raises :class:`BoundExceeded` past ``bound`` switched tensors.
    """
    bad = _local_conditions(f, None)
    if bad is not None:
        return bad
    g = proof_graph(f)
    return _switching_report(f, g, bruteforce_check(g, bound))


def replay_switching(f: Linking, witness: Sequence[tuple[str, int, int]]) -> bool:
    """True iff the given switching of ``f`` is a tree."""
    g = proof_graph(f)
    order = {(("st")[tree], pos): j for j, (tree, pos) in enumerate(g.switched)}
    choices = [0] * g.n_switched
    if len(witness) != len(choices):
        raise LinkingError("witness must choose for every switched tensor")
    for side, pos, c in witness:
        choices[order[(side, pos)]] = c
    return switching_is_tree(g, choices)


def switched_tensors(f: Linking) -> list[tuple[str, int]]:
    """Switched tensors as ``(side, postfix position)``: positive in the source, negative in the target."""
    return [("st"[tree], pos) for tree, pos in proof_graph(f).switched]


def _require_valid(f: Linking, what: str) -> Linking:
    rep = check_linking(f)
    if not rep.valid:
        raise InternalFault(f"{what} produced an invalid linking: {rep}")
    return f


# -- composition -------------------------------------------------------------------


def compose(f: Linking, g: Linking, *, check: bool = True) -> Linking:
    """Path composite ``f ; g : S -> U``."""
    if f.target != g.source:
        raise LinkingError(
            f"cannot compose: {print_shape(f.target)} != {print_shape(g.source)}"
        )
    h = Linking(f.source, g.target, compose_plf(f.fun, g.fun))
    return _require_valid(h, "composition") if check else h


def compatibility_check(f: Linking, g: Linking) -> bool:
    """True iff the union of ``f`` and ``g`` on ``S + T + U`` is acyclic."""
    if f.target != g.source:
        raise LinkingError("not composable")

    def node_f(e: Endpoint) -> tuple[int, int]:
        return (0 if e.side == "s" else 1, e.index)

    def node_g(e: Endpoint) -> tuple[int, int]:
        return (1 if e.side == "s" else 2, e.index)

    succ: dict[tuple[int, int], list[tuple[int, int]]] = {}
    indeg: dict[tuple[int, int], int] = {}
    for fun, node in ((f, node_f), (g, node_g)):
        for d, (c, _) in fun.edges.items():
            u, v = node(d), node(c)
            succ.setdefault(u, []).append(v)
            indeg[v] = indeg.get(v, 0) + 1
            indeg.setdefault(u, indeg.get(u, 0))
    ready = [v for v, k in indeg.items() if k == 0]
    removed = 0
    while ready:
        u = ready.pop()
        removed += 1
        for v in succ.get(u, ()):
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
    return removed == len(indeg)


# -- structure maps ---------------------------------------------------------------


def _pairing(source: Shape, target: Shape, pairs: Iterable[tuple[int, int]]) -> dict:
    """Edges identifying source leaf ``i`` with target leaf ``j`` for each pair."""
    ls = leaves(source)
    edges = {}
    for i, j in pairs:
        leaf = ls[i]
        lab = None if leaf.is_unit else PathMorphism(leaf.atom, leaf.atom)
        if leaf.sign is Sign.POS:
            edges[src(i)] = (tgt(j), lab)
        else:
            edges[tgt(j)] = (src(i), lab)
    return edges


def identity(s: Shape) -> Linking:
    return Linking(s, s, _pairing(s, s, ((i, i) for i in range(s.n_leaves))))


def assoc(s: Shape, t: Shape, u: Shape) -> Linking:
    """``(S*T)*U -> S*(T*U)``."""
    a, b = (s * t) * u, s * (t * u)
    return Linking(a, b, _pairing(a, b, ((i, i) for i in range(a.n_leaves))))


def assoc_inv(s: Shape, t: Shape, u: Shape) -> Linking:
    """``S*(T*U) -> (S*T)*U``."""
    a, b = s * (t * u), (s * t) * u
    return Linking(a, b, _pairing(a, b, ((i, i) for i in range(a.n_leaves))))


def sym(s: Shape, t: Shape) -> Linking:
    """``S*T -> T*S``."""
    ns, nt = s.n_leaves, t.n_leaves
    pairs = [(i, nt + i) for i in range(ns)] + [(ns + j, j) for j in range(nt)]
    return Linking(s * t, t * s, _pairing(s * t, t * s, pairs))


def unit_l(s: Shape) -> Linking:
    """``S -> I*S``; the added unit is positive in the target and gets no edge."""
    b = Shape(("I",)) * s
    return Linking(s, b, _pairing(s, b, ((i, i + 1) for i in range(s.n_leaves))))


def unit_r(s: Shape) -> Linking:
    """``S -> S*I``."""
    b = s * Shape(("I",))
    return Linking(s, b, _pairing(s, b, ((i, i) for i in range(s.n_leaves))))


def _first_leaf_target(s: Shape, target_offset: int) -> Endpoint:
    # the added unit points at the first leaf of S: target copy if positive
    if leaves(s)[0].sign is Sign.POS:
        return tgt(0)
    return src(target_offset)


def unit_l_inv(s: Shape) -> Linking:
    """``I*S -> S``; the added unit points at the first leaf of ``S``."""
    a = Shape(("I",)) * s
    edges = _pairing(a, s, ((i + 1, i) for i in range(s.n_leaves)))
    edges[src(0)] = (_first_leaf_target(s, 1), None)
    return Linking(a, s, edges)


def unit_r_inv(s: Shape) -> Linking:
    """``S*I -> S``; the added unit points at the first leaf of ``S``."""
    a = s * Shape(("I",))
    edges = _pairing(a, s, ((i, i) for i in range(s.n_leaves)))
    edges[src(s.n_leaves)] = (_first_leaf_target(s, 0), None)
    return Linking(a, s, edges)


def _remap(
    f: Linking, source: Shape, target: Shape, move: Callable[[Endpoint], Endpoint]
) -> Linking:
    edges = {move(d): (move(c), lab) for d, (c, lab) in f.edges.items()}
    return Linking(source, target, edges)


def curry(f: Linking) -> Linking:
    """``S*T -> U'`` becomes ``S -> (T*U)'`` with the same edges."""
    if f.source.kind != "tensor" or f.target.kind != "dual":
        raise LinkingError("curry needs a linking S*T -> U'")
    s, t = f.source.left, f.source.right
    u = f.target.arg
    ns, nt = s.n_leaves, t.n_leaves

    def move(e: Endpoint) -> Endpoint:
        if e.side == "t":
            return tgt(nt + e.index)
        if e.index < ns:
            return e
        return tgt(e.index - ns)

    return _remap(f, s, (t * u).dual(), move)


def uncurry(f: Linking) -> Linking:
    """``S -> (T*U)'`` becomes ``S*T -> U'``."""
    if f.target.kind != "dual" or f.target.arg.kind != "tensor":
        raise LinkingError("uncurry needs a linking S -> (T*U)'")
    s = f.source
    t, u = f.target.arg.left, f.target.arg.right
    ns, nt = s.n_leaves, t.n_leaves

    def move(e: Endpoint) -> Endpoint:
        if e.side == "s":
            return e
        if e.index < nt:
            return src(ns + e.index)
        return tgt(e.index - nt)

    return _remap(f, s * t, u.dual(), move)


def dual_mor(f: Linking) -> Linking:
    """``S -> T`` becomes ``T' -> S'`` with the same directed graph."""

    def move(e: Endpoint) -> Endpoint:
        return tgt(e.index) if e.side == "s" else src(e.index)

    return _remap(f, f.target.dual(), f.source.dual(), move)


def tensor_mor(f: Linking, g: Linking) -> Linking:
    """``S*S' -> T*T'`` as the disjoint union."""
    ns, nt = f.source.n_leaves, f.target.n_leaves
    edges = dict(f.edges)

    def move(e: Endpoint) -> Endpoint:
        return src(ns + e.index) if e.side == "s" else tgt(nt + e.index)

    for d, (c, lab) in g.edges.items():
        edges[move(d)] = (move(c), lab)
    return Linking(f.source * g.source, f.target * g.target, edges)


def gen(x: str, base: BaseGraph) -> Linking:
    """The generator edge ``a -> b`` labelled by the arrow ``x``."""
    a, b = base.arrow(x)
    return Linking(Shape((a,)), Shape((b,)), {src(0): (tgt(0), base.generator(x))})


# -- text format --------------------------------------------------------------------

_ENDPOINT = re.compile(r"([st])(\d+)")
_EDGE = re.compile(r"^\s*(\S+)\s*->\s*(\S+)\s*(?:\[([^\]]*)\])?\s*$")


def format_label(lab: PathMorphism | None) -> str:
    if lab is None or lab.is_identity:
        return ""
    return f" [{lab.applicative()}]"


def format_linking(f: Linking, name: str = "f") -> str:
    lines = [f"linking {name} : {print_shape(f.source)} -> {print_shape(f.target)}"]
    for d, c, lab in f:
        lines.append(f"{d} -> {c}{format_label(lab)}")
    return "\n".join(lines) + "\n"


def parse_label(text: str, a: str, b: str, base: BaseGraph | None) -> PathMorphism:
    """``z.y`` (first ``y`` then ``z``) or ``id_a`` as a path ``a -> b``."""
    text = text.strip()
    if not text or text == f"id_{a}":
        if a != b:
            raise LinkingError(f"identity label on an edge {a} -> {b}")
        return PathMorphism(a, a)
    names = tuple(reversed([n.strip() for n in text.split(".")]))
    if base is None:
        raise LinkingError(f"label [{text}] needs a base category")
    try:
        p = base.path(names)
    except BaseCategoryError as exc:
        raise LinkingError(str(exc)) from None
    if p.source != a or p.target != b:
        raise LinkingError(f"label [{text}] runs {p.source} -> {p.target}, edge needs {a} -> {b}")
    return p


def parse_endpoint(text: str) -> Endpoint:
    m = _ENDPOINT.fullmatch(text.strip())
    if not m:
        raise LinkingError(f"bad endpoint {text!r}")
    return Endpoint(m.group(1), int(m.group(2)))


def edges_from_lines(
    source: Shape,
    target: Shape,
    lines: Iterable[str],
    base: BaseGraph | None = None,
) -> dict:
    ls, lt = leaves(source), leaves(target)
    edges: dict = {}
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _EDGE.match(line)
        if not m:
            raise LinkingError(f"bad edge line {raw.strip()!r}")
        d, c = parse_endpoint(m.group(1)), parse_endpoint(m.group(2))
        for e in (d, c):
            side = ls if e.side == "s" else lt
            if e.index >= len(side):
                raise LinkingError(f"endpoint {e} out of range")
        if d in edges:
            raise LinkingError(f"two edges from {d}")
        a = (ls if d.side == "s" else lt)[d.index].atom
        b = (ls if c.side == "s" else lt)[c.index].atom
        if a == "I":
            if m.group(3) is not None and m.group(3).strip():
                raise LinkingError(f"unit edge {d} -> {c} carries a label")
            lab = None
        elif b == "I":
            raise LinkingError(f"generator leaf {d} points at a unit leaf")
        else:
            lab = parse_label(m.group(3) or "", a, b, base)
        edges[d] = (c, lab)
    return edges


def parse_linking(
    text: str, base: BaseGraph | None = None, shapes: Mapping[str, Shape] | None = None
) -> tuple[str, Linking]:
    """Parse one ``linking name : S -> T`` block followed by edge lines."""
    lines = [l for l in text.splitlines() if l.split("#", 1)[0].strip()]
    if not lines:
        raise LinkingError("empty linking block")
    m = re.match(r"^\s*linking\s+(\S+)\s*:\s*(.+?)\s*->\s*(.+?)\s*$", lines[0].split("#", 1)[0])
    if not m:
        raise LinkingError(f"bad header {lines[0]!r}")
    from .shape import _parse

    objects = None if base is None else base.objects
    source = _parse(m.group(2), objects, sugar=True, names=shapes)
    target = _parse(m.group(3), objects, sugar=True, names=shapes)
    edges = edges_from_lines(source, target, lines[1:], base)
    return m.group(1), Linking(source, target, edges)
