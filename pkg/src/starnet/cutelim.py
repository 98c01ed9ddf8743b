"""One-sided linkings on cut sequents, and cut elimination.

Leaves of a cut sequent are addressed as ports ``(tree, leaf)``, with
trees numbered as in :meth:`CutSequent.trees`.  A one-sided linking sends
every negative leaf to a positive leaf.  Leaf ``i`` of a cut shape ``S``
and leaf ``i`` of its partner ``S'`` have opposite signs; a path that
enters one leaves from the other.
"""

from __future__ import annotations

import random
import re
from typing import Callable, Mapping, Sequence

from .base import BaseGraph, PathMorphism, compose_path
from .criterion import InternalFault, ProofGraph, bruteforce_check, contract_check
from .goi import Sign, src, tgt
from .linking import Linking, LinkingError, SwitchingReport, parse_label
from .shape import CutSequent, Shape, _parse, leaves, print_shape

__all__ = [
    "Port",
    "OneSidedLinking",
    "CutError",
    "two_to_one",
    "one_to_two",
    "check_one_sided",
    "eliminate_cut",
    "normalize_stepwise",
    "turbo_normalize",
    "cut_compose",
    "chain_sequent",
    "format_one_sided",
    "parse_one_sided",
]

Port = tuple[int, int]
Label = "PathMorphism | None"


class CutError(ValueError):
    """Bad cut index, malformed port, or a sequent of the wrong pattern."""


def _join(x: PathMorphism | None, y: PathMorphism | None) -> PathMorphism | None:
    if x is None or y is None:
        return None
    return compose_path(x, y)


class OneSidedLinking:
    """A leaf function on a cut sequent, from negative to positive leaves."""

    __slots__ = ("seq", "edges", "_trees")

    def __init__(self, seq: CutSequent, edges: Mapping[Port, tuple[Port, PathMorphism | None]]):
        self.seq = seq
        self.edges = dict(edges)
        self._trees = seq.trees()
        for d, (c, _) in self.edges.items():
            if self.sign(d) is not Sign.NEG:
                raise CutError(f"edge from non-negative port {d}")
            if self.sign(c) is not Sign.POS:
                raise CutError(f"edge into non-positive port {c}")

    @property
    def trees(self) -> list[Shape]:
        return self._trees

    def leaf(self, p: Port):
        tree, i = p
        if not 0 <= tree < len(self._trees):
            raise CutError(f"no tree {tree}")
        ls = leaves(self._trees[tree])
        if not 0 <= i < len(ls):
            raise CutError(f"no leaf {i} in tree {tree}")
        return ls[i]

    def sign(self, p: Port) -> Sign:
        return self.leaf(p).sign

    def ports(self) -> list[Port]:
        return [(t, i) for t, s in enumerate(self._trees) for i in range(s.n_leaves)]

    def negative_ports(self) -> list[Port]:
        return [p for p in self.ports() if self.sign(p) is Sign.NEG]

    def partner(self, p: Port) -> Port | None:
        """The matching leaf across a cut pair, or None outside cuts."""
        base = len(self.seq.shapes)
        tree, i = p
        if tree < base:
            return None
        return (base + ((tree - base) ^ 1), i)

    def n_vertices(self) -> int:
        return self.seq.n_vertices()

    def key(self) -> tuple:
        return (
            tuple(s.tokens for s in self.seq.shapes),
            tuple(s.tokens for s in self.seq.cuts),
            tuple(sorted(self.edges.items())),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OneSidedLinking):
            return NotImplemented
        return self.seq == other.seq and self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"OneSidedLinking({self.seq}, {len(self.edges)} edges)"

    def __str__(self) -> str:
        return format_one_sided(self)


# -- two-sided correspondence -------------------------------------------------------


def two_to_one(f: Linking) -> OneSidedLinking:
    """``f : S -> T`` as a one-sided linking on ``S', T``."""

    def port(e) -> Port:
        return (0 if e.side == "s" else 1, e.index)

    seq = CutSequent((f.source.dual(), f.target))
    return OneSidedLinking(seq, {port(d): (port(c), lab) for d, (c, lab) in f.edges.items()})


def one_to_two(L: OneSidedLinking) -> Linking:
    """Inverse of :func:`two_to_one` on cut-free sequents ``S', T``."""
    seq = L.seq
    if seq.cuts or len(seq.shapes) != 2 or seq.shapes[0].kind != "dual":
        raise CutError("one_to_two needs a cut-free sequent S', T")

    def end(p: Port):
        return src(p[1]) if p[0] == 0 else tgt(p[1])

    edges = {end(d): (end(c), lab) for d, (c, lab) in L.edges.items()}
    return Linking(seq.shapes[0].arg, seq.shapes[1], edges)


# -- criterion ----------------------------------------------------------------------


def proof_graph(L: OneSidedLinking) -> ProofGraph:
    g = ProofGraph([(s, 0) for s in L.trees])
    for k in range(len(L.seq.cuts)):
        a, b = L.seq.cut_trees(k)
        g.add_edge(g.root(a), g.root(b))
    items = L.edges.items()
    g.add_edges([g.leaf(*d) for d, _ in items], [g.leaf(*c) for _, (c, _) in items])
    return g


def check_one_sided(
    L: OneSidedLinking, base: BaseGraph | None = None, *, oracle: bool = False
) -> SwitchingReport:
    """Totality, bijection on generator leaves, labelling, switching."""
    neg = L.negative_ports()
    for d in neg:
        if d not in L.edges:
            return SwitchingReport(False, "totality", d, f"no edge from {d}")
    hit: set[Port] = set()
    n_pos_gen = 0
    for p in L.ports():
        leaf = L.leaf(p)
        if leaf.sign is Sign.POS and not leaf.is_unit:
            n_pos_gen += 1
    for d, (c, lab) in L.edges.items():
        a, b = L.leaf(d).atom, L.leaf(c).atom
        if a == "I":
            if lab is not None:
                return SwitchingReport(False, "labelling", d, f"unit edge from {d} is labelled")
            continue
        if b == "I":
            return SwitchingReport(False, "bijection", d, f"generator leaf {d} points at a unit leaf")
        if c in hit:
            return SwitchingReport(False, "bijection", c, f"{c} is hit twice")
        hit.add(c)
        if lab is None or lab.source != a or lab.target != b:
            return SwitchingReport(False, "labelling", d, f"edge from {d} needs a path {a}->{b}")
        if base is not None and lab.arrows:
            base.validate(lab)
    if len(hit) != n_pos_gen:
        return SwitchingReport(False, "bijection", None, "a positive generator leaf is never hit")
    g = proof_graph(L)
    res = bruteforce_check(g) if oracle else contract_check(g)
    if res.valid:
        return SwitchingReport(True)
    witness = None
    if res.choices is not None:
        witness = tuple((t, pos, c) for (t, pos), c in zip(g.switched, res.choices))
    return SwitchingReport(False, "switching", witness, f"a switching is {res.reason}")


# -- cut elimination ----------------------------------------------------------------


def _rebuild(
    L: OneSidedLinking,
    seq: CutSequent,
    move: Callable[[Port], Port],
) -> OneSidedLinking:
    return OneSidedLinking(seq, {move(d): (move(c), lab) for d, (c, lab) in L.edges.items()})


def eliminate_cut(L: OneSidedLinking, k: int) -> OneSidedLinking:
    """One cut-elimination step on cut pair ``k``.

    Atom: every edge into ``l+`` is redirected to ``f(l-)`` and the pair is
    deleted.  Tensor: ``<T*U>`` becomes ``<T>, <U>`` at indices ``k`` and
    ``k + 1``.  Dual: ``<T'>`` becomes ``<T>``.
    """
    seq = L.seq
    if not 0 <= k < len(seq.cuts):
        raise CutError(f"no cut pair {k}")
    s = seq.cuts[k]
    ta, tb = seq.cut_trees(k)
    kind = s.kind

    if kind == "atom":
        plus, minus = (ta, 0), (tb, 0)  # S is the positive side
        if minus not in L.edges:
            raise CutError(f"cut leaf {minus} has no edge")
        out, y = L.edges[minus]
        if out == plus:
            raise InternalFault("atomic cut pair linked to itself")
        cuts = seq.cuts[:k] + seq.cuts[k + 1 :]
        new_seq = CutSequent(seq.shapes, cuts)

        def move(p: Port) -> Port:
            return p if p[0] < ta else (p[0] - 2, p[1])

        edges = {}
        for d, (c, x) in L.edges.items():
            if d == minus:
                continue
            if c == plus:
                c, x = out, _join(x, y)
            edges[move(d)] = (move(c), x)
        return OneSidedLinking(new_seq, edges)

    if kind == "tensor":
        t, u = s.left, s.right
        nt = t.n_leaves
        cuts = seq.cuts[:k] + (t, u) + seq.cuts[k + 1 :]
        new_seq = CutSequent(seq.shapes, cuts)
        # new trees: ta = T, ta+1 = T', ta+2 = U, ta+3 = U'

        def move(p: Port) -> Port:
            tree, i = p
            if tree < ta:
                return p
            if tree > tb:
                return (tree + 2, i)
            side = tree - ta  # 0 for S, 1 for S'
            if i < nt:
                return (ta + side, i)
            return (ta + 2 + side, i - nt)

        return _rebuild(L, new_seq, move)

    # dual: <T'> | <T''>  becomes  <T> | <T'>
    t = s.arg
    cuts = seq.cuts[:k] + (t,) + seq.cuts[k + 1 :]
    new_seq = CutSequent(seq.shapes, cuts)

    def swap(p: Port) -> Port:
        tree, i = p
        if tree == ta:
            return (tb, i)
        if tree == tb:
            return (ta, i)
        return p

    return _rebuild(L, new_seq, swap)


def normalize_stepwise(
    L: OneSidedLinking,
    strategy: str = "leftmost",
    seed: int | None = None,
    trace: list | None = None,
) -> OneSidedLinking:
    """Eliminate cuts one step at a time until none remain.

    ``strategy`` is ``"leftmost"``, ``"rightmost"`` or ``"random"``.  When
    ``trace`` is a list, the vertex count before each step and after the
    last is appended to it.
    """
    rng = random.Random(seed)
    while L.seq.cuts:
        if trace is not None:
            trace.append(L.n_vertices())
        n = len(L.seq.cuts)
        if strategy == "leftmost":
            k = 0
        elif strategy == "rightmost":
            k = n - 1
        elif strategy == "random":
            k = rng.randrange(n)
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        L = eliminate_cut(L, k)
    if trace is not None:
        trace.append(L.n_vertices())
    return L


def turbo_normalize(L: OneSidedLinking) -> OneSidedLinking:
    """Delete every cut pair at once, following paths through the cuts."""
    seq = L.seq
    base = len(seq.shapes)
    if not seq.cuts:
        return L
    edges = {}
    for d, (c, lab) in L.edges.items():
        if d[0] >= base:
            continue
        seen: set[Port] = set()
        while c[0] >= base:
            if c in seen:
                raise InternalFault(f"cycle through cut pairs from {d}")
            seen.add(c)
            q = (base + ((c[0] - base) ^ 1), c[1])
            hop = L.edges.get(q)
            if hop is None:
                raise InternalFault(f"path from {d} is stuck at {q}")
            c, y = hop
            lab = _join(lab, y)
        edges[d] = (c, lab)
    return OneSidedLinking(CutSequent(seq.shapes), edges)


# -- embedding composites -------------------------------------------------------------


def chain_sequent(fs: Sequence[Linking]) -> OneSidedLinking:
    """``S0 -> S1 -> ... -> Sn`` as one sequent ``S0', Sn`` with cuts ``<S1> ... <Sn-1>``."""
    if not fs:
        raise CutError("empty chain")
    for f, g in zip(fs, fs[1:]):
        if f.target != g.source:
            raise LinkingError(
                f"cannot chain: {print_shape(f.target)} != {print_shape(g.source)}"
            )
    n = len(fs)
    seq = CutSequent((fs[0].source.dual(), fs[-1].target), tuple(f.target for f in fs[:-1]))
    edges = {}
    for k, f in enumerate(fs):
        s_tree = 0 if k == 0 else 3 + 2 * (k - 1)
        t_tree = 1 if k == n - 1 else 2 + 2 * k

        def port(e, s_tree=s_tree, t_tree=t_tree) -> Port:
            return (s_tree if e.side == "s" else t_tree, e.index)

        for d, (c, lab) in f.edges.items():
            edges[port(d)] = (port(c), lab)
    return OneSidedLinking(seq, edges)


def cut_compose(f: Linking, g: Linking) -> OneSidedLinking:
    """``f`` and ``g`` side by side on ``S', U`` with the cut ``<T>``."""
    return chain_sequent([f, g])


# -- text format ----------------------------------------------------------------------

_PORT = re.compile(r"g(\d+)\.(\d+)")
_EDGE = re.compile(r"^\s*(\S+)\s*->\s*(\S+)\s*(?:\[([^\]]*)\])?\s*$")


def _fmt_port(p: Port) -> str:
    return f"g{p[0]}.{p[1]}"


def format_one_sided(L: OneSidedLinking) -> str:
    lines = ["sequent: " + ", ".join(print_shape(s) for s in L.seq.shapes)]
    lines += [f"cut: {print_shape(c)}" for c in L.seq.cuts]
    for d, (c, lab) in sorted(L.edges.items()):
        tail = "" if lab is None or lab.is_identity else f" [{lab.applicative()}]"
        lines.append(f"{_fmt_port(d)} -> {_fmt_port(c)}{tail}")
    return "\n".join(lines) + "\n"


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_one_sided(
    text: str, base: BaseGraph | None = None, shapes: Mapping[str, Shape] | None = None
) -> OneSidedLinking:
    """Parse ``sequent:`` / ``cut:`` lines followed by ``g<tree>.<leaf>`` edges."""
    objects = None if base is None else base.objects
    seq_shapes: list[Shape] | None = None
    cuts: list[Shape] = []
    raw_edges: list[str] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("sequent:"):
            body = line[len("sequent:") :]
            seq_shapes = [_parse(p, objects, sugar=True, names=shapes) for p in _split_top(body)]
        elif line.startswith("cut:"):
            cuts.append(_parse(line[len("cut:") :], objects, sugar=True, names=shapes))
        else:
            raw_edges.append(line)
    if seq_shapes is None:
        raise CutError("missing 'sequent:' line")
    seq = CutSequent(tuple(seq_shapes), tuple(cuts))
    trees = seq.trees()
    edges: dict = {}
    for line in raw_edges:
        m = _EDGE.match(line)
        if not m:
            raise CutError(f"bad edge line {line!r}")
        ends = []
        for text_port in (m.group(1), m.group(2)):
            pm = _PORT.fullmatch(text_port)
            if not pm:
                raise CutError(f"bad port {text_port!r}")
            p = (int(pm.group(1)), int(pm.group(2)))
            if p[0] >= len(trees) or p[1] >= trees[p[0]].n_leaves:
                raise CutError(f"port {text_port} out of range")
            ends.append(p)
        d, c = ends
        if d in edges:
            raise CutError(f"two edges from {_fmt_port(d)}")
        a = leaves(trees[d[0]])[d[1]].atom
        b = leaves(trees[c[0]])[c[1]].atom
        if a == "I":
            if m.group(3):
                raise CutError(f"unit edge from {_fmt_port(d)} cannot carry a label")
            lab = None
        elif b == "I":
            raise CutError(f"generator leaf {_fmt_port(d)} points at a unit leaf")
        else:
            try:
                lab = parse_label(m.group(3) or "", a, b, base)
            except LinkingError as exc:
                raise CutError(str(exc)) from None
        edges[d] = (c, lab)
    return OneSidedLinking(seq, edges)
