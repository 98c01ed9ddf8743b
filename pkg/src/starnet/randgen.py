"""Random shapes, random valid linkings, and random candidate leaf functions.

Valid linkings are read off random cut-free sequent proofs, so they are
correct by construction and never need the criterion to be produced.
That keeps them usable as independent test inputs for the checker.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .base import BaseGraph, PathMorphism
from .goi import UNIT, Endpoint, Sign, codomain_of, domain_of, src, tgt
from .linking import Linking
from .shape import DUAL, TENSOR, Shape, leaves

__all__ = [
    "random_shape",
    "random_linking",
    "random_linking_into",
    "random_linking_from",
    "random_composable",
    "random_chain",
    "random_candidate",
    "perturb",
]


def random_shape(
    rng: random.Random,
    n_leaves: int,
    atoms: tuple[str, ...] = ("a", "b"),
    p_unit: float = 0.3,
    p_dual: float = 0.3,
) -> Shape:
    """A random shape with exactly ``n_leaves`` leaves."""

    def build(n: int) -> list[str]:
        if n == 1:
            toks = [UNIT if rng.random() < p_unit else rng.choice(atoms)]
        else:
            k = rng.randint(1, n - 1)
            toks = build(k) + build(n - k) + [TENSOR]
        while rng.random() < p_dual:
            toks.append(DUAL)
        return toks

    return Shape(build(n_leaves))


# -- proofs ------------------------------------------------------------------------


@dataclass
class _Proof:
    """A cut-free proof: conclusion formulas with leaf ids, and the axiom links."""

    ctx: list[tuple[Shape, list[int]]] = field(default_factory=list)
    edges: dict[int, tuple[int, PathMorphism | None]] = field(default_factory=dict)


class _Prover:
    def __init__(self, rng: random.Random, base: BaseGraph | None, p_arrow: float, size: int):
        self.rng = rng
        self.base = base
        self.p_arrow = p_arrow
        self.size = size
        self.next_id = 0
        self.sign: dict[int, Sign] = {}

    def fresh(self, n: int, signs) -> list[int]:
        ids = list(range(self.next_id, self.next_id + n))
        self.next_id += n
        for i, s in zip(ids, signs):
            self.sign[i] = s
        return ids

    def side_formula(self) -> Shape:
        return random_shape(self.rng, self.rng.randint(1, max(1, self.size)), self._atoms())

    def _atoms(self) -> tuple[str, ...]:
        if self.base is not None and self.base.objects:
            return tuple(self.base.objects)
        return ("a", "b")

    def _arrow_into(self, a: str) -> tuple[str, PathMorphism]:
        """A source object ``b`` with a path ``b -> a`` (often the identity)."""
        if self.base is not None and self.rng.random() < self.p_arrow:
            choices = [n for n, (s, t) in self.base._arrow_index.items() if t == a]
            if choices:
                x = self.rng.choice(choices)
                return self.base.arrow(x)[0], self.base.generator(x)
        return a, PathMorphism(a, a)

    def _arrow_from(self, a: str) -> tuple[str, PathMorphism]:
        if self.base is not None and self.rng.random() < self.p_arrow:
            choices = [n for n, (s, t) in self.base._arrow_index.items() if s == a]
            if choices:
                x = self.rng.choice(choices)
                return self.base.arrow(x)[1], self.base.generator(x)
        return a, PathMorphism(a, a)

    def attach_bot(self, p: _Proof, extra: list[int] = ()) -> None:
        """Add a bot to the context with its edge to a random positive leaf."""
        pool = [i for _, ids in p.ctx for i in ids] + list(extra)
        pos = [i for i in pool if self.sign[i] is Sign.POS]
        (leaf,) = self.fresh(1, [Sign.NEG])
        p.edges[leaf] = (self.rng.choice(pos), None)
        p.ctx.append((Shape((UNIT, DUAL)), [leaf]))

    def prove(self, t: Shape) -> _Proof:
        """A proof of ``Gamma, t`` with ``t`` last in the context."""
        rng = self.rng
        kind = t.kind
        if kind == "atom":
            if t.is_unit:
                return _Proof([(t, self.fresh(1, [Sign.POS]))])
            b, lab = self._arrow_into(t.name)
            neg, pos = self.fresh(2, [Sign.NEG, Sign.POS])
            return _Proof([(Shape((b, DUAL)), [neg]), (t, [pos])], {neg: (pos, lab)})
        if kind == "tensor":
            p1 = self.prove(t.left)
            p2 = self.prove(t.right)
            a, ids_a = p1.ctx.pop()
            b, ids_b = p2.ctx.pop()
            edges = {**p1.edges, **p2.edges}
            return _Proof(p1.ctx + p2.ctx + [(t, ids_a + ids_b)], edges)
        inner = t.arg
        if inner.kind == "dual":
            p = self.prove(inner.arg)
            x, ids = p.ctx.pop()
            p.ctx.append((t, ids))
            return p
        if inner.kind == "atom":
            if inner.is_unit:
                # bot: prove a side formula, then link the bot leaf into it
                p = self.prove(self.side_formula())
                pos = [i for _, ids in p.ctx for i in ids if self.sign[i] is Sign.POS]
                (leaf,) = self.fresh(1, [Sign.NEG])
                p.edges[leaf] = (rng.choice(pos), None)
                p.ctx.append((t, [leaf]))
                return p
            b, lab = self._arrow_from(inner.name)
            neg, pos = self.fresh(2, [Sign.NEG, Sign.POS])
            return _Proof([(Shape((b,)), [pos]), (t, [neg])], {neg: (pos, lab)})
        # (A*B)' is the par of A' and B': prove both, join the contexts by a
        # tensor, then the par is a switched tensor over the two
        a, b = inner.left, inner.right
        p1 = self.prove(a.dual())
        p2 = self.prove(b.dual())
        fa, ids_a = p1.ctx.pop()
        fb, ids_b = p2.ctx.pop()
        for p, ids in ((p1, ids_a), (p2, ids_b)):
            if not p.ctx:
                self.attach_bot(p, ids)
        c1 = p1.ctx.pop(rng.randrange(len(p1.ctx)))
        c2 = p2.ctx.pop(rng.randrange(len(p2.ctx)))
        joined = (c1[0] * c2[0], c1[1] + c2[1])
        edges = {**p1.edges, **p2.edges}
        return _Proof(p1.ctx + p2.ctx + [joined, (t, ids_a + ids_b)], edges)


def _par_all(ctx: list[tuple[Shape, list[int]]]) -> tuple[Shape, list[int]]:
    g, ids = ctx[0]
    for h, more in ctx[1:]:
        g = (g.dual() * h.dual()).dual()
        ids = ids + more
    return g, ids


def _assemble(
    prover: _Prover, p: _Proof, t_ids: list[int], target: Shape, rng: random.Random
) -> Linking:
    if not p.ctx:
        prover.attach_bot(p, t_ids)
    rng.shuffle(p.ctx)
    g, g_ids = _par_all(p.ctx)
    source = g.arg if g.kind == "dual" else g.dual()
    where: dict[int, Endpoint] = {}
    for k, i in enumerate(g_ids):
        where[i] = src(k)
    for k, i in enumerate(t_ids):
        where[i] = tgt(k)
    edges = {where[d]: (where[c], lab) for d, (c, lab) in p.edges.items()}
    return Linking(source, target, edges)


def random_linking_into(
    rng: random.Random,
    target: Shape,
    base: BaseGraph | None = None,
    p_arrow: float = 0.5,
    side_size: int = 3,
) -> Linking:
    """A random valid linking ``S -> target`` for a generated ``S``."""
    prover = _Prover(rng, base, p_arrow, side_size)
    p = prover.prove(target)
    t, t_ids = p.ctx.pop()
    return _assemble(prover, p, t_ids, target, rng)


def random_linking(
    rng: random.Random,
    max_leaves: int = 6,
    base: BaseGraph | None = None,
    atoms: tuple[str, ...] | None = None,
    p_unit: float = 0.3,
    p_dual: float = 0.3,
) -> Linking:
    if atoms is None:
        atoms = tuple(base.objects) if base is not None and base.objects else ("a", "b")
    target = random_shape(rng, rng.randint(1, max_leaves), atoms, p_unit, p_dual)
    return random_linking_into(rng, target, base, side_size=max(1, max_leaves // 2))


def random_linking_from(
    rng: random.Random,
    source: Shape,
    base: BaseGraph | None = None,
    p_arrow: float = 0.5,
    side_size: int = 3,
) -> Linking:
    """A random valid linking ``source -> U`` for a generated ``U``."""
    prover = _Prover(rng, base, p_arrow, side_size)
    p = prover.prove(source.dual())
    _, s_ids = p.ctx.pop()
    if not p.ctx:
        prover.attach_bot(p, s_ids)
    rng.shuffle(p.ctx)
    u, u_ids = _par_all(p.ctx)
    where: dict[int, Endpoint] = {}
    for k, i in enumerate(s_ids):
        where[i] = src(k)
    for k, i in enumerate(u_ids):
        where[i] = tgt(k)
    edges = {where[d]: (where[c], lab) for d, (c, lab) in p.edges.items()}
    return Linking(source, u, edges)


def random_composable(
    rng: random.Random,
    max_leaves: int = 6,
    base: BaseGraph | None = None,
    p_unit: float = 0.3,
    p_dual: float = 0.3,
) -> tuple[Linking, Linking]:
    """Valid ``f : S -> T`` and ``g : T -> U``."""
    f = random_linking(rng, max_leaves, base, p_unit=p_unit, p_dual=p_dual)
    return f, random_linking_from(rng, f.target, base, side_size=max(1, max_leaves // 2))


def random_chain(
    rng: random.Random, n: int, max_leaves: int = 6, base: BaseGraph | None = None
) -> list[Linking]:
    """``n`` valid linkings, each composable with the next."""
    fs = [random_linking(rng, max_leaves, base)]
    while len(fs) < n:
        fs.append(random_linking_from(rng, fs[-1].target, base, side_size=max(1, max_leaves // 2)))
    return fs


def random_candidate(
    rng: random.Random, s: Shape, t: Shape, p_gen_ok: float = 0.9
) -> Linking:
    """A random leaf function ``s -> t`` (often failing the criterion).

    It is total unless there is no codomain leaf at all.

    Generator leaves are usually matched bijectively with identity labels,
    so most candidates reach the switching condition.
    """
    ls, lt = leaves(s), leaves(t)
    dom, cod = domain_of(ls, lt), codomain_of(ls, lt)

    def atom(e: Endpoint) -> str:
        return (ls if e.side == "s" else lt)[e.index].atom

    edges = {}
    gen_dom = [d for d in dom if atom(d) != UNIT]
    gen_cod = [c for c in cod if atom(c) != UNIT]
    if rng.random() < p_gen_ok:
        pool = list(gen_cod)
        rng.shuffle(pool)
        for d in gen_dom:
            same = [c for c in pool if atom(c) == atom(d)]
            if same:
                c = same[0]
                pool.remove(c)
            elif cod:
                c = rng.choice(cod)
            else:
                continue
            lab = PathMorphism(atom(d), atom(d)) if atom(c) == atom(d) else None
            edges[d] = (c, lab)
    else:
        for d in gen_dom:
            if cod:
                c = rng.choice(cod)
                lab = PathMorphism(atom(d), atom(d)) if atom(c) == atom(d) else None
                edges[d] = (c, lab)
    for d in dom:
        if atom(d) == UNIT and cod:
            edges[d] = (rng.choice(cod), None)
    return Linking(s, t, edges)


def perturb(rng: random.Random, f: Linking, moves: int = 1) -> Linking:
    """Retarget a few unit edges anywhere, or swap targets of two same-atom edges."""
    ls, lt = f.fun.source, f.fun.target
    cod = codomain_of(ls, lt)

    def atom(e: Endpoint) -> str:
        return (ls if e.side == "s" else lt)[e.index].atom

    edges = dict(f.edges)
    for _ in range(moves):
        keys = sorted(edges)
        if not keys:
            break
        d = rng.choice(keys)
        if atom(d) == UNIT:
            edges[d] = (rng.choice(cod), None)
            continue
        others = [e for e in keys if e != d and atom(e) == atom(d)]
        if others:
            e = rng.choice(others)
            (cd, ld), (ce, le) = edges[d], edges[e]
            if ld is not None and le is not None and ld.target == le.target:
                edges[d], edges[e] = (ce, ld), (cd, le)
    return Linking(f.source, f.target, edges)
