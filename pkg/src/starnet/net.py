"""Nets: linkings modulo rewiring of unit-sourced edges.

Two linkings are similar when one is obtained from the other by
retargeting a single edge whose source is a unit leaf.  Nets are the
classes of the equivalence this generates.  Classes are finite, so
equality is decided by breadth-first search, which also yields a
shortest rewiring chain.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator

from .base import BaseGraph, PathMorphism
from .goi import Endpoint, codomain_of, domain_of
from .linking import Linking, LinkingError, check_linking, compose
from .shape import Shape, leaves

__all__ = [
    "RewireStep",
    "EquivalenceVerdict",
    "ClassLimitExceeded",
    "EnumerationLimit",
    "similar_neighbors",
    "rewire",
    "replay_witness",
    "equivalent",
    "net_class",
    "net_compose",
    "enumerate_linkings",
    "enumerate_nets",
]

DEFAULT_MAX_CLASS_SIZE = 10**6


class ClassLimitExceeded(RuntimeError):
    pass


class EnumerationLimit(ValueError):
    pass


@dataclass(frozen=True, order=True)
class RewireStep:
    unit: Endpoint
    old: Endpoint
    new: Endpoint

    def __str__(self) -> str:
        return f"{self.unit}: {self.old} => {self.new}"


@dataclass(frozen=True)
class EquivalenceVerdict:
    """``outcome`` is ``"equal"``, ``"distinct"`` or ``"inconclusive"``.

    ``equal`` is None when inconclusive.  ``witness`` (when equal) is a
    shortest rewiring chain from the first linking to the second.
    ``explored`` counts class members visited.
    """

    outcome: str
    witness: tuple[RewireStep, ...] | None = None
    explored: int = 0

    @property
    def equal(self) -> bool | None:
        if self.outcome == "inconclusive":
            return None
        return self.outcome == "equal"

    def __bool__(self) -> bool:
        return self.outcome == "equal"


def _unit_domain(f: Linking) -> list[Endpoint]:
    ls, lt = f.fun.source, f.fun.target
    return [d for d in domain_of(ls, lt) if (ls if d.side == "s" else lt)[d.index].is_unit]


def rewire(f: Linking, step: RewireStep) -> Linking:
    """Apply one step; the old target must match."""
    hit = f.edges.get(step.unit)
    if hit is None or hit[0] != step.old:
        raise LinkingError(f"step {step} does not apply")
    edges = dict(f.edges)
    edges[step.unit] = (step.new, None)
    return Linking(f.source, f.target, edges)


def _neighbor_steps(f: Linking) -> Iterator[tuple[RewireStep, Linking]]:
    cod = codomain_of(f.fun.source, f.fun.target)
    for d in _unit_domain(f):
        old = f.edges[d][0]
        for c in cod:
            if c == old:
                continue
            step = RewireStep(d, old, c)
            g = rewire(f, step)
            if check_linking(g).valid:
                yield step, g


def similar_neighbors(f: Linking) -> set[Linking]:
    """Valid linkings differing from ``f`` by one retargeted unit edge."""
    return {g for _, g in _neighbor_steps(f)}


def replay_witness(f: Linking, steps: Iterable[RewireStep], check: bool = True) -> Linking:
    """Apply a rewiring chain; every intermediate must be a valid linking."""
    for step in steps:
        f = rewire(f, step)
        if check and not check_linking(f).valid:
            raise LinkingError(f"step {step} leaves the class of valid linkings")
    return f


def equivalent(
    f: Linking,
    g: Linking,
    max_class_size: int = DEFAULT_MAX_CLASS_SIZE,
    allow_rewiring: bool = True,
) -> EquivalenceVerdict:
    """Breadth-first search of the class of ``f`` for ``g``."""
    if f.source != g.source or f.target != g.target:
        raise LinkingError("equivalence needs equal source and target shapes")
    if f == g:
        return EquivalenceVerdict("equal", (), 1)
    if not allow_rewiring:
        return EquivalenceVerdict("distinct", None, 1)
    parent: dict[Linking, tuple[Linking, RewireStep] | None] = {f: None}
    todo = deque([f])
    while todo:
        h = todo.popleft()
        for step, nb in _neighbor_steps(h):
            if nb in parent:
                continue
            parent[nb] = (h, step)
            if nb == g:
                chain = []
                cur = nb
                while parent[cur] is not None:
                    prev, st = parent[cur]
                    chain.append(st)
                    cur = prev
                return EquivalenceVerdict("equal", tuple(reversed(chain)), len(parent))
            if len(parent) >= max_class_size:
                return EquivalenceVerdict("inconclusive", None, len(parent))
            todo.append(nb)
    return EquivalenceVerdict("distinct", None, len(parent))


def net_class(f: Linking, max_class_size: int = DEFAULT_MAX_CLASS_SIZE) -> frozenset[Linking]:
    """Every linking similar-reachable from ``f``."""
    seen = {f}
    todo = deque([f])
    while todo:
        h = todo.popleft()
        for nb in similar_neighbors(h):
            if nb not in seen:
                if len(seen) >= max_class_size:
                    raise ClassLimitExceeded(f"class exceeds {max_class_size} linkings")
                seen.add(nb)
                todo.append(nb)
    return frozenset(seen)


def net_compose(f: Linking, g: Linking) -> Linking:
    """A representative of the composite net."""
    return compose(f, g)


def _atom(ls, lt, e: Endpoint) -> str:
    return (ls if e.side == "s" else lt)[e.index].atom


def enumerate_linkings(
    s: Shape,
    t: Shape,
    limit: int = 12,
    base: BaseGraph | None = None,
    max_label_length: int = 0,
) -> set[Linking]:
    """All valid linkings ``S -> T``.

    Generator edges range over bijections labelled by base paths of at
    most ``max_label_length`` arrows (identities only by default); unit
    edges range over every codomain endpoint.  ``limit`` bounds the total
    leaf count.
    """
    ls, lt = leaves(s), leaves(t)
    if len(ls) + len(lt) > limit:
        raise EnumerationLimit(f"{len(ls) + len(lt)} leaves exceed the limit {limit}")
    dom = domain_of(ls, lt)
    cod = codomain_of(ls, lt)
    gen_dom = [d for d in dom if _atom(ls, lt, d) != "I"]
    unit_dom = [d for d in dom if _atom(ls, lt, d) == "I"]
    gen_cod = [c for c in cod if _atom(ls, lt, c) != "I"]
    if len(gen_dom) != len(gen_cod):
        return set()

    def labels(a: str, b: str) -> list[PathMorphism]:
        if base is None:
            return [PathMorphism(a, a)] if a == b else []
        return base.paths(a, b, max_label_length)

    out: set[Linking] = set()

    def gen_assignments(i: int, used: set[Endpoint], acc: dict) -> Iterator[dict]:
        if i == len(gen_dom):
            yield dict(acc)
            return
        d = gen_dom[i]
        a = _atom(ls, lt, d)
        for c in gen_cod:
            if c in used:
                continue
            for lab in labels(a, _atom(ls, lt, c)):
                acc[d] = (c, lab)
                used.add(c)
                yield from gen_assignments(i + 1, used, acc)
                used.discard(c)
                del acc[d]

    for gen_part in gen_assignments(0, set(), {}):
        for targets in product(cod, repeat=len(unit_dom)):
            edges = dict(gen_part)
            for d, c in zip(unit_dom, targets):
                edges[d] = (c, None)
            f = Linking(s, t, edges)
            if check_linking(f).valid:
                out.add(f)
    return out


def enumerate_nets(
    s: Shape,
    t: Shape,
    limit: int = 12,
    base: BaseGraph | None = None,
    max_label_length: int = 0,
) -> list[frozenset[Linking]]:
    """The valid linkings ``S -> T`` partitioned into nets."""
    remaining = enumerate_linkings(s, t, limit, base, max_label_length)
    classes = []
    for f in sorted(remaining, key=Linking.key):
        if any(f in c for c in classes):
            continue
        classes.append(net_class(f))
    return classes
