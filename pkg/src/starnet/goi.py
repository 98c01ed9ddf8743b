"""Signed sets and partial leaf functions, composed by following paths.

A partial leaf function ``X -> Y`` sends endpoints in ``X+ + Y-`` to
endpoints in ``X- + Y+``.  Composition glues ``f : X -> Y`` and
``g : Y -> Z`` along ``Y`` and chases each outer endpoint through the
alternating f/g hops until it leaves ``Y``.  Functionality of ``f`` and
``g`` makes each chase deterministic, so no graph search is needed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Mapping, NamedTuple

from .base import PathMorphism, compose_path

UNIT = "I"


class Sign(enum.Enum):
    POS = "+"
    NEG = "-"

    def __invert__(self) -> Sign:
        return Sign.NEG if self is Sign.POS else Sign.POS

    def __str__(self) -> str:
        return self.value

    @classmethod
    def of_parity(cls, parity: int) -> Sign:
        return cls.NEG if parity & 1 else cls.POS


class Leaf(NamedTuple):
    atom: str
    sign: Sign

    @property
    def is_unit(self) -> bool:
        return self.atom == UNIT

    def __str__(self) -> str:
        return f"<{self.atom},{self.sign}>"


class SignedSet(tuple):
    """An ordered tuple of :class:`Leaf` entries."""

    def __new__(cls, leaves=()):
        return super().__new__(cls, (Leaf(a, s) for a, s in leaves))

    def __repr__(self) -> str:
        return "SignedSet([" + ", ".join(str(l) for l in self) + "])"


def tensor_ss(x: SignedSet, y: SignedSet) -> SignedSet:
    return SignedSet(tuple(x) + tuple(y))


def dual_ss(x: SignedSet) -> SignedSet:
    return SignedSet((leaf.atom, ~leaf.sign) for leaf in x)


class Endpoint(NamedTuple):
    side: str  # "s" or "t"
    index: int

    def __str__(self) -> str:
        return f"{self.side}{self.index}"


def src(i: int) -> Endpoint:
    return Endpoint("s", i)


def tgt(i: int) -> Endpoint:
    return Endpoint("t", i)


class LeafFunctionError(ValueError):
    pass


Edge = tuple[Endpoint, "PathMorphism | None"]


def domain_of(source: SignedSet, target: SignedSet) -> list[Endpoint]:
    """``X+ + Y-`` in leaf order, source side first."""
    dom = [src(i) for i, leaf in enumerate(source) if leaf.sign is Sign.POS]
    dom += [tgt(i) for i, leaf in enumerate(target) if leaf.sign is Sign.NEG]
    return dom


def codomain_of(source: SignedSet, target: SignedSet) -> list[Endpoint]:
    """``X- + Y+`` in leaf order, source side first."""
    cod = [src(i) for i, leaf in enumerate(source) if leaf.sign is Sign.NEG]
    cod += [tgt(i) for i, leaf in enumerate(target) if leaf.sign is Sign.POS]
    return cod


def _leaf_at(source: SignedSet, target: SignedSet, e: Endpoint) -> Leaf:
    side = source if e.side == "s" else target
    if e.side not in ("s", "t") or not 0 <= e.index < len(side):
        raise LeafFunctionError(f"endpoint {e} out of range")
    return side[e.index]


def in_domain(source: SignedSet, target: SignedSet, e: Endpoint) -> bool:
    leaf = _leaf_at(source, target, e)
    return (leaf.sign is Sign.POS) == (e.side == "s")


@dataclass(frozen=True, eq=False)
class PartialLeafFun:
    """A partial leaf function with optional path labels on its edges.

    ``edges`` maps each defined domain endpoint to ``(codomain endpoint,
    label or None)``.
    """

    source: SignedSet
    target: SignedSet
    edges: Mapping[Endpoint, Edge]

    def __post_init__(self) -> None:
        edges = dict(self.edges)
        for d, (c, _) in edges.items():
            if not in_domain(self.source, self.target, d):
                raise LeafFunctionError(f"{d} is not a domain endpoint")
            if in_domain(self.source, self.target, c):
                raise LeafFunctionError(f"{c} is not a codomain endpoint")
        object.__setattr__(self, "edges", edges)

    def __call__(self, e: Endpoint) -> Endpoint | None:
        hit = self.edges.get(e)
        return None if hit is None else hit[0]

    def label(self, e: Endpoint) -> PathMorphism | None:
        return self.edges[e][1]

    def domain(self) -> list[Endpoint]:
        return domain_of(self.source, self.target)

    def codomain(self) -> list[Endpoint]:
        return codomain_of(self.source, self.target)

    def is_total(self) -> bool:
        return all(d in self.edges for d in self.domain())

    def key(self) -> tuple:
        return tuple(sorted(self.edges.items()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialLeafFun):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.key()))

    def __iter__(self) -> Iterator[tuple[Endpoint, Endpoint, PathMorphism | None]]:
        for d, (c, lab) in sorted(self.edges.items()):
            yield d, c, lab


def identity_plf(x: SignedSet, labelled: bool = True) -> PartialLeafFun:
    """The leaf-wise identity ``X -> X``; generator edges get identity paths."""
    edges = {}
    for i, leaf in enumerate(x):
        lab = None if leaf.is_unit or not labelled else PathMorphism(leaf.atom, leaf.atom)
        if leaf.sign is Sign.POS:
            edges[src(i)] = (tgt(i), lab)
        else:
            edges[tgt(i)] = (src(i), lab)
    return PartialLeafFun(x, x, edges)


def _chase(f: PartialLeafFun, g: PartialLeafFun, start: Endpoint):
    """Follow ``start`` through alternating f/g hops.

    Yields the hops as ``(from, to, label)`` in the local coordinates of
    the leaf function taking them, tagged with ``"f"`` or ``"g"``.  Returns
    when the walk reaches an outer endpoint, the leaf function is
    undefined, or a cycle through the middle object is detected.
    """
    # Outer endpoints: f's source side, g's target side.  Middle: f.target == g.source.
    if start.side == "s":
        fun, here = "f", start
    else:
        fun, here = "g", start
    seen: set[tuple[str, Endpoint]] = set()
    while True:
        if (fun, here) in seen:
            return
        seen.add((fun, here))
        h = f if fun == "f" else g
        hit = h.edges.get(here)
        if hit is None:
            return
        there, lab = hit
        yield fun, here, there, lab
        if fun == "f":
            if there.side == "s":
                return  # reached X-
            fun, here = "g", src(there.index)  # Y+ of f is Y+ of g's source
        else:
            if there.side == "t":
                return  # reached Z+
            fun, here = "f", tgt(there.index)


def compose_plf(f: PartialLeafFun, g: PartialLeafFun) -> PartialLeafFun:
    """Path composite ``g . f : X -> Z``.

    A composite edge is labelled by the composite of every hop label when
    all hops are labelled, and is unlabelled otherwise.
    """
    if f.target != g.source:
        raise LeafFunctionError("middle signed sets differ")
    edges = {}
    for d in domain_of(f.source, g.target):
        hops = list(_chase(f, g, d))
        if not hops:
            continue
        fun, _, end, _ = hops[-1]
        if (fun == "f" and end.side != "s") or (fun == "g" and end.side != "t"):
            continue  # stuck inside Y or cycled
        labels = [lab for *_, lab in hops]
        if all(lab is not None for lab in labels):
            lab = labels[0]
            for nxt in labels[1:]:
                lab = compose_path(lab, nxt)
        else:
            lab = None
        edges[d] = (end, lab)
    return PartialLeafFun(f.source, g.target, edges)


def unique_path(f: PartialLeafFun, g: PartialLeafFun, start: Endpoint) -> list[tuple[str, Endpoint]]:
    """Intermediate middle endpoints visited by the composite edge from ``start``.

    Each entry is ``(owner, endpoint)`` where ``owner`` names the leaf
    function whose coordinates the endpoint is given in: the middle leaf
    reached by an f-hop is reported as ``("f", t<i>)``, and one reached by
    a g-hop as ``("g", s<i>)``.
    """
    hops = list(_chase(f, g, start))
    if not hops:
        raise LeafFunctionError(f"no composite edge from {start}")
    fun, _, end, _ = hops[-1]
    if (fun == "f" and end.side != "s") or (fun == "g" and end.side != "t"):
        raise LeafFunctionError(f"no composite edge from {start}")
    return [(fun, there) for fun, _, there, _ in hops[:-1]]


def replay_paths(f: PartialLeafFun, g: PartialLeafFun) -> dict[Endpoint, Endpoint]:
    """Rebuild the composite edge set from the unique-path witnesses alone."""
    out = {}
    for d in domain_of(f.source, g.target):
        try:
            path = unique_path(f, g, d)
        except LeafFunctionError:
            continue
        if path:
            owner, last = path[-1]
            # the final hop leaves the middle from the partner copy of ``last``
            if owner == "f":
                nxt = g(src(last.index))
            else:
                nxt = f(tgt(last.index))
        else:
            nxt = (f if d.side == "s" else g)(d)
        out[d] = nxt
    return out
