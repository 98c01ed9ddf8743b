"""The switching criterion on forests of parse trees.

A proof graph is a forest of shapes, each read with a sign flip, plus
extra undirected edges (leaf-function edges, cut edges).  The switched
tensors are the tensors that are negative after the flip.  A switching
keeps one argument edge of every switched tensor.

Two checkers share one graph encoding: contraction (fast, the default)
and exhaustive enumeration (the oracle).  Both run in a compiled kernel
when it is importable, else in the pure-Python twin.  Set
``STARNET_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
import random
from array import array
from dataclasses import dataclass
from types import ModuleType
from typing import Sequence

from . import _contract_py
from ._contract_py import CYCLE, EDGE_COUNT, OK, PAIR_CYCLE, STUCK
from .shape import DUAL, TENSOR, Shape

__all__ = [
    "BACKEND",
    "InternalFault",
    "BoundExceeded",
    "ProofGraph",
    "CriterionResult",
    "kernel",
    "contract_check",
    "bruteforce_check",
    "switching_edges",
    "switching_is_tree",
]


class InternalFault(RuntimeError):
    """A result the theory rules out; indicates an implementation bug."""


class BoundExceeded(ValueError):
    """Too many switched tensors for exhaustive enumeration."""


def _load() -> tuple[ModuleType, str]:
    if os.environ.get("STARNET_PURE_PYTHON"):
        return _contract_py, "python"
    try:
        from . import _contract  # type: ignore[attr-defined]
    except ImportError:
        return _contract_py, "python"
    return _contract, "cython"


_KERNEL, BACKEND = _load()


def kernel(name: str | None = None) -> ModuleType:
    """The kernel module for ``"cython"`` / ``"python"``; ``None`` is the default."""
    if name is None:
        return _KERNEL
    if name == "python":
        return _contract_py
    if name == "cython":
        from . import _contract  # type: ignore[attr-defined]

        return _contract
    raise ValueError(f"unknown backend {name!r}")


@dataclass(frozen=True)
class _Local:
    eu: array
    ev: array
    pt: array
    pa: array
    pb: array


def _local(shape: Shape, flip: int) -> _Local:
    cache = shape.__dict__.setdefault("_graph_cache", {})
    hit = cache.get(flip)
    if hit is not None:
        return hit
    toks = shape.tokens
    kids = shape.children
    par = shape.parity
    tensors = [i for i, tok in enumerate(toks) if tok == TENSOR]
    pt = [i for i in tensors if par[i] ^ flip]
    plain = [i for i in tensors if not par[i] ^ flip]
    duals = [i for i, tok in enumerate(toks) if tok == DUAL]
    pa = [kids[i][0] for i in pt]
    pb = [kids[i][1] for i in pt]
    eu = plain + plain + duals
    ev = [kids[i][0] for i in plain] + [kids[i][1] for i in plain] + [kids[i][0] for i in duals]
    loc = _Local(*(array("q", xs) for xs in (eu, ev, pt, pa, pb)))
    cache[flip] = loc
    return loc


def _shifted(xs: array, off: int) -> array:
    return xs if off == 0 else array("q", [x + off for x in xs])


class ProofGraph:
    """Forest of ``(shape, flip)`` trees plus extra undirected edges.

    Vertices are numbered tree by tree in postfix order.  ``switched``
    names each switched tensor as ``(tree, postfix position)`` in the
    order used by switching choices.
    """

    def __init__(self, forest: Sequence[tuple[Shape, int]]):
        self.forest = tuple(forest)
        self.offsets: list[int] = []
        self.eu = array("q")
        self.ev = array("q")
        self.pt = array("q")
        self.pa = array("q")
        self.pb = array("q")
        self.switched: list[tuple[int, int]] = []
        off = 0
        for t, (shape, flip) in enumerate(self.forest):
            loc = _local(shape, flip & 1)
            self.offsets.append(off)
            self.eu.extend(_shifted(loc.eu, off))
            self.ev.extend(_shifted(loc.ev, off))
            self.pt.extend(_shifted(loc.pt, off))
            self.pa.extend(_shifted(loc.pa, off))
            self.pb.extend(_shifted(loc.pb, off))
            self.switched.extend((t, p) for p in loc.pt)
            off += shape.size
        self.n = off

    def leaf(self, tree: int, index: int) -> int:
        return self.offsets[tree] + self.forest[tree][0].leaf_positions[index]

    def root(self, tree: int) -> int:
        return self.offsets[tree] + self.forest[tree][0].size - 1

    def add_edge(self, u: int, v: int) -> None:
        self.eu.append(u)
        self.ev.append(v)

    def add_edges(self, us: Sequence[int], vs: Sequence[int]) -> None:
        self.eu.extend(us)
        self.ev.extend(vs)

    @property
    def n_switched(self) -> int:
        return len(self.pt)

    def arrays(self) -> tuple:
        return self.n, self.eu, self.ev, self.pt, self.pa, self.pb


@dataclass(frozen=True)
class CriterionResult:
    """Outcome of a criterion check.

    ``choices`` (when invalid) is a failing switching: entry ``j`` is 0
    if switched tensor ``j`` keeps its left argument edge, 1 for the right.
    ``reason`` is ``"cycle"`` or ``"disconnected"`` for that switching.
    """

    valid: bool
    choices: tuple[int, ...] | None = None
    reason: str = ""


def switching_edges(g: ProofGraph, choices: Sequence[int]) -> list[tuple[int, int]]:
    if len(choices) != g.n_switched:
        raise ValueError("one choice per switched tensor is required")
    edges = list(zip(g.eu, g.ev))
    for j, c in enumerate(choices):
        edges.append((g.pt[j], g.pb[j] if c else g.pa[j]))
    return edges


def _classify(n: int, edges: list[tuple[int, int]]) -> str:
    """``""`` for a tree, else ``"cycle"`` or ``"disconnected"``."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    seen[0] = True
    todo = [0]
    reached = 1
    while todo:
        x = todo.pop()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = True
                reached += 1
                todo.append(y)
    if reached != n:
        return "disconnected"
    return "" if len(edges) == n - 1 else "cycle"


def switching_is_tree(g: ProofGraph, choices: Sequence[int]) -> bool:
    """Replay a switching and test it directly."""
    return _classify(g.n, switching_edges(g, choices)) == ""


def _failing(g: ProofGraph, choices: tuple[int, ...]) -> CriterionResult:
    reason = _classify(g.n, switching_edges(g, choices))
    if not reason:
        raise InternalFault("criterion witness is a tree")
    return CriterionResult(False, choices, reason)


def _stuck_witness(
    k: int, stuck: list[tuple[int, int, int, int]], seed: int = 0
) -> tuple[int, ...] | None:
    """Choices for the unabsorbed pairs making the class quotient a non-tree."""
    m = len(stuck)

    def bad(bits: int) -> bool:
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            while parent.get(x, x) != x:
                x = parent[x]
            return x

        for i, (_, t, a, b) in enumerate(stuck):
            w = b if (bits >> i) & 1 else a
            rt, rw = find(t), find(w)
            if rt == rw:
                return True
            parent[rw] = rt
        return False

    def expand(bits: int) -> tuple[int, ...]:
        out = [0] * k
        for i, (j, *_) in enumerate(stuck):
            out[j] = (bits >> i) & 1
        return tuple(out)

    if m <= 16:
        for bits in range(1 << m):
            if bad(bits):
                return expand(bits)
        return None
    rng = random.Random(seed)
    for _ in range(1 << 14):
        bits = rng.getrandbits(m)
        if bad(bits):
            return expand(bits)
    return None


def contract_check(g: ProofGraph, backend: str | None = None) -> CriterionResult:
    """Contraction criterion; invalid results carry a replayed failing switching."""
    status, a, b, stuck = kernel(backend).contract(*g.arrays())
    k = g.n_switched
    if status == OK:
        return CriterionResult(True)
    if status in (EDGE_COUNT, CYCLE):
        return _failing(g, (0,) * k)
    if status == PAIR_CYCLE:
        choices = [0] * k
        choices[a] = b
        return _failing(g, tuple(choices))
    assert status == STUCK
    choices = _stuck_witness(k, stuck)
    if choices is None:
        return CriterionResult(False, None, "not contractible")
    return _failing(g, choices)


def bruteforce_check(
    g: ProofGraph, bound: int = 20, backend: str | None = None
) -> CriterionResult:
    """Enumerate all ``2**k`` switchings; the first non-tree is the witness."""
    k = g.n_switched
    if k > bound:
        raise BoundExceeded(f"{k} switched tensors exceed the bound {bound}")
    mask = kernel(backend).bruteforce(*g.arrays())
    if mask < 0:
        return CriterionResult(True)
    return _failing(g, tuple((mask >> j) & 1 for j in range(k)))
