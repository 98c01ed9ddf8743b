"""Exhaustive candidate corpus for the criterion oracle comparison.

Both checkers see only the switching graph, which forgets atom names, so
one atom suffices: two shapes that differ only in atoms give the same
graphs.  Every node may carry one dual, which covers every sign pattern of
leaves and tensors.
"""

from __future__ import annotations

import copy
import itertools
from array import array
from functools import lru_cache
from typing import Iterator

from starnet.criterion import ProofGraph
from starnet.goi import codomain_of, domain_of
from starnet.shape import Shape, leaves


@lru_cache(maxsize=None)
def _shape_tokens(n: int, atom: str = "a") -> tuple[tuple[str, ...], ...]:
    """Postfix token tuples of every shape with ``n`` leaves, at most one dual per node."""
    if n == 1:
        out = [(atom,)]
    else:
        out = [
            l + r + ("*",)
            for k in range(1, n)
            for l in _shape_tokens(k, atom)
            for r in _shape_tokens(n - k, atom)
        ]
    return tuple(out + [t + ("'",) for t in out])


def corpus_shapes(max_leaves: int, atom: str = "a") -> list[Shape]:
    return [Shape(t) for n in range(1, max_leaves + 1) for t in _shape_tokens(n, atom)]


def corpus_pairs(max_total: int = 6) -> Iterator[tuple[Shape, Shape]]:
    """Every pair ``(S, T)`` with at most ``max_total`` leaves between them."""
    by_size = {n: [Shape(t) for t in _shape_tokens(n)] for n in range(1, max_total)}
    for ns in range(1, max_total):
        for nt in range(1, max_total - ns + 1):
            for s in by_size[ns]:
                for t in by_size[nt]:
                    yield s, t


def candidate_graphs(s: Shape, t: Shape) -> Iterator[ProofGraph]:
    """The switching graph of every total leaf function ``s -> t``."""
    ls, lt = leaves(s), leaves(t)
    dom, cod = domain_of(ls, lt), codomain_of(ls, lt)
    template = ProofGraph([(s, 1), (t, 0)])
    off = template.offsets[1]

    def vertex(e) -> int:
        return s.leaf_positions[e.index] if e.side == "s" else off + t.leaf_positions[e.index]

    us = array("q", [vertex(d) for d in dom])
    cv = [vertex(c) for c in cod]
    for img in itertools.product(cv, repeat=len(dom)):
        g = copy.copy(template)
        g.eu = template.eu + us
        g.ev = template.ev + array("q", img)
        yield g
