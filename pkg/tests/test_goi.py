from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from starnet.base import BaseGraph, PathMorphism
from starnet.goi import (
    Leaf,
    LeafFunctionError,
    PartialLeafFun,
    Sign,
    SignedSet,
    codomain_of,
    compose_plf,
    domain_of,
    dual_ss,
    identity_plf,
    replay_paths,
    src,
    tensor_ss,
    tgt,
    unique_path,
)

POS, NEG = Sign.POS, Sign.NEG
LOOP = BaseGraph(("a",), (("x", "a", "a"),))
LABELS = [None, PathMorphism("a", "a"), LOOP.generator("x"), LOOP.path(["x", "x"])]


def random_ss(rng: random.Random, n: int) -> SignedSet:
    return SignedSet((rng.choice("aI"), rng.choice((POS, NEG))) for _ in range(n))


def random_plf(rng: random.Random, x: SignedSet, y: SignedSet, p_total: float) -> PartialLeafFun:
    dom, cod = domain_of(x, y), codomain_of(x, y)
    edges = {}
    if cod:
        for d in dom:
            if rng.random() < p_total:
                c = rng.choice(cod)
                ends = [(x if e.side == "s" else y)[e.index] for e in (d, c)]
                # only generator-to-generator edges carry labels
                lab = None if any(l.is_unit for l in ends) else rng.choice(LABELS)
                edges[d] = (c, lab)
    return PartialLeafFun(x, y, edges)


@st.composite
def triples(draw):
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    p = draw(st.sampled_from([1.0, 0.7]))
    xs = [random_ss(rng, rng.randint(0, 4)) for _ in range(4)]
    return [random_plf(rng, xs[i], xs[i + 1], p) for i in range(3)]


def test_signed_set_operations() -> None:
    x = SignedSet([("a", POS)])
    assert dual_ss(x) == SignedSet([("a", NEG)])
    assert dual_ss(dual_ss(x)) == x
    assert tensor_ss(SignedSet(), x) == x
    assert str(Leaf("a", NEG)) == "<a,->"


def test_endpoint_roles() -> None:
    x = SignedSet([("a", POS), ("b", NEG)])
    y = SignedSet([("b", POS), ("a", NEG)])
    assert domain_of(x, y) == [src(0), tgt(1)]
    assert codomain_of(x, y) == [src(1), tgt(0)]


def test_rejects_misplaced_edges() -> None:
    x = SignedSet([("a", POS)])
    with pytest.raises(LeafFunctionError):
        PartialLeafFun(x, x, {tgt(0): (src(0), None)})
    with pytest.raises(LeafFunctionError):
        PartialLeafFun(x, x, {src(0): (src(0), None)})


def test_identity_composite() -> None:
    rng = random.Random(1)
    x, y = random_ss(rng, 3), random_ss(rng, 3)
    f = random_plf(rng, x, y, 1.0)
    assert compose_plf(identity_plf(x), f) == f


def test_middle_cycle_vanishes() -> None:
    empty = SignedSet()
    y = SignedSet([("I", POS), ("I", NEG)])
    f = PartialLeafFun(empty, y, {tgt(1): (tgt(0), None)})
    g = PartialLeafFun(y, empty, {src(0): (src(1), None)})
    h = compose_plf(f, g)
    assert h.edges == {}
    assert h.is_total()  # nothing to be total on


def test_unique_path_through_identity() -> None:
    x = SignedSet([("a", POS)])
    f = identity_plf(x)
    g = PartialLeafFun(x, x, {src(0): (tgt(0), LOOP.generator("x"))})
    assert unique_path(f, g, src(0)) == [("f", tgt(0))]
    assert compose_plf(f, g).label(src(0)) == LOOP.generator("x")
    with pytest.raises(LeafFunctionError):
        unique_path(PartialLeafFun(x, x, {}), g, src(0))


def test_labels_drop_when_a_hop_is_unlabelled() -> None:
    x = SignedSet([("a", POS)])
    f = PartialLeafFun(x, x, {src(0): (tgt(0), None)})
    g = PartialLeafFun(x, x, {src(0): (tgt(0), LOOP.generator("x"))})
    assert compose_plf(f, g).label(src(0)) is None


def test_middle_mismatch() -> None:
    x, y = SignedSet([("a", POS)]), SignedSet([("a", NEG)])
    with pytest.raises(LeafFunctionError):
        compose_plf(identity_plf(x), identity_plf(y))


@given(triples())
def test_associative(fs) -> None:
    f, g, h = fs
    assert compose_plf(compose_plf(f, g), h) == compose_plf(f, compose_plf(g, h))


@given(triples())
def test_unital(fs) -> None:
    f = fs[0]
    assert compose_plf(identity_plf(f.source), f) == f
    assert compose_plf(f, identity_plf(f.target)) == f


@given(triples())
def test_paths_replay_the_composite(fs) -> None:
    f, g, _ = fs
    h = compose_plf(f, g)
    assert replay_paths(f, g) == {d: c for d, c, _ in h}
    assert replay_paths(f, g) == replay_paths(f, g)


def test_associativity_at_volume() -> None:
    rng = random.Random(10)
    for i in range(10_000):
        xs = [random_ss(rng, rng.randint(0, 4)) for _ in range(4)]
        p = 1.0 if i % 2 else 0.6
        f, g, h = (random_plf(rng, xs[j], xs[j + 1], p) for j in range(3))
        assert compose_plf(compose_plf(f, g), h) == compose_plf(f, compose_plf(g, h))
        assert compose_plf(identity_plf(xs[0]), f) == f == compose_plf(f, identity_plf(xs[1]))
