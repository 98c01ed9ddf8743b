from __future__ import annotations

import random

import pytest
from _gen import BASE, curry_ready, small_shape
from hypothesis import given
from hypothesis import strategies as st

from starnet.base import BaseGraph, PathMorphism
from starnet.goi import src, tgt
from starnet.linking import (
    Linking,
    LinkingError,
    assoc,
    assoc_inv,
    check_linking,
    compatibility_check,
    compose,
    curry,
    dual_mor,
    format_linking,
    gen,
    identity,
    parse_linking,
    sym,
    tensor_mor,
    uncurry,
    unit_l,
    unit_l_inv,
    unit_r,
    unit_r_inv,
)
from starnet.randgen import (
    random_chain,
    random_composable,
    random_linking,
    random_linking_into,
    random_shape,
)
from starnet.shape import I, Shape, _parse, parse_shape

seeds = st.integers(0, 2**32 - 1)
A = parse_shape("a")


def shape(text: str) -> Shape:
    return _parse(text, sugar=True)


def link(text: str, base: BaseGraph | None = None) -> Linking:
    return parse_linking(text, base)[1]


# -- local conditions -------------------------------------------------------------


def test_bot_tensor_bot_candidates() -> None:
    b = shape("bot*bot")
    i = Linking(b, b, {tgt(0): (src(0), None), tgt(1): (src(1), None)})
    tw = Linking(b, b, {tgt(0): (src(1), None), tgt(1): (src(0), None)})
    assert i == identity(b)
    assert check_linking(i).valid and check_linking(tw).valid
    for k in (0, 1):
        const = Linking(b, b, {tgt(0): (src(k), None), tgt(1): (src(k), None)})
        rep = check_linking(const)
        assert rep.condition == "switching" and "disconnected" in rep.detail


def test_totality() -> None:
    f = Linking(A, A, {})
    rep = check_linking(f)
    assert rep.condition == "totality" and rep.witness == src(0)


def test_bijection() -> None:
    s, t = parse_shape("a*a"), parse_shape("a*a")
    f = Linking(s, t, {src(0): (tgt(0), PathMorphism("a", "a")), src(1): (tgt(0), PathMorphism("a", "a"))})
    assert check_linking(f).condition == "bijection"
    g = Linking(A, I, {src(0): (tgt(0), None)})
    assert check_linking(g).condition == "bijection"
    h = Linking(parse_shape("a*a'"), parse_shape("a*a'"), {})
    assert not check_linking(h).valid


def test_generator_counts_must_balance() -> None:
    # the cap itself is fine, but the target unit is left dangling
    f = Linking(parse_shape("a*a'"), I, {src(0): (src(1), PathMorphism("a", "a"))})
    assert check_linking(f).condition == "switching"
    g = Linking(parse_shape("a"), parse_shape("b"), {src(0): (tgt(0), None)})
    assert not check_linking(g).valid


def test_labelling() -> None:
    base = BaseGraph(("a", "b"), (("x", "a", "b"),))
    bad = Linking(A, A, {src(0): (tgt(0), base.generator("x"))})
    assert check_linking(bad, base).condition == "labelling"
    assert check_linking(gen("x", base), base).valid
    unit = Linking(I, I, {src(0): (tgt(0), PathMorphism("I", "I"))})
    assert check_linking(unit).condition == "labelling"
    # a path that does not exist in the declared base
    ghost = Linking(A, parse_shape("b"), {src(0): (tgt(0), PathMorphism("a", "b", ("q",)))})
    assert check_linking(ghost, base).condition == "labelling"


def test_report_text() -> None:
    rep = check_linking(Linking(A, A, {}))
    assert rep.verdict == "invalid" and not rep
    assert str(rep).startswith("invalid (totality)")
    assert str(check_linking(identity(A))) == "valid"


# -- structure maps ---------------------------------------------------------------


def test_identity_and_gen() -> None:
    f = identity(A)
    assert list(f) == [(src(0), tgt(0), PathMorphism("a", "a"))]
    x, w = gen("x", BASE), gen("w", BASE)
    assert compose(x, w).label(src(0)) == PathMorphism("a", "a", ("x", "w"))


def test_sym_crosses() -> None:
    f = sym(A, parse_shape("b"))
    assert {(d, c) for d, c, _ in f} == {(src(0), tgt(1)), (src(1), tgt(0))}


def test_unit_maps() -> None:
    assert len(unit_l(A)) == 1
    bot = shape("bot")
    inv = unit_l_inv(bot)
    # the added unit's only possible target is the source-side bot
    assert inv(src(0)) == src(1)
    assert unit_l_inv(A)(src(0)) == tgt(0)
    assert unit_r_inv(A)(src(1)) == tgt(0)
    for f in (unit_l(bot), unit_r(bot), inv, unit_r_inv(bot)):
        assert check_linking(f).valid


def test_assoc_inverse_pair() -> None:
    a, b, c = parse_shape("a"), parse_shape("b'"), parse_shape("I")
    assert compose(assoc(a, b, c), assoc_inv(a, b, c)) == identity((a * b) * c)
    assert compose(assoc_inv(a, b, c), assoc(a, b, c)) == identity(a * (b * c))


def test_curry_patterns() -> None:
    with pytest.raises(LinkingError):
        curry(identity(A))
    with pytest.raises(LinkingError):
        uncurry(identity(A))


def test_compose_mismatch() -> None:
    with pytest.raises(LinkingError):
        compose(identity(A), identity(parse_shape("b")))


def test_compatibility_detects_cycle() -> None:
    y = parse_shape("I*I'")
    f = Linking(parse_shape("I'"), y, {tgt(1): (tgt(0), None)})
    g = Linking(y, I, {src(0): (src(1), None)})
    assert not compatibility_check(f, g)
    assert compatibility_check(identity(y), identity(y))


# -- text format ------------------------------------------------------------------


def test_format_parse_round_trip() -> None:
    rng = random.Random(5)
    for _ in range(300):
        f = random_linking(rng, 6, BASE)
        assert link(format_linking(f), BASE) == f


@pytest.mark.parametrize(
    "body",
    [
        "s0 -> t0 [q]",  # unknown arrow
        "s0 -> t0 [w]",  # wrong endpoints
        "s0 -> t9",
        "s0 -> t0\ns0 -> t0",
        "s0 => t0",
        "x0 -> t0",
    ],
)
def test_bad_edge_lines(body: str) -> None:
    with pytest.raises(LinkingError):
        link(f"linking f : a -> b\n{body}", BASE)


def test_unit_edge_label_rejected() -> None:
    with pytest.raises(LinkingError):
        link("linking f : I -> I\ns0 -> t0 [x]", BASE)
    with pytest.raises(LinkingError):
        link("linking f : a -> I'\ns0 -> s1")


def test_applicative_labels() -> None:
    f = link("linking f : a -> a\ns0 -> t0 [w.x]", BASE)
    assert f.label(src(0)).arrows == ("x", "w")
    assert link("linking f : a -> a\ns0 -> t0 [id_a]") == identity(A)


# -- laws on random instances -----------------------------------------------------


@given(seeds)
def test_random_linkings_are_valid(seed: int) -> None:
    rng = random.Random(seed)
    f = random_linking(rng, 8, BASE)
    assert check_linking(f, BASE).valid
    assert check_linking(identity(random_shape(rng, 6)), BASE).valid


@given(seeds)
def test_category_laws(seed: int) -> None:
    f, g, h = random_chain(random.Random(seed), 3, 6, BASE)
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    assert compose(identity(f.source), f) == f == compose(f, identity(f.target))


@given(seeds)
def test_tensor_functor(seed: int) -> None:
    rng = random.Random(seed)
    f, g = random_composable(rng, 5, BASE)
    f2, g2 = random_composable(rng, 5, BASE)
    assert tensor_mor(compose(f, g), compose(f2, g2)) == compose(tensor_mor(f, f2), tensor_mor(g, g2))
    assert check_linking(tensor_mor(f, f2)).valid


@given(seeds)
def test_dual_functor(seed: int) -> None:
    f, g = random_composable(random.Random(seed), 6, BASE)
    assert dual_mor(compose(f, g)) == compose(dual_mor(g), dual_mor(f))
    ff = dual_mor(dual_mor(f))
    assert ff.source == f.source.dual().dual() and ff.target == f.target.dual().dual()
    assert ff.edges == f.edges
    assert check_linking(dual_mor(f)).valid


@given(seeds)
def test_curry_round_trip(seed: int) -> None:
    f = curry_ready(random.Random(seed), base=BASE)
    c = curry(f)
    assert check_linking(c, BASE).valid
    assert uncurry(c) == f
    assert len(c) == len(f)


@given(seeds)
def test_curry_natural_in_second_and_third(seed: int) -> None:
    rng = random.Random(seed)
    h = curry_ready(rng, base=BASE)
    t, u = h.source.right, h.target.arg
    b = random_linking_into(rng, t, BASE)
    lhs = curry(compose(tensor_mor(identity(h.source.left), b), h))
    assert lhs == compose(curry(h), dual_mor(tensor_mor(b, identity(u))))
    k = random_linking_into(rng, u, BASE)
    lhs = curry(compose(h, dual_mor(k)))
    assert lhs == compose(curry(h), dual_mor(tensor_mor(identity(t), k)))


@given(seeds)
def test_interchange(seed: int) -> None:
    rng = random.Random(seed)
    f, g = random_composable(rng, 4)
    f2, g2 = random_composable(rng, 4)
    lhs = compose(tensor_mor(f, identity(f2.source)), tensor_mor(identity(f.target), f2))
    assert lhs == tensor_mor(f, f2)
    assert compose(tensor_mor(f, f2), tensor_mor(g, g2)) == tensor_mor(compose(f, g), compose(f2, g2))


@given(seeds)
def test_coherence(seed: int) -> None:
    rng = random.Random(seed)
    a, b, c, d = (small_shape(rng) for _ in range(4))
    lhs = compose(assoc(a * b, c, d), assoc(a, b, c * d))
    rhs = compose(
        compose(tensor_mor(assoc(a, b, c), identity(d)), assoc(a, b * c, d)),
        tensor_mor(identity(a), assoc(b, c, d)),
    )
    assert lhs == rhs
    assert compose(sym(a, b), sym(b, a)) == identity(a * b)
    assert compose(unit_l(a), unit_l_inv(a)) == identity(a)
    assert compose(unit_r(a), unit_r_inv(a)) == identity(a)


@given(seeds)
def test_compatibility(seed: int) -> None:
    f, g = random_composable(random.Random(seed), 6, BASE)
    assert compatibility_check(f, g)


@given(seeds)
def test_unit_naturality(seed: int) -> None:
    f = random_linking(random.Random(seed), 6, BASE)
    one = identity(I)
    assert compose(f, unit_l(f.target)) == compose(unit_l(f.source), tensor_mor(one, f))
    assert compose(f, unit_r(f.target)) == compose(unit_r(f.source), tensor_mor(f, one))
