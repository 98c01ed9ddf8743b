from __future__ import annotations

import random

from _gen import BASE
from hypothesis import given
from hypothesis import strategies as st

from starnet.goi import codomain_of
from starnet.linking import check_linking, compose, format_linking
from starnet.randgen import (
    perturb,
    random_candidate,
    random_chain,
    random_composable,
    random_linking,
    random_linking_from,
    random_linking_into,
    random_shape,
)
from starnet.shape import leaves, parse_shape

seeds = st.integers(0, 2**32 - 1)


def test_deterministic_per_seed() -> None:
    a = [format_linking(random_linking(random.Random(3), 8, BASE)) for _ in range(5)]
    b = [format_linking(random_linking(random.Random(3), 8, BASE)) for _ in range(5)]
    assert a == b


def test_shape_size() -> None:
    rng = random.Random(0)
    for n in range(1, 20):
        assert random_shape(rng, n).n_leaves == n


@given(seeds)
def test_into_and_from_hit_the_requested_shape(seed: int) -> None:
    rng = random.Random(seed)
    t = random_shape(rng, rng.randint(1, 5))
    f = random_linking_into(rng, t, BASE)
    g = random_linking_from(rng, t, BASE)
    assert f.target == t and g.source == t
    assert check_linking(f, BASE).valid and check_linking(g, BASE).valid


@given(seeds)
def test_chains_compose(seed: int) -> None:
    fs = random_chain(random.Random(seed), 4, 5, BASE)
    h = fs[0]
    for f in fs[1:]:
        h = compose(h, f)
    assert check_linking(h, BASE).valid


@given(seeds)
def test_composable(seed: int) -> None:
    f, g = random_composable(random.Random(seed), 6, BASE)
    assert f.target == g.source


@given(seeds)
def test_candidates_are_total(seed: int) -> None:
    rng = random.Random(seed)
    s, t = random_shape(rng, 4), random_shape(rng, 3)
    f = random_candidate(rng, s, t)
    if codomain_of(leaves(s), leaves(t)):
        assert check_linking(f).condition != "totality"


def test_perturb_keeps_shapes() -> None:
    rng = random.Random(2)
    invalid = 0
    for _ in range(300):
        f = random_linking(rng, 8)
        g = perturb(rng, f, 2)
        assert (g.source, g.target) == (f.source, f.target)
        invalid += not check_linking(g).valid
    assert invalid > 0


def test_unit_only() -> None:
    f = random_linking_into(random.Random(0), parse_shape("I"))
    assert check_linking(f).valid
