from __future__ import annotations

import random

import pytest
from _gen import BASE
from hypothesis import given
from hypothesis import strategies as st

from starnet.base import PathMorphism
from starnet.cutelim import (
    CutError,
    OneSidedLinking,
    chain_sequent,
    check_one_sided,
    cut_compose,
    eliminate_cut,
    format_one_sided,
    normalize_stepwise,
    one_to_two,
    parse_one_sided,
    turbo_normalize,
    two_to_one,
)
from starnet.linking import check_linking, compose, gen, identity
from starnet.randgen import random_chain, random_composable, random_linking
from starnet.shape import CutSequent, parse_shape

seeds = st.integers(0, 2**32 - 1)
ID_A = PathMorphism("a", "a")


def test_two_to_one_shape() -> None:
    f = identity(parse_shape("a*b"))
    L = two_to_one(f)
    assert str(L.seq) == "(a*b)', a*b"
    assert L.edges == {(0, 0): ((1, 0), ID_A), (0, 1): ((1, 1), PathMorphism("b", "b"))} or (
        L.edges == {(1, 0): ((0, 0), ID_A), (1, 1): ((0, 1), PathMorphism("b", "b"))}
    )
    assert one_to_two(L) == f


def test_one_to_two_rejects_cuts() -> None:
    a = parse_shape("a")
    L = cut_compose(identity(a), identity(a))
    with pytest.raises(CutError):
        one_to_two(L)


def test_atomic_cut_joins_labels() -> None:
    L = cut_compose(gen("x", BASE), gen("w", BASE))
    assert len(L.seq.cuts) == 1
    M = eliminate_cut(L, 0)
    assert not M.seq.cuts
    f = one_to_two(M)
    assert f.label(next(iter(f.edges))).arrows == ("x", "w")


def test_unit_cut() -> None:
    i = parse_shape("I")
    M = eliminate_cut(cut_compose(identity(i), identity(i)), 0)
    assert one_to_two(M) == identity(i)


def test_tensor_cut_splits_in_place() -> None:
    s = parse_shape("a*b'")
    L = cut_compose(identity(s), identity(s))
    M = eliminate_cut(L, 0)
    assert [str(c) for c in M.seq.cuts] == ["a", "b'"]
    assert check_one_sided(M).valid


def test_dual_cut() -> None:
    s = parse_shape("a'")
    M = eliminate_cut(cut_compose(identity(s), identity(s)), 0)
    assert [str(c) for c in M.seq.cuts] == ["a"]
    assert one_to_two(eliminate_cut(M, 0)) == identity(s)


def test_bad_cut_index() -> None:
    L = two_to_one(identity(parse_shape("a")))
    with pytest.raises(CutError):
        eliminate_cut(L, 0)
    with pytest.raises(ValueError):
        normalize_stepwise(cut_compose(identity(parse_shape("a")), identity(parse_shape("a"))), "sideways")


def test_cut_free_unchanged() -> None:
    L = two_to_one(random_linking(random.Random(1), 6, BASE))
    assert turbo_normalize(L) is L
    assert normalize_stepwise(L) == L


def test_orientation_checked() -> None:
    seq = CutSequent((parse_shape("a'"), parse_shape("a")))
    with pytest.raises(CutError):
        OneSidedLinking(seq, {(1, 0): ((0, 0), ID_A)})
    assert OneSidedLinking(seq, {(0, 0): ((1, 0), ID_A)}).negative_ports() == [(0, 0)]


def test_one_sided_text_round_trip() -> None:
    rng = random.Random(4)
    for _ in range(200):
        fs = random_chain(rng, rng.randint(1, 3), 5, BASE)
        L = chain_sequent(fs)
        assert parse_one_sided(format_one_sided(L), BASE) == L


@pytest.mark.parametrize(
    "text",
    [
        "g0.0 -> g1.0",  # no sequent line
        "sequent: a', a\ng1.0 -> g0.0",  # g1.0 is positive
        "sequent: a', a\ng0.0 -> g5.0",
        "sequent: a', a\ng0.0 -> q",
        "sequent: a', a\ng0.0 -> g1.0\ng0.0 -> g1.0",
        "sequent: a', I\ng0.0 -> g1.0",  # generator into a unit
        "sequent: I', a\ng0.0 -> g1.0 [x]",  # labelled unit edge
        "sequent: a', a\ng0.0 -> g1.0 [w]",
        "sequent: a', a\ng0.0 => g1.0",
    ],
)
def test_one_sided_parse_errors(text: str) -> None:
    with pytest.raises(CutError):
        parse_one_sided(text, BASE)


@given(seeds)
def test_two_one_round_trip(seed: int) -> None:
    f = random_linking(random.Random(seed), 8, BASE)
    L = two_to_one(f)
    assert one_to_two(L) == f
    assert check_one_sided(L, BASE).valid == check_linking(f, BASE).valid


@given(seeds)
def test_steps_preserve_validity_and_shrink(seed: int) -> None:
    rng = random.Random(seed)
    fs = random_chain(rng, rng.randint(2, 4), 5, BASE)
    L = chain_sequent(fs)
    while L.seq.cuts:
        assert check_one_sided(L, BASE).valid
        before = L.n_vertices()
        L = eliminate_cut(L, rng.randrange(len(L.seq.cuts)))
        assert L.n_vertices() < before
    assert check_one_sided(L, BASE).valid


@given(seeds)
def test_trace_strictly_decreases(seed: int) -> None:
    rng = random.Random(seed)
    L = chain_sequent(random_chain(rng, 3, 5, BASE))
    trace: list[int] = []
    normalize_stepwise(L, "random", seed=seed, trace=trace)
    assert all(a > b for a, b in zip(trace, trace[1:]))


@given(seeds)
def test_local_confluence(seed: int) -> None:
    rng = random.Random(seed)
    L = chain_sequent(random_chain(rng, 3, 5, BASE))
    n = len(L.seq.cuts)
    outs = set()
    for i in range(n):
        for j in range(n - 1):
            M = eliminate_cut(eliminate_cut(L, i), j)
            outs.add(normalize_stepwise(M, "leftmost"))
    assert len(outs) == 1


@given(seeds)
def test_engines_agree_on_chains(seed: int) -> None:
    rng = random.Random(seed)
    fs = random_chain(rng, rng.randint(2, 4), 5, BASE)
    path = fs[0]
    for f in fs[1:]:
        path = compose(path, f)
    L = chain_sequent(fs)
    assert one_to_two(turbo_normalize(L)) == path
    assert one_to_two(normalize_stepwise(L, "rightmost")) == path


@given(seeds)
def test_turbo_on_pairs(seed: int) -> None:
    f, g = random_composable(random.Random(seed), 6, BASE)
    assert one_to_two(turbo_normalize(cut_compose(f, g))) == compose(f, g)
