from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from starnet.base import (
    BaseCategoryError,
    BaseGraph,
    PathMorphism,
    compose_all,
    compose_path,
    identity_path,
)

BASE = BaseGraph(
    ("a", "b", "c", "d"),
    (("x", "a", "b"), ("w", "b", "a"), ("y", "c", "c"), ("z", "c", "d")),
)


@st.composite
def chains(draw, n: int = 3):
    """``n`` composable paths in ``BASE``."""
    obj = draw(st.sampled_from(BASE.objects))
    out = []
    for _ in range(n):
        names = []
        cur = obj
        for _ in range(draw(st.integers(0, 3))):
            outs = [k for k, (s, _) in BASE._arrow_index.items() if s == cur]
            if not outs:
                break
            k = draw(st.sampled_from(outs))
            names.append(k)
            cur = BASE.arrow(k)[1]
        out.append(BASE.path(names, obj))
        obj = cur
    return out


def test_identity_path() -> None:
    assert identity_path("c") == PathMorphism("c", "c", ())
    assert identity_path("c").is_identity


def test_identity_on_unknown_object() -> None:
    with pytest.raises(BaseCategoryError):
        identity_path("q", BASE)


def test_empty_path_must_be_identity() -> None:
    with pytest.raises(BaseCategoryError):
        PathMorphism("a", "b")


def test_xwx_and_zy() -> None:
    x, w, y, z = (BASE.generator(n) for n in "xwyz")
    p = compose_path(compose_path(x, w), x)
    assert p == PathMorphism("a", "b", ("x", "w", "x"))
    assert p.applicative() == "x.w.x"
    q = compose_path(y, z)
    assert q.arrows == ("y", "z")
    assert str(q) == "z.y"


def test_mismatched_composite() -> None:
    with pytest.raises(BaseCategoryError):
        compose_path(BASE.generator("x"), BASE.generator("y"))


def test_paths_enumeration() -> None:
    assert BASE.paths("a", "a", 2) == [
        PathMorphism("a", "a", ()),
        PathMorphism("a", "a", ("x", "w")),
    ]
    assert BASE.paths("a", "d", 5) == []
    assert len(BASE.paths("c", "c", 3)) == 4


def test_validate() -> None:
    BASE.validate(PathMorphism("a", "a", ("x", "w")))
    with pytest.raises(BaseCategoryError):
        BASE.validate(PathMorphism("a", "b", ("w",)))
    with pytest.raises(BaseCategoryError):
        BASE.validate(PathMorphism("q", "q"))


def test_bad_declarations() -> None:
    with pytest.raises(BaseCategoryError):
        BaseGraph(("a", "a"))
    with pytest.raises(BaseCategoryError):
        BaseGraph(("a",), (("x", "a", "b"),))
    with pytest.raises(BaseCategoryError):
        BaseGraph(("a",), (("x", "a", "a"), ("x", "a", "a")))


def test_discrete_base_has_only_identities() -> None:
    disc = BaseGraph(("a", "b"))
    assert disc.is_discrete
    assert disc.paths("a", "a", 4) == [identity_path("a")]
    assert disc.paths("a", "b", 4) == []


@given(chains())
def test_associativity(ps) -> None:
    p, q, r = ps
    assert compose_path(compose_path(p, q), r) == compose_path(p, compose_path(q, r))
    assert compose_all(ps) == compose_path(p, compose_path(q, r))


@given(chains(1))
def test_unit_laws(ps) -> None:
    (p,) = ps
    assert compose_path(identity_path(p.source), p) == p
    assert compose_path(p, identity_path(p.target)) == p
