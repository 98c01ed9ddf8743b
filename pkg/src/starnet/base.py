"""Base category: the free category on a finite directed multigraph.

Morphisms are paths, stored as the left-to-right traversal sequence of
arrow names.  Equality of morphisms is equality of sequences, which keeps
every equality question downstream decidable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class BaseCategoryError(ValueError):
    """Unknown object/arrow, or a composite whose endpoints do not meet."""


@dataclass(frozen=True, order=True)
class PathMorphism:
    source: str
    target: str
    arrows: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.arrows and self.source != self.target:
            raise BaseCategoryError(
                f"empty path must be an identity, got {self.source} -> {self.target}"
            )
        object.__setattr__(self, "arrows", tuple(self.arrows))

    @property
    def is_identity(self) -> bool:
        return not self.arrows

    def then(self, other: PathMorphism) -> PathMorphism:
        return compose_path(self, other)

    def applicative(self) -> str:
        """Applicative order: ``z.y`` means first ``y`` then ``z``."""
        if not self.arrows:
            return f"id_{self.source}"
        return ".".join(reversed(self.arrows))

    def __str__(self) -> str:
        return self.applicative()


def identity_path(obj: str, base: BaseGraph | None = None) -> PathMorphism:
    if base is not None and obj not in base.objects:
        raise BaseCategoryError(f"unknown object {obj!r}")
    return PathMorphism(obj, obj, ())


def compose_path(p: PathMorphism, q: PathMorphism) -> PathMorphism:
    """``p`` followed by ``q``."""
    if p.target != q.source:
        raise BaseCategoryError(
            f"cannot compose {p.source}->{p.target} with {q.source}->{q.target}"
        )
    return PathMorphism(p.source, q.target, p.arrows + q.arrows)


def compose_all(paths: Iterable[PathMorphism]) -> PathMorphism:
    it = iter(paths)
    acc = next(it)
    for p in it:
        acc = compose_path(acc, p)
    return acc


@dataclass(frozen=True)
class BaseGraph:
    objects: tuple[str, ...] = ()
    arrows: tuple[tuple[str, str, str], ...] = ()
    _arrow_index: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        if len(set(self.objects)) != len(self.objects):
            raise BaseCategoryError("duplicate object name")
        index = {}
        for name, src, tgt in self.arrows:
            if name in index:
                raise BaseCategoryError(f"duplicate arrow name {name!r}")
            for end in (src, tgt):
                if end not in self.objects:
                    raise BaseCategoryError(f"arrow {name!r} mentions unknown object {end!r}")
            index[name] = (src, tgt)
        object.__setattr__(self, "_arrow_index", index)

    @property
    def is_discrete(self) -> bool:
        return not self.arrows

    def has_object(self, obj: str) -> bool:
        return obj in self.objects

    def arrow(self, name: str) -> tuple[str, str]:
        try:
            return self._arrow_index[name]
        except KeyError:
            raise BaseCategoryError(f"unknown arrow {name!r}") from None

    def generator(self, name: str) -> PathMorphism:
        src, tgt = self.arrow(name)
        return PathMorphism(src, tgt, (name,))

    def identity(self, obj: str) -> PathMorphism:
        return identity_path(obj, self)

    def path(self, arrows: Sequence[str], source: str | None = None) -> PathMorphism:
        """Build a path from a traversal sequence, checking that it chains."""
        if not arrows:
            if source is None:
                raise BaseCategoryError("an empty path needs an explicit object")
            return self.identity(source)
        return compose_all(self.generator(a) for a in arrows)

    def validate(self, p: PathMorphism) -> None:
        if p.source not in self.objects or p.target not in self.objects:
            raise BaseCategoryError(f"path {p} has unknown endpoints")
        if p.arrows and self.path(p.arrows) != p:
            raise BaseCategoryError(f"path {p.arrows} does not run {p.source} -> {p.target}")

    def paths(self, source: str, target: str, max_length: int) -> list[PathMorphism]:
        """All paths ``source -> target`` of length at most ``max_length``."""
        out = []
        frontier = [PathMorphism(source, source, ())]
        for _ in range(max_length + 1):
            nxt = []
            for p in frontier:
                if p.target == target:
                    out.append(p)
                for name, (s, t) in self._arrow_index.items():
                    if s == p.target:
                        nxt.append(PathMorphism(p.source, t, p.arrows + (name,)))
            frontier = nxt
        return out
