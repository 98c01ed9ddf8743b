"""Shapes: expressions over generators and the unit built with tensor and dual.

A :class:`Shape` is stored as its postfix token sequence (atom names,
``"*"`` for tensor, ``"'"`` for dual).  The parse-tree view (children,
signs, leaf positions) is derived on demand, iteratively, so shapes with
hundreds of thousands of leaves never hit the recursion limit.

Concrete syntax::

    shape   := term ("*" term)*        # tensor, left-associative
    term    := primary "'"*            # postfix dual, binds tighter
    primary := IDENT | "I" | "(" shape ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .goi import UNIT, Sign, SignedSet

__all__ = [
    "Shape",
    "Sign",
    "ShapeSyntaxError",
    "UNIT",
    "Atom",
    "Tensor",
    "Dual",
    "I",
    "parse_shape",
    "print_shape",
    "sign_at",
    "leaves",
    "Sequent",
    "CutSequent",
    "right_comb",
]

TENSOR = "*"
DUAL = "'"
_IDENT = re.compile(r"[a-z][A-Za-z0-9_]*")


class ShapeSyntaxError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = -1):
        self.text = text
        self.pos = pos
        if pos >= 0:
            message = f"{message} at position {pos}"
        super().__init__(message)


@dataclass(frozen=True)
class _Tree:
    children: tuple[tuple[int, ...], ...]
    parity: tuple[int, ...]
    start: tuple[int, ...]
    leaf_pos: tuple[int, ...]


class Shape:
    def __init__(self, tokens: Iterable[str]):
        self.tokens: tuple[str, ...] = tuple(tokens)
        if not self.tokens:
            raise ValueError("empty shape")

    # -- construction -----------------------------------------------------

    @classmethod
    def atom(cls, name: str) -> Shape:
        if name != UNIT and not _IDENT.fullmatch(name):
            raise ShapeSyntaxError(f"bad generator name {name!r}")
        return cls((name,))

    def __mul__(self, other: Shape) -> Shape:
        return Shape(self.tokens + other.tokens + (TENSOR,))

    def dual(self) -> Shape:
        return Shape(self.tokens + (DUAL,))

    # -- tree view ----------------------------------------------------------

    @cached_property
    def _tree(self) -> _Tree:
        toks = self.tokens
        n = len(toks)
        children: list[tuple[int, ...]] = [()] * n
        start = [0] * n
        stack: list[int] = []
        for i, tok in enumerate(toks):
            if tok == TENSOR:
                if len(stack) < 2:
                    raise ValueError("malformed postfix shape")
                r = stack.pop()
                l = stack.pop()
                children[i] = (l, r)
                start[i] = start[l]
            elif tok == DUAL:
                if not stack:
                    raise ValueError("malformed postfix shape")
                c = stack.pop()
                children[i] = (c,)
                start[i] = start[c]
            else:
                start[i] = i
            stack.append(i)
        if len(stack) != 1:
            raise ValueError("malformed postfix shape")
        parity = [0] * n
        for i in range(n - 1, -1, -1):
            p = parity[i] ^ (toks[i] == DUAL)
            for c in children[i]:
                parity[c] = p
        leaf_pos = tuple(i for i, t in enumerate(toks) if t != TENSOR and t != DUAL)
        return _Tree(tuple(children), tuple(parity), tuple(start), leaf_pos)

    @property
    def kind(self) -> str:
        tok = self.tokens[-1]
        if tok == TENSOR:
            return "tensor"
        if tok == DUAL:
            return "dual"
        return "atom"

    @property
    def is_atom(self) -> bool:
        return self.kind == "atom"

    @property
    def is_unit(self) -> bool:
        return self.tokens == (UNIT,)

    @property
    def name(self) -> str:
        if not self.is_atom:
            raise AttributeError("only atoms have a name")
        return self.tokens[0]

    @property
    def left(self) -> Shape:
        if self.kind != "tensor":
            raise AttributeError("only tensors have a left argument")
        r = self._tree.children[-1][1]
        return Shape(self.tokens[: self._tree.start[r]])

    @property
    def right(self) -> Shape:
        if self.kind != "tensor":
            raise AttributeError("only tensors have a right argument")
        r = self._tree.children[-1][1]
        return Shape(self.tokens[self._tree.start[r] : -1])

    @property
    def arg(self) -> Shape:
        if self.kind != "dual":
            raise AttributeError("only duals have an argument")
        return Shape(self.tokens[:-1])

    @property
    def size(self) -> int:
        """Number of parse-tree vertices."""
        return len(self.tokens)

    @property
    def n_leaves(self) -> int:
        return len(self._tree.leaf_pos)

    @property
    def leaf_positions(self) -> tuple[int, ...]:
        return self._tree.leaf_pos

    @property
    def children(self) -> tuple[tuple[int, ...], ...]:
        return self._tree.children

    @property
    def parity(self) -> tuple[int, ...]:
        """Number of dual ancestors (mod 2) of each vertex, by postfix position."""
        return self._tree.parity

    def subtree(self, pos: int) -> Shape:
        return Shape(self.tokens[self._tree.start[pos] : pos + 1])

    def position(self, path: Sequence[int]) -> int:
        """Postfix position of the vertex reached by a root-to-node child path."""
        pos = len(self.tokens) - 1
        for step in path:
            kids = self._tree.children[pos]
            if not 0 <= step < len(kids):
                raise IndexError(f"invalid tree path {tuple(path)}")
            pos = kids[step]
        return pos

    def tensor_positions(self) -> list[int]:
        return [i for i, t in enumerate(self.tokens) if t == TENSOR]

    def atoms(self) -> tuple[str, ...]:
        return tuple(self.tokens[i] for i in self._tree.leaf_pos)

    def generators(self) -> set[str]:
        return {a for a in self.atoms() if a != UNIT}

    # -- value semantics ----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Shape):
            return NotImplemented
        return self.tokens == other.tokens

    def __hash__(self) -> int:
        return hash(self.tokens)

    def __lt__(self, other: Shape) -> bool:
        return self.tokens < other.tokens

    def __repr__(self) -> str:
        text = print_shape(self)
        if len(text) > 60:
            text = text[:57] + "..."
        return f"Shape({text!r})"

    def __str__(self) -> str:
        return print_shape(self)


def Atom(name: str) -> Shape:
    return Shape.atom(name)


def Tensor(left: Shape, right: Shape) -> Shape:
    return left * right


def Dual(arg: Shape) -> Shape:
    return arg.dual()


I = Shape((UNIT,))


def right_comb(atoms: Sequence[str]) -> Shape:
    """``a0 * (a1 * (... * an))`` built in linear time."""
    if not atoms:
        raise ValueError("need at least one atom")
    toks = list(atoms) + [TENSOR] * (len(atoms) - 1)
    return Shape(toks)


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(-o)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(1):
            yield "-o", m.start(1)
        elif m.group(2):
            yield m.group(2), m.start(2)
        else:
            yield m.group(3), m.start(3)
        pos = m.end()


def _parse(
    text: str,
    objects: Iterable[str] | None = None,
    *,
    sugar: bool = False,
    names: Mapping[str, Shape] | None = None,
) -> Shape:
    """Operator-precedence parse straight into postfix tokens.

    ``sugar`` enables ``A -o B`` (lowest precedence, right-associative) and
    ``bot``; ``names`` substitutes previously declared shapes.
    """
    known = None if objects is None else set(objects)
    names = names or {}
    out: list[str] = []
    ops: list[tuple[str, int]] = []  # pending "*", "-o", "(" with positions
    expect_operand = True

    def reduce_until(stop) -> None:
        while ops and stop(ops[-1][0]):
            op, _ = ops.pop()
            if op == "*":
                out.append(TENSOR)
            else:  # A -o B  ==  (A * B')'
                out.extend((DUAL, TENSOR, DUAL))

    for tok, pos in _tokenize(text):
        if expect_operand:
            if tok == "(":
                ops.append(("(", pos))
            elif tok == UNIT:
                out.append(UNIT)
                expect_operand = False
            elif sugar and tok == "bot":
                out.extend((UNIT, DUAL))
                expect_operand = False
            elif tok in names:
                out.extend(names[tok].tokens)
                expect_operand = False
            elif _IDENT.fullmatch(tok):
                if known is not None and tok not in known:
                    raise ShapeSyntaxError(f"unknown generator {tok!r}", text, pos)
                out.append(tok)
                expect_operand = False
            else:
                raise ShapeSyntaxError(f"expected a shape, found {tok!r}", text, pos)
        else:
            if tok == DUAL:
                out.append(DUAL)
            elif tok == "*":
                reduce_until(lambda op: op == "*")
                ops.append(("*", pos))
                expect_operand = True
            elif sugar and tok == "-o":
                # right-associative: only tighter operators are reduced
                reduce_until(lambda op: op == "*")
                ops.append(("-o", pos))
                expect_operand = True
            elif tok == ")":
                reduce_until(lambda op: op != "(")
                if not ops:
                    raise ShapeSyntaxError("unbalanced ')'", text, pos)
                ops.pop()
            else:
                raise ShapeSyntaxError(f"unexpected {tok!r}", text, pos)
    if expect_operand:
        raise ShapeSyntaxError("unexpected end of shape", text, len(text))
    reduce_until(lambda op: op != "(")
    if ops:
        raise ShapeSyntaxError("unbalanced '('", text, ops[-1][1])
    return Shape(out)


def parse_shape(text: str, objects: Iterable[str] | None = None) -> Shape:
    """Parse the core shape grammar.

    When ``objects`` is given, every generator must be one of them.
    """
    return _parse(text, objects)


def print_shape(s: Shape) -> str:
    """Infix text with every nested tensor parenthesised.

    ``parse_shape(print_shape(s)) == s`` for every shape.
    """
    toks = s.tokens
    kids = s.children
    root = len(toks) - 1
    pieces: list[str] = []
    # explicit stack of (position, wrap-in-parens) / literal strings
    stack: list = [(root, False)]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            pieces.append(item)
            continue
        pos, wrap = item
        tok = toks[pos]
        if tok == TENSOR:
            l, r = kids[pos]
            if wrap:
                stack.append(")")
            stack.append((r, toks[r] == TENSOR))
            stack.append("*")
            stack.append((l, toks[l] == TENSOR))
            if wrap:
                stack.append("(")
        elif tok == DUAL:
            (c,) = kids[pos]
            stack.append("'")
            stack.append((c, toks[c] == TENSOR))
        else:
            pieces.append(tok)
    return "".join(pieces)


# -- signs and leaves -------------------------------------------------------------


def sign_at(s: Shape, path: Sequence[int] = ()) -> Sign:
    """Sign of the vertex at a root-to-node child path (``()`` is the root)."""
    return Sign.of_parity(s.parity[s.position(path)])


def leaves(s: Shape) -> SignedSet:
    cached = s.__dict__.get("_leaves")
    if cached is None:
        par = s.parity
        toks = s.tokens
        pos, neg = Sign.POS, Sign.NEG
        cached = SignedSet((toks[i], neg if par[i] else pos) for i in s.leaf_positions)
        s.__dict__["_leaves"] = cached
    return cached


def leaf_signs(s: Shape) -> tuple[Sign, ...]:
    par = s.parity
    return tuple(Sign.of_parity(par[i]) for i in s.leaf_positions)


# -- sequents ---------------------------------------------------------------------


@dataclass(frozen=True)
class Sequent:
    shapes: tuple[Shape, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "shapes", tuple(self.shapes))
        if not self.shapes:
            raise ValueError("a sequent is non-empty")

    def __str__(self) -> str:
        return ", ".join(map(str, self.shapes))


@dataclass(frozen=True)
class CutSequent:
    """A sequent part plus cut pairs; each pair stores ``S`` for ``<S | S'>``.

    Trees are numbered sequent shapes first, then for each cut pair its
    ``S`` side followed by its ``S'`` side.  Leaf ``i`` of ``S`` is the
    partner of leaf ``i`` of ``S'``.
    """

    shapes: tuple[Shape, ...] = ()
    cuts: tuple[Shape, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "shapes", tuple(self.shapes))
        object.__setattr__(self, "cuts", tuple(self.cuts))
        if not self.shapes and not self.cuts:
            raise ValueError("a cut sequent is non-empty")

    def trees(self) -> list[Shape]:
        out = list(self.shapes)
        for c in self.cuts:
            out.append(c)
            out.append(c.dual())
        return out

    def cut_trees(self, k: int) -> tuple[int, int]:
        base = len(self.shapes) + 2 * k
        return base, base + 1

    def n_vertices(self) -> int:
        return sum(t.size for t in self.trees())

    def __str__(self) -> str:
        parts = [str(s) for s in self.shapes]
        parts += [f"<{c} | {c.dual()}>" for c in self.cuts]
        return ", ".join(parts)
