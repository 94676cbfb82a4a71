"""Objects of the free category: the unit, tiered naturals, tensors and coproducts.

Objects are compared through a canonical sum-of-products form: a
right-nested coproduct of right-nested tensors whose factors are sorted by
``(k, p)``.  The functors T, G and M(q) act on generators and are extended
homomorphically.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

DEFAULT_LEVELS = 3


class IndexOutOfRange(ValueError):
    pass


@dataclass(frozen=True, order=True, slots=True)
class LevelIndex:
    k: int
    p: int

    def __post_init__(self):
        if self.k not in (0, 1):
            raise IndexOutOfRange(f"safety index k={self.k} not in {{0,1}}")
        if self.p < 0:
            raise IndexOutOfRange(f"minimization index p={self.p} is negative")

    def __str__(self):
        return f"({self.k} {self.p})"


def check_index(ix: LevelIndex, levels: int) -> LevelIndex:
    if not 0 <= ix.p < levels:
        raise IndexOutOfRange(f"minimization index p={ix.p} not in 0..{levels - 1}")
    return ix


@dataclass(frozen=True, slots=True)
class Top:
    def __str__(self):
        return "Top"


@dataclass(frozen=True, slots=True)
class Nat:
    ix: LevelIndex

    def __str__(self):
        return f"N[{self.ix.k},{self.ix.p}]"


@dataclass(frozen=True, slots=True)
class Tensor:
    left: "ObjExpr"
    right: "ObjExpr"
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("*", self.left, self.right)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return f"({self.left} * {self.right})"


@dataclass(frozen=True, slots=True)
class Coprod:
    left: "ObjExpr"
    right: "ObjExpr"
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("+", self.left, self.right)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return f"({self.left} + {self.right})"


ObjExpr = Union[Top, Nat, Tensor, Coprod]

TOP = Top()


def N(k: int, p: int) -> Nat:
    return Nat(LevelIndex(k, p))


# -- functor tags ------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class FunctorTag:
    """``kind`` is ``"T"``, ``"G"`` or ``"M"``; ``q`` is only meaningful for M."""
    kind: str
    q: int = 0

    def __post_init__(self):
        if self.kind not in ("T", "G", "M"):
            raise ValueError(f"unknown functor {self.kind!r}")
        if self.kind == "M" and self.q < 0:
            raise IndexOutOfRange(f"M index {self.q} is negative")

    def __str__(self):
        return f"M({self.q})" if self.kind == "M" else self.kind


T = FunctorTag("T")
G = FunctorTag("G")


def M(q: int) -> FunctorTag:
    return FunctorTag("M", q)


def functor_index(f: FunctorTag, ix: LevelIndex) -> LevelIndex | None:
    """Action of ``f`` on the generator N_ix; ``None`` stands for Top."""
    if f.kind == "T":
        return None if ix.k == 0 else ix
    if f.kind == "G":
        return LevelIndex(1, ix.p)
    if ix.p != f.q:
        return ix
    if f.q == 0:
        return None
    return LevelIndex(ix.k, ix.p - 1)


# -- sum-of-products ---------------------------------------------------------

@lru_cache(maxsize=None)
def summands(x: ObjExpr) -> tuple[tuple[LevelIndex, ...], ...]:
    """Distributed form of ``x``: one sorted tuple of factor indices per summand."""
    match x:
        case Top():
            return ((),)
        case Nat(ix):
            return ((ix,),)
        case Coprod(a, b):
            return summands(a) + summands(b)
        case Tensor(a, b):
            return tuple(tuple(sorted(sa + sb)) for sa in summands(a) for sb in summands(b))
    raise TypeError(f"not an object: {x!r}")


def product(factors) -> ObjExpr:
    factors = list(factors)
    if not factors:
        return TOP
    out: ObjExpr = Nat(factors[-1])
    for ix in reversed(factors[:-1]):
        out = Tensor(Nat(ix), out)
    return out


def from_summands(ss) -> ObjExpr:
    ss = list(ss)
    out = product(ss[-1])
    for s in reversed(ss[:-1]):
        out = Coprod(product(s), out)
    return out


def validate_object(x: ObjExpr, levels: int = DEFAULT_LEVELS) -> ObjExpr:
    for s in summands(x):
        for ix in s:
            check_index(ix, levels)
    return x


@lru_cache(maxsize=None)
def _normalize(x: ObjExpr) -> ObjExpr:
    return from_summands(summands(x))


def normalize_object(x: ObjExpr, levels: int | None = None) -> ObjExpr:
    if levels is not None:
        validate_object(x, levels)
    return _normalize(x)


def same_object(a: ObjExpr, b: ObjExpr) -> bool:
    return a == b or summands(a) == summands(b)


def map_object(f: FunctorTag, x: ObjExpr) -> ObjExpr:
    """Structural functor action, without renormalizing."""
    match x:
        case Top():
            return x
        case Nat(ix):
            j = functor_index(f, ix)
            return TOP if j is None else Nat(j)
        case Tensor(a, b):
            return Tensor(map_object(f, a), map_object(f, b))
        case Coprod(a, b):
            return Coprod(map_object(f, a), map_object(f, b))
    raise TypeError(f"not an object: {x!r}")


def apply_functor_obj(f: FunctorTag, x: ObjExpr) -> ObjExpr:
    return _normalize(map_object(f, x))


def in_fiber_T_over_top(x: ObjExpr) -> bool:
    return apply_functor_obj(T, x) == TOP


def min_fiber_residue(x: ObjExpr, levels: int = DEFAULT_LEVELS) -> ObjExpr:
    # M(0) is applied first
    for q in range(levels):
        x = apply_functor_obj(M(q), x)
    return _normalize(x)


def nat_factors(x: ObjExpr) -> tuple[LevelIndex, ...] | None:
    """Factors of a coproduct-free object, or None if ``x`` has several summands."""
    ss = summands(x)
    return ss[0] if len(ss) == 1 else None


# -- text form ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(Top|N\[\s*\d+\s*,\s*\d+\s*\]|[()*+])")


def format_object(x: ObjExpr) -> str:
    return str(x)


def parse_object(text: str) -> ObjExpr:
    """Parse ``Top``, ``N[k,p]``, ``(x * y)`` and ``(x + y)``."""
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"unexpected input at column {pos}: {text[pos:pos + 10]!r}")
        tokens.append(m.group(1))
        pos = m.end()

    def parse(i):
        if i >= len(tokens):
            raise ValueError("unexpected end of object")
        tok = tokens[i]
        if tok == "Top":
            return TOP, i + 1
        if tok.startswith("N["):
            k, p = (int(s) for s in tok[2:-1].split(","))
            return N(k, p), i + 1
        if tok != "(":
            raise ValueError(f"unexpected token {tok!r}")
        left, i = parse(i + 1)
        op = tokens[i] if i < len(tokens) else None
        if op not in ("*", "+"):
            raise ValueError(f"expected '*' or '+', got {op!r}")
        right, i = parse(i + 1)
        if i >= len(tokens) or tokens[i] != ")":
            raise ValueError("expected ')'")
        node = Tensor(left, right) if op == "*" else Coprod(left, right)
        return node, i + 1

    obj, end = parse(0)
    if end != len(tokens):
        raise ValueError(f"trailing input after object: {tokens[end:]}")
    return obj
