"""Arrow syntax of the free category and its s-expression form.

Every object embedded in a node is kept in normal form by the helper
constructors at the bottom of this module.  Derived arrows (numerals, the
distributor, the standard library) live in :mod:`dmc.library`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .objects import (
    TOP, Coprod, FunctorTag, LevelIndex, Nat, ObjExpr, Tensor, Top,
    functor_index, map_object, normalize_object,
)
from .sexpr import Atom, ParseError, SList, read_one


class DisabledExtension(Exception):
    pass


@dataclass(frozen=True, slots=True)
class Id:
    x: ObjExpr


@dataclass(frozen=True, slots=True)
class Comp:
    """``f`` after ``g``."""
    f: "Term"
    g: "Term"


@dataclass(frozen=True, slots=True)
class Par:
    f: "Term"
    g: "Term"


@dataclass(frozen=True, slots=True)
class Sym:
    x: ObjExpr
    y: ObjExpr


@dataclass(frozen=True, slots=True)
class LUnit:
    x: ObjExpr


@dataclass(frozen=True, slots=True)
class LUnitInv:
    x: ObjExpr


@dataclass(frozen=True, slots=True)
class Inl:
    x: ObjExpr
    y: ObjExpr


@dataclass(frozen=True, slots=True)
class Inr:
    x: ObjExpr
    y: ObjExpr


@dataclass(frozen=True, slots=True)
class Copair:
    f: "Term"
    g: "Term"


@dataclass(frozen=True, slots=True)
class Proj1:
    x: ObjExpr
    y: ObjExpr


@dataclass(frozen=True, slots=True)
class Proj2:
    x: ObjExpr
    y: ObjExpr


@dataclass(frozen=True, slots=True)
class Dup:
    x: ObjExpr


@dataclass(frozen=True, slots=True)
class Bang:
    x: ObjExpr


@dataclass(frozen=True, slots=True)
class Zero:
    ix: LevelIndex


@dataclass(frozen=True, slots=True)
class Succ:
    n: int
    ix: LevelIndex


@dataclass(frozen=True, slots=True)
class Mod2:
    """Low binary digit, N -> N."""
    ix: LevelIndex


@dataclass(frozen=True, slots=True)
class Out:
    """Structure map of the final coalgebra, N -> Top + N (0 -> inl, c -> inr c-1)."""
    ix: LevelIndex


@dataclass(frozen=True, slots=True)
class Into:
    """Inverse of :class:`Out`, Top + N -> N."""
    ix: LevelIndex


@dataclass(frozen=True, slots=True)
class EtaAt:
    x: ObjExpr


@dataclass(frozen=True, slots=True)
class EpsAt:
    x: ObjExpr


@dataclass(frozen=True, slots=True)
class FR:
    g: "Term"
    h: "Term"
    ix: LevelIndex


@dataclass(frozen=True, slots=True)
class SRR:
    g: "Term"
    h: "Term"
    p: int


@dataclass(frozen=True, slots=True)
class DistSRR:
    """Digit-matched recursion used only to build distributors.

    Steps ``h1``/``h2`` are taken for binary digits 0/1.  Its codomain is not
    required to be safe, but it must be N_ix tensored with the domain of ``g``.
    """
    g: "Term"
    h1: "Term"
    h2: "Term"
    ix: LevelIndex


@dataclass(frozen=True, slots=True)
class Min:
    h: "Term"
    n: int
    target: LevelIndex
    bound: Optional[int] = None


@dataclass(frozen=True, slots=True)
class PRN:
    """Two-branch recursion on notation with access to the predecessor (extension)."""
    g: "Term"
    h1: "Term"
    h2: "Term"
    ix: LevelIndex


Term = Union[Id, Comp, Par, Sym, LUnit, LUnitInv, Inl, Inr, Copair, Proj1, Proj2,
             Dup, Bang, Zero, Succ, Mod2, Out, Into, EtaAt, EpsAt, FR, SRR, DistSRR,
             Min, PRN]

GENERATORS = (Zero, Succ, Mod2, Out, Into)


def children(t: Term) -> list[tuple[str, Term]]:
    match t:
        case Comp(f, g) | Par(f, g) | Copair(f, g):
            return [("f", f), ("g", g)]
        case FR(g, h, _) | SRR(g, h, _):
            return [("g", g), ("h", h)]
        case DistSRR(g, h1, h2, _) | PRN(g, h1, h2, _):
            return [("g", g), ("h1", h1), ("h2", h2)]
        case Min(h=h):
            return [("h", h)]
    return []


def size(t: Term) -> int:
    return 1 + sum(size(c) for _, c in children(t))


def compose(*ts: Term) -> Term:
    """``compose(f, g, h)`` is f after g after h."""
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = Comp(t, out)
    return out


# -- functor action ----------------------------------------------------------

def _nf(x):
    return normalize_object(x)


def _fx(f, x):
    return _nf(map_object(f, x))


def _erase(src: ObjExpr, dst: ObjExpr) -> Term:
    """Canonical arrow from ``src`` to a structurally similar ``dst`` in which
    some generators were sent to Top."""
    if src == dst:
        return Id(_nf(src))
    match src, dst:
        case Nat(), Top():
            return Bang(src)
        case Tensor(a, b), Tensor(c, d):
            return Par(_erase(a, c), _erase(b, d))
        case Coprod(a, b), Coprod(c, d):
            return Copair(Comp(Inl(_nf(c), _nf(d)), _erase(a, c)),
                          Comp(Inr(_nf(c), _nf(d)), _erase(b, d)))
    raise ValueError(f"no erasure from {src} to {dst}")


def _collapsed(f: FunctorTag, ix: LevelIndex) -> bool:
    return functor_index(f, ix) is None


def apply_functor_term(f: FunctorTag, t: Term) -> Term:
    """Push the functor ``f`` through ``t``.

    Scheme nodes whose recursion object is sent to Top become their base case
    composed with the left unitor.
    """
    ap = lambda s: apply_functor_term(f, s)
    fx = lambda x: _fx(f, x)
    match t:
        case Id(x):
            return Id(fx(x))
        case Comp(a, b):
            return Comp(ap(a), ap(b))
        case Par(a, b):
            return Par(ap(a), ap(b))
        case Copair(a, b):
            return Copair(ap(a), ap(b))
        case Sym(x, y) | Inl(x, y) | Inr(x, y) | Proj1(x, y) | Proj2(x, y):
            return type(t)(fx(x), fx(y))
        case LUnit(x) | LUnitInv(x) | Dup(x) | Bang(x):
            return type(t)(fx(x))
        case Zero(ix) | Succ(_, ix) | Mod2(ix) | Out(ix) | Into(ix):
            j = functor_index(f, ix)
            if j is not None:
                return Succ(t.n, j) if isinstance(t, Succ) else type(t)(j)
            match t:
                case Out():
                    return Inl(TOP, TOP)
                case Into():
                    return Copair(Id(TOP), Id(TOP))
            return Id(TOP)
        case EtaAt(x):
            if f.kind == "M":
                return EtaAt(fx(x))
            # T and G do not commute with T; spell the image out
            return _erase(map_object(f, x), map_object(f, map_object(FunctorTag("T"), x)))
        case EpsAt(x):
            if f.kind == "M":
                return EpsAt(fx(x))
            return _erase(map_object(f, map_object(FunctorTag("G"), x)), map_object(f, x))
        case FR(g=g, ix=ix) | DistSRR(g=g, ix=ix) | PRN(g=g, ix=ix):
            j = functor_index(f, ix)
            if j is None:
                return _unit_base(f, g)
            match t:
                case FR():
                    return FR(ap(g), ap(t.h), j)
                case DistSRR(_, h1, h2, _):
                    return DistSRR(ap(g), ap(h1), ap(h2), j)
                case PRN(_, h1, h2, _):
                    return PRN(ap(g), ap(h1), ap(h2), j)
        case SRR(g, h, p):
            j = functor_index(f, LevelIndex(1, p))
            if j is None:
                return _unit_base(f, g)
            return SRR(ap(g), ap(h), j.p)
        case Min(h, n, target, bound):
            j = functor_index(f, target)
            if j is None:
                if bound is not None:
                    raise ValueError(f"{f} collapses the target of a bounded minimization")
                from .typecheck import raw_types
                return Bang(fx(raw_types(t)[0]))
            return Min(ap(h), n, j, bound)
    raise TypeError(f"not a term: {t!r}")


def _unit_base(f, g):
    from .typecheck import raw_types
    fg = apply_functor_term(f, g)
    return Comp(fg, LUnit(_fx(f, raw_types(g)[0])))


# -- s-expression form -------------------------------------------------------

def obj_sexpr(x: ObjExpr) -> str:
    match x:
        case Top():
            return "top"
        case Nat(ix):
            return f"(N {ix.k} {ix.p})"
        case Tensor(a, b):
            return f"(* {obj_sexpr(a)} {obj_sexpr(b)})"
        case Coprod(a, b):
            return f"(+ {obj_sexpr(a)} {obj_sexpr(b)})"
    raise TypeError(x)


def _ix(ix: LevelIndex) -> str:
    return f"({ix.k} {ix.p})"


_OBJ1 = {LUnit: "lunit", LUnitInv: "lunit-inv", Dup: "dup", Bang: "bang", Id: "id",
         EtaAt: "eta", EpsAt: "eps"}
_OBJ2 = {Sym: "sym", Inl: "inl", Inr: "inr", Proj1: "proj1", Proj2: "proj2"}
_IX1 = {Zero: "zero", Mod2: "mod2", Out: "out", Into: "into"}


def to_sexpr(t: Term) -> str:
    cls = type(t)
    if cls in _OBJ1:
        return f"({_OBJ1[cls]} {obj_sexpr(t.x)})"
    if cls in _OBJ2:
        return f"({_OBJ2[cls]} {obj_sexpr(t.x)} {obj_sexpr(t.y)})"
    if cls in _IX1:
        return f"({_IX1[cls]} {_ix(t.ix)})"
    match t:
        case Comp(f, g):
            return f"(comp {to_sexpr(f)} {to_sexpr(g)})"
        case Par(f, g):
            return f"(par {to_sexpr(f)} {to_sexpr(g)})"
        case Copair(f, g):
            return f"(copair {to_sexpr(f)} {to_sexpr(g)})"
        case Succ(n, ix):
            return f"(succ {n} {_ix(ix)})"
        case FR(g, h, ix):
            return f"(fr {to_sexpr(g)} {to_sexpr(h)} {_ix(ix)})"
        case SRR(g, h, p):
            return f"(srr {to_sexpr(g)} {to_sexpr(h)} {p})"
        case DistSRR(g, h1, h2, ix):
            return f"(dsrr {to_sexpr(g)} {to_sexpr(h1)} {to_sexpr(h2)} {_ix(ix)})"
        case PRN(g, h1, h2, ix):
            return f"(prn {to_sexpr(g)} {to_sexpr(h1)} {to_sexpr(h2)} {_ix(ix)})"
        case Min(h, n, ix, bound):
            tail = "" if bound is None else f" {bound}"
            return f"(min {to_sexpr(h)} {n} {_ix(ix)}{tail})"
    raise TypeError(f"not a term: {t!r}")


def _err(node, msg):
    return ParseError(msg, getattr(node, "line", None), getattr(node, "column", None))


def _int(node) -> int:
    if isinstance(node, Atom):
        try:
            return int(node.text)
        except ValueError:
            pass
    raise _err(node, f"expected an integer, got {node}")


def parse_obj_sexpr(node) -> ObjExpr:
    if isinstance(node, Atom):
        if node.text.lower() == "top":
            return TOP
        raise _err(node, f"unknown object {node.text!r}")
    head = node.head
    if head == "N" and len(node) == 3:
        try:
            return Nat(LevelIndex(_int(node[1]), _int(node[2])))
        except ValueError as e:
            raise _err(node, str(e)) from None
    if head in ("*", "+") and len(node) == 3:
        a, b = parse_obj_sexpr(node[1]), parse_obj_sexpr(node[2])
        return Tensor(a, b) if head == "*" else Coprod(a, b)
    raise _err(node, f"malformed object {node}")


def parse_ix(node) -> LevelIndex:
    if not isinstance(node, SList) or len(node) != 2:
        raise _err(node, f"expected a level index (k p), got {node}")
    try:
        return LevelIndex(_int(node[0]), _int(node[1]))
    except ValueError as e:
        raise _err(node, str(e)) from None


def _bit(node) -> int:
    n = _int(node)
    if n not in (1, 2):
        raise _err(node, f"successor choice must be 1 or 2, got {n}")
    return n


def from_sexpr(node, env: dict | None = None, expand=None) -> Term:
    """Build a term from a parsed s-expression.

    Bare symbols are looked up in ``env``; ``expand`` may handle extra forms
    and returns None when it does not recognise one.
    """
    env = env or {}
    rec = lambda n: from_sexpr(n, env, expand)
    if isinstance(node, Atom):
        if node.text in env:
            return env[node.text]
        raise _err(node, f"unknown name {node.text!r}")
    head = node.head
    args = node.items[1:]

    def arity(k):
        if len(args) != k:
            raise _err(node, f"{head} takes {k} arguments, got {len(args)}")

    for cls, name in _OBJ1.items():
        if head == name:
            arity(1)
            return cls(_nf(parse_obj_sexpr(args[0])))
    for cls, name in _OBJ2.items():
        if head == name:
            arity(2)
            return cls(_nf(parse_obj_sexpr(args[0])), _nf(parse_obj_sexpr(args[1])))
    for cls, name in _IX1.items():
        if head == name:
            arity(1)
            return cls(parse_ix(args[0]))
    match head:
        case "comp" | "par" | "copair":
            if len(args) < 2:
                raise _err(node, f"{head} needs at least 2 arguments")
            parts = [rec(a) for a in args]
            cls = {"comp": Comp, "par": Par, "copair": Copair}[head]
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = cls(p, out)
            return out
        case "succ":
            arity(2)
            return Succ(_bit(args[0]), parse_ix(args[1]))
        case "fr":
            arity(3)
            return FR(rec(args[0]), rec(args[1]), parse_ix(args[2]))
        case "srr":
            arity(3)
            return SRR(rec(args[0]), rec(args[1]), _int(args[2]))
        case "dsrr":
            arity(4)
            return DistSRR(rec(args[0]), rec(args[1]), rec(args[2]), parse_ix(args[3]))
        case "prn":
            arity(4)
            return PRN(rec(args[0]), rec(args[1]), rec(args[2]), parse_ix(args[3]))
        case "min":
            if len(args) not in (3, 4):
                raise _err(node, "min takes 3 or 4 arguments")
            bound = _int(args[3]) if len(args) == 4 else None
            return Min(rec(args[0]), _bit(args[1]), parse_ix(args[2]), bound)
    if expand is not None:
        t = expand(node, rec)
        if t is not None:
            return t
    raise _err(node, f"unknown term form {head!r}")


def parse_term(src: str, env: dict | None = None) -> Term:
    return from_sexpr(read_one(src), env)
