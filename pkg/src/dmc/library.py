"""Derived arrows: numerals, distributors, the standard library and minimization wrappers."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .objects import (
    DEFAULT_LEVELS, TOP, Coprod, LevelIndex, Nat, ObjExpr, Tensor, check_index,
    normalize_object, summands,
)
from .terms import (
    PRN, Bang, Comp, Copair, DisabledExtension, DistSRR, Dup, FR, Id, Inl, Inr, Into,
    LUnit, LUnitInv, Min, Mod2, Out, Par, Proj1, Proj2, SRR, Succ, Sym, Term, Zero,
    compose,
)
from .typecheck import raw_types


def _nf(x):
    return normalize_object(x)


def _L(k, p):
    return LevelIndex(k, p)


_SHARED_NUMERALS = 1 << 17


def numeral(m: int, ix: LevelIndex, levels: int = DEFAULT_LEVELS) -> Term:
    """Top -> N_ix spelling ``m`` in binary, most significant digit applied first."""
    if m < 0:
        raise ValueError("numerals are non-negative")
    check_index(ix, levels)
    return _shared_numeral(m, ix) if m < _SHARED_NUMERALS else _numeral(m, ix)


def _numeral(m: int, ix: LevelIndex) -> Term:
    if m < _SHARED_NUMERALS:
        return _shared_numeral(m, ix)
    return Comp(_succ(2 if m & 1 else 1, ix), _numeral(m >> 1, ix))


@lru_cache(maxsize=None)
def _shared_numeral(m: int, ix: LevelIndex) -> Term:
    # the numeral of m >> 1 is shared as a subterm; the cache is bounded by
    # _SHARED_NUMERALS per index
    if m == 0:
        return Zero(ix)
    return Comp(_succ(2 if m & 1 else 1, ix), _shared_numeral(m >> 1, ix))


@lru_cache(maxsize=None)
def _succ(n: int, ix: LevelIndex) -> Succ:
    return Succ(n, ix)


def point(x: ObjExpr, values) -> Term:
    """Top -> x for a coproduct-free ``x`` from one number per factor (structural order)."""
    vals = list(values)

    def build(obj):
        match obj:
            case Nat(ix):
                return numeral(vals.pop(0), ix, levels=ix.p + 1)
            case Tensor(a, b):
                return Comp(Par(build(a), build(b)), Comp(Sym(TOP, TOP), LUnitInv(TOP)))
            case _:
                if obj == TOP:
                    return Id(TOP)
        raise ValueError(f"no point construction for {obj}")

    t = build(x)
    if vals:
        raise ValueError("too many values for point")
    return t


# -- distributors ------------------------------------------------------------

def dist_top(x: ObjExpr, y: ObjExpr) -> Term:
    """Top * (x + y) -> (Top * x) + (Top * y)."""
    x, y = _nf(x), _nf(y)
    tx, ty = _nf(Tensor(TOP, x)), _nf(Tensor(TOP, y))
    return Comp(Copair(Comp(Inl(tx, ty), LUnitInv(x)), Comp(Inr(tx, ty), LUnitInv(y))),
                LUnit(_nf(Coprod(x, y))))


def dist(p: int, x: ObjExpr, y: ObjExpr, k: int = 1, levels: int = DEFAULT_LEVELS) -> Term:
    """N_{k,p} * (x + y) -> (N_{k,p} * x) + (N_{k,p} * y) by digit-matched recursion.

    Base: (0 * x) after l^-1 on each summand.  Step for digit n: (s^n * x) + (s^n * y).
    """
    ix = check_index(_L(k, p), levels)
    x, y = _nf(x), _nf(y)
    n = Nat(ix)
    nx, ny = _nf(Tensor(n, x)), _nf(Tensor(n, y))
    base = Copair(Comp(Inl(nx, ny), Comp(Par(Zero(ix), Id(x)), LUnitInv(x))),
                  Comp(Inr(nx, ny), Comp(Par(Zero(ix), Id(y)), LUnitInv(y))))

    def step(bit):
        s = Succ(bit, ix)
        return Copair(Comp(Inl(nx, ny), Par(s, Id(x))), Comp(Inr(nx, ny), Par(s, Id(y))))

    return DistSRR(base, step(1), step(2), ix)


def dist_inverse(ix: LevelIndex, x: ObjExpr, y: ObjExpr) -> Term:
    x, y = _nf(x), _nf(y)
    n = Nat(ix)
    return Copair(Par(Id(n), Inl(x, y)), Par(Id(n), Inr(x, y)))


def dist_power(p: int, alpha: int, x: ObjExpr, y: ObjExpr, k: int = 1,
               levels: int = DEFAULT_LEVELS) -> Term:
    """N^alpha * (x + y) -> (N^alpha * x) + (N^alpha * y), N^alpha right-nested."""
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    n = Nat(_L(k, p))
    if alpha == 1:
        return dist(p, x, y, k, levels)
    rest = n
    for _ in range(alpha - 2):
        rest = Tensor(n, rest)
    inner = dist_power(p, alpha - 1, x, y, k, levels)
    outer = dist(p, Tensor(rest, x), Tensor(rest, y), k, levels)
    return Comp(outer, Par(Id(n), inner))


def dist_for(a: ObjExpr, x: ObjExpr, y: ObjExpr, levels: int = DEFAULT_LEVELS) -> Term:
    """Distributor a * (x + y) -> (a * x) + (a * y) for a coproduct-free ``a``."""
    fs = summands(a)
    if len(fs) != 1:
        raise ValueError(f"{a} is not coproduct-free")
    factors = fs[0]
    if not factors:
        return dist_top(x, y)
    ix = factors[0]
    if len(factors) == 1:
        return dist(ix.p, x, y, ix.k, levels)
    from .objects import product
    rest = product(factors[1:])
    inner = dist_for(rest, x, y, levels)
    outer = dist(ix.p, Tensor(rest, x), Tensor(rest, y), ix.k, levels)
    return Comp(outer, Par(Id(Nat(ix)), inner))


# -- small combinators -------------------------------------------------------

def const(m: int, dom: ObjExpr, ix: LevelIndex) -> Term:
    return Comp(numeral(m, ix, levels=ix.p + 1), Bang(_nf(dom)))


def unary_succ(ix: LevelIndex) -> Term:
    return Comp(Into(ix), Inr(TOP, Nat(ix)))


def unary_pred(ix: LevelIndex) -> Term:
    """c -> c - 1, truncated at 0."""
    n = Nat(ix)
    return Comp(Copair(Zero(ix), Id(n)), Out(ix))


def case_zero(a: ObjExpr, test: Term, if_zero: Term, if_pos: Term,
              levels: int = DEFAULT_LEVELS) -> Term:
    """``a -> B``: run ``test : a -> N``; continue with ``if_zero : a -> B`` when it
    yields 0, else with ``if_pos : a * N -> B`` on the predecessor."""
    a = _nf(a)
    ix = _the_nat(raw_types(test)[1])
    n = Nat(ix)
    d = dist_for(a, TOP, n, levels)
    left = Comp(if_zero, Proj1(a, TOP))
    return compose(Copair(left, if_pos), d, Par(Id(a), Comp(Out(ix), test)), Dup(a))


def _the_nat(x: ObjExpr) -> LevelIndex:
    x = _nf(x)
    if not isinstance(x, Nat):
        raise ValueError(f"expected a natural-number object, got {x}")
    return x.ix


def projection(j: int, objs: list[ObjExpr]) -> Term:
    """pi_j on the right-nested tensor of ``objs`` (1-based)."""
    objs = [_nf(o) for o in objs]
    if not 1 <= j <= len(objs):
        raise ValueError("projection index out of range")
    if len(objs) == 1:
        return Id(objs[0])
    rest_obj = objs[-1]
    for o in reversed(objs[1:-1]):
        rest_obj = Tensor(o, rest_obj)
    rest_obj = _nf(rest_obj)
    if j == 1:
        return Proj1(objs[0], rest_obj)
    return Comp(projection(j - 1, objs[1:]), Proj2(objs[0], rest_obj))


# -- standard library --------------------------------------------------------

def pred(ix: LevelIndex) -> Term:
    """Binary predecessor n -> n // 2 by flat recursion."""
    n = Nat(ix)
    return FR(Zero(ix), Proj1(n, TOP), ix)


def monus1(p: int) -> Term:
    """a -> 1 - a (truncated) on N_{0,p}."""
    ix = _L(0, p)
    return FR(Comp(Succ(2, ix), Zero(ix)), Comp(Zero(ix), Bang(_nf(Tensor(Nat(ix), TOP)))), ix)


def mod2_paper(p: int) -> Term:
    """The recursion N_{1,p} -> N_{0,p}: start at 0, apply ``1 -`` once per digit."""
    ix0 = _L(0, p)
    return SRR(Zero(ix0), monus1(p), p)


def zero_test(p: int, k: int = 1) -> Term:
    """Z(t, (b, c)) = b if t = 0 else c, by flat recursion on N_{k,p}."""
    ix, n0 = _L(k, p), Nat(_L(0, p))
    pair = _nf(Tensor(n0, n0))
    g = Proj1(n0, n0)
    h = Comp(Proj2(n0, n0), Proj2(Nat(ix), pair))
    return FR(g, h, ix)


def cond(p: int) -> Term:
    """C(; a, b, c) = b if a is even else c, all inputs on N_{0,p}."""
    ix0 = _L(0, p)
    n0 = Nat(ix0)
    return Comp(zero_test(p, k=0), Par(Mod2(ix0), Id(_nf(Tensor(n0, n0)))))


def cond_paper(p: int) -> Term:
    """Z after the digit-flipping recursion: selects on parity of the bit length of a."""
    n0 = Nat(_L(0, p))
    return Comp(zero_test(p, k=0), Par(mod2_paper(p), Id(_nf(Tensor(n0, n0)))))


def bit_length(p: int) -> Term:
    """N_{1,p} -> N_{0,p}, the number of binary digits, one unary step per digit."""
    ix0 = _L(0, p)
    return SRR(Zero(ix0), unary_succ(ix0), p)


@dataclass(frozen=True)
class StdLibEntry:
    name: str
    term: Term
    reference: Callable
    description: str


def stdlib(p: int = 0, levels: int = DEFAULT_LEVELS) -> list[StdLibEntry]:
    """Entries at minimization level ``p``; references take the numbers of the
    normalized domain in factor order."""
    ix0, ix1 = _L(0, p), _L(1, p)
    n0 = Nat(ix0)
    entries = [
        StdLibEntry("zero", Zero(ix0), lambda: 0, "constant 0"),
        StdLibEntry("proj", projection(2, [n0, n0, n0]), lambda a, b, c: b,
                    "second of three safe inputs"),
        StdLibEntry("succ1", Succ(1, ix0), lambda m: 2 * m, "m -> 2m"),
        StdLibEntry("succ2", Succ(2, ix0), lambda m: 2 * m + 1, "m -> 2m+1"),
        StdLibEntry("pred", pred(ix0), lambda m: m // 2, "drop the last binary digit"),
        StdLibEntry("pred1", pred(ix1), lambda m: m // 2, "pred on the normal tier"),
        StdLibEntry("Z", zero_test(p), lambda b, c, t: b if t == 0 else c,
                    "conditional on test for zero"),
        StdLibEntry("monus1", monus1(p), lambda a: 1 - min(a, 1), "a -> 1 - a"),
        StdLibEntry("mod2paper", mod2_paper(p), lambda a: a.bit_length() % 2,
                    "digit-flipping recursion"),
        StdLibEntry("mod2", Mod2(ix0), lambda a: a % 2, "low binary digit"),
        StdLibEntry("C", cond(p), lambda a, b, c: b if a % 2 == 0 else c,
                    "conditional modulo"),
        StdLibEntry("Cpaper", cond_paper(p), lambda b, c, a: b if a.bit_length() % 2 == 0 else c,
                    "conditional built from the digit-flipping recursion"),
        StdLibEntry("bitlen", bit_length(p), lambda a: a.bit_length(), "binary length"),
    ]
    return entries


def stdlib_entry(name: str, p: int = 0) -> StdLibEntry:
    for e in stdlib(p):
        if e.name == name:
            return e
    raise KeyError(name)


# -- two-branch recursion ----------------------------------------------------

def prn_extended(g: Term, h1: Term, h2: Term, ix: LevelIndex, enabled: bool = False) -> Term:
    if not enabled:
        raise DisabledExtension("two-branch recursion on notation needs --extended-prn")
    return PRN(g, h1, h2, ix)


# -- minimization ------------------------------------------------------------

def kleene_min(f: Term, target: LevelIndex | None = None, n: int = 1,
               levels: int = DEFAULT_LEVELS) -> Term:
    """x -> least b with f(x, b) = 0, for ``f : X * N_b -> N_r``.

    The search state (x, b) is the carrier of the unfolded coalgebra; the
    minimization counts the steps, which equals the least witness.
    """
    A, cod = raw_types(f)
    # the searched variable is the right factor of the structural domain
    if isinstance(_nf(A), Nat):
        # no parameters: search over the only input
        f, A = Comp(f, LUnit(_nf(A))), Tensor(TOP, _nf(A))
    if not (isinstance(A, Tensor) and isinstance(_nf(A.right), Nat)):
        raise ValueError(f"kleene_min needs f : X * N -> N, got {A}")
    X, bix = A.left, _nf(A.right).ix
    An = _nf(A)
    step = Par(Id(_nf(X)), unary_succ(bix))
    h = case_zero(
        An, f,
        Comp(Inl(TOP, An), Bang(An)),
        Comp(Inr(TOP, An), Comp(step, Proj1(An, Nat(_the_nat(cod))))),
        levels,
    )
    if target is None:
        from .typecheck import Checker
        depth_target = Checker(levels=10**6).judgment(h).max_target + 1
        target = _L(0, depth_target)
    start = Comp(Par(Id(_nf(X)), Zero(bix)), Comp(Sym(TOP, _nf(X)), LUnitInv(_nf(X))))
    return Comp(Min(h, n, target), start)


def safe_min(h: Term, bound: int | None = None, target: LevelIndex | None = None,
             levels: int = DEFAULT_LEVELS) -> Term:
    """(x; a) -> 2b + 1 for the least b with h(x; a, b) even.

    With ``bound`` the search stops after b = bound and yields 0 when no
    witness was found; without it the search is partial.
    """
    _, cod = raw_types(h)
    rix = _the_nat(cod)
    km = kleene_min(Comp(Mod2(rix), h), target=target, levels=levels)
    mn, start = km.f, km.g
    out_ix = mn.target
    if bound is None:
        return compose(Succ(2, out_ix), mn, start)
    bounded = Min(mn.h, mn.n, out_ix, bound)
    return compose(Copair(Zero(out_ix), Succ(2, out_ix)), bounded, start)


def bound_minimizations(t: Term, bound: int) -> Term:
    """Give every unbounded minimization in ``t`` the search bound ``bound``.

    A bounded search with no witness yields 0; a safe minimization block
    (``s2`` after a minimization) yields 0 as a whole.
    """
    rec = lambda s: bound_minimizations(s, bound)

    def boxed(m: Min, post=None):
        b = Min(rec(m.h), m.n, m.target, bound)
        found = Id(Nat(m.target)) if post is None else post
        return Comp(Copair(Zero(m.target), found), b)

    match t:
        case Comp(Succ(2, ix) as s, Min(bound=None) as m):
            return boxed(m, s)
        case Comp(Succ(2, ix) as s, Comp(Min(bound=None) as m, rest)):
            return Comp(boxed(m, s), rec(rest))
        case Min(bound=None):
            return boxed(t)
        case Comp(f, g):
            return Comp(rec(f), rec(g))
        case Par(f, g):
            return Par(rec(f), rec(g))
        case Copair(f, g):
            return Copair(rec(f), rec(g))
        case FR(g, h, ix):
            return FR(rec(g), rec(h), ix)
        case SRR(g, h, p):
            return SRR(rec(g), rec(h), p)
        case DistSRR(g, h1, h2, ix):
            return DistSRR(rec(g), rec(h1), rec(h2), ix)
        case PRN(g, h1, h2, ix):
            return PRN(rec(g), rec(h1), rec(h2), ix)
        case Min(h, n, ix, b):
            return Min(rec(h), n, ix, b)
    return t


# -- test families for the minimization combinators ---------------------------

def monus_by_digits(p: int = 0) -> Term:
    """(x, b) -> bitlen(x) - b on N_{1,p} * N_{0,p}, truncated.

    The accumulator is (remaining b, result); each digit of x either spends
    one unit of b or counts one.
    """
    ix0 = _L(0, p)
    n = Nat(ix0)
    nn = _nf(Tensor(n, n))
    g = Comp(Par(Id(n), Zero(ix0)), Comp(Sym(TOP, n), LUnitInv(n)))
    spend = Comp(Sym(n, n), Par(Proj2(n, n), Id(n)))
    h = case_zero(nn, Proj1(n, n), Par(Id(n), unary_succ(ix0)), spend)
    return Comp(Proj2(n, n), SRR(g, h, p))


def kleene_family(p: int = 0) -> dict[str, tuple[Term, callable]]:
    """Functions f : N_{1,p} * N_{0,p} -> N with a reference ``f(x, b)``."""
    ix0, ix1 = _L(0, p), _L(1, p)
    base = monus_by_digits(p)
    on_b = lambda t: Comp(base, Par(Id(Nat(ix1)), t))
    bl = lambda x: x.bit_length()
    return {
        "bitlen-b": (base, lambda x, b: max(bl(x) - b, 0)),
        "bitlen-half-b": (on_b(pred(ix0)), lambda x, b: max(bl(x) - b // 2, 0)),
        "parity": (Comp(Mod2(ix1), Proj1(Nat(ix1), Nat(ix0))), lambda x, b: x % 2),
        "bitlen-pred-b": (on_b(unary_pred(ix0)), lambda x, b: max(bl(x) - max(b - 1, 0), 0)),
        "bitlen-2b": (on_b(Succ(1, ix0)), lambda x, b: max(bl(x) - 2 * b, 0)),
    }
