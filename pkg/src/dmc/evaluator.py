"""Standard-model evaluation of typechecked terms as partial functions.

Values follow the structural (unnormalized) shape of a term's domain and
codomain.  Where a composite joins two shapes that are equal only up to the
canonical isomorphisms (associativity, symmetry, unit, distributivity), the
value is transported through the sum-of-products form.

Partiality is realised by fuel: every scheme unfolding and every
minimization step costs one unit.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Union

from .objects import (
    DEFAULT_LEVELS, Coprod, Nat, ObjExpr, Tensor, Top, normalize_object, summands,
)
from .terms import (
    PRN, Bang, Comp, Copair, DistSRR, Dup, EpsAt, EtaAt, FR, Id, Inl, Inr, Into, LUnit,
    LUnitInv, Min, Mod2, Out, Par, Proj1, Proj2, SRR, Succ, Sym, Term, Zero,
)
from .typecheck import Checker, Judgment

DEFAULT_FUEL = 10**6


# -- values ------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Star:
    def __str__(self):
        return "*"


@dataclass(frozen=True, slots=True)
class Num:
    n: int

    def __str__(self):
        return str(self.n)


@dataclass(frozen=True, slots=True)
class Pair:
    a: "Value"
    b: "Value"

    def __str__(self):
        return f"({self.a}, {self.b})"


@dataclass(frozen=True, slots=True)
class InlV:
    v: "Value"

    def __str__(self):
        return f"inl {self.v}"


@dataclass(frozen=True, slots=True)
class InrV:
    v: "Value"

    def __str__(self):
        return f"inr {self.v}"


Value = Union[Star, Num, Pair, InlV, InrV]
STAR = Star()


def value_json(v: Value):
    match v:
        case Star():
            return "*"
        case Num(n):
            return n
        case Pair(a, b):
            return [value_json(a), value_json(b)]
        case InlV(w):
            return {"inl": value_json(w)}
        case InrV(w):
            return {"inr": value_json(w)}


def inhabits(v: Value, x: ObjExpr) -> bool:
    tv, tx = type(v), type(x)
    if tv is Star:
        return tx is Top
    if tv is Num:
        return tx is Nat and v.n >= 0
    if tv is Pair:
        return tx is Tensor and inhabits(v.a, x.left) and inhabits(v.b, x.right)
    if tx is not Coprod:
        return False
    if tv is InlV:
        return inhabits(v.v, x.left)
    return tv is InrV and inhabits(v.v, x.right)


# -- outcomes ----------------------------------------------------------------

@dataclass(frozen=True)
class Done:
    value: Value

    def to_json(self):
        return {"done": value_json(self.value)}


@dataclass(frozen=True)
class FuelExhausted:
    steps: int

    def to_json(self):
        return {"fuel_exhausted": self.steps}


Outcome = Union[Done, FuelExhausted]


def outcome_json(o: Outcome) -> str:
    return json.dumps(o.to_json())


# -- canonical isomorphisms --------------------------------------------------

def to_normal(v: Value, x: ObjExpr) -> tuple[int, list]:
    """Summand index and factor values (in sorted factor order) of ``v : x``."""
    match x:
        case Top():
            return 0, []
        case Nat(ix):
            return 0, [(ix, v)]
        case Coprod(a, b):
            if isinstance(v, InlV):
                return to_normal(v.v, a)
            i, fs = to_normal(v.v, b)
            return len(summands(a)) + i, fs
        case Tensor(a, b):
            i, fa = to_normal(v.a, a)
            j, fb = to_normal(v.b, b)
            fs = sorted(fa + fb, key=lambda e: e[0])
            return i * len(summands(b)) + j, fs
    raise TypeError(f"not an object: {x!r}")


def from_normal(idx: int, factors: list, x: ObjExpr) -> Value:
    match x:
        case Top():
            return STAR
        case Nat():
            return factors[0][1]
        case Coprod(a, b):
            na = len(summands(a))
            if idx < na:
                return InlV(from_normal(idx, factors, a))
            return InrV(from_normal(idx - na, factors, b))
        case Tensor(a, b):
            nb = len(summands(b))
            i, j = divmod(idx, nb)
            want = list(summands(a)[i])
            fa, fb = [], []
            for e in factors:
                if e[0] in want:
                    want.remove(e[0])
                    fa.append(e)
                else:
                    fb.append(e)
            return Pair(from_normal(i, fa, a), from_normal(j, fb, b))
    raise TypeError(f"not an object: {x!r}")


def coerce(v: Value, src: ObjExpr, dst: ObjExpr) -> Value:
    """Transport ``v : src`` along the canonical isomorphism to ``dst``."""
    if src is dst or src == dst:
        return v
    read, write, perms = _plan(src, dst)
    idx, leaves = read(v)
    return write(idx, [leaves[j] for j in perms[idx]])


@lru_cache(maxsize=None)
def _leaves(x: ObjExpr) -> tuple:
    """Factor indices per summand in structural (unsorted) order."""
    match x:
        case Top():
            return ((),)
        case Nat(ix):
            return ((ix,),)
        case Coprod(a, b):
            return _leaves(a) + _leaves(b)
        case Tensor(a, b):
            return tuple(sa + sb for sa in _leaves(a) for sb in _leaves(b))
    raise TypeError(f"not an object: {x!r}")


@lru_cache(maxsize=None)
def _reader(x: ObjExpr):
    match x:
        case Top():
            return lambda v: (0, [])
        case Nat():
            return lambda v: (0, [v])
        case Coprod(a, b):
            ra, rb, na = _reader(a), _reader(b), len(_leaves(a))

            def read(v):
                if isinstance(v, InlV):
                    return ra(v.v)
                i, ls = rb(v.v)
                return na + i, ls
            return read
        case Tensor(a, b):
            ra, rb, nb = _reader(a), _reader(b), len(_leaves(b))

            def read(v):
                i, la = ra(v.a)
                j, lb = rb(v.b)
                return i * nb + j, la + lb
            return read
    raise TypeError(f"not an object: {x!r}")


@lru_cache(maxsize=None)
def _writer(x: ObjExpr):
    match x:
        case Top():
            return lambda idx, ls: STAR
        case Nat():
            return lambda idx, ls: ls[0]
        case Coprod(a, b):
            wa, wb, na = _writer(a), _writer(b), len(_leaves(a))
            return lambda idx, ls: InlV(wa(idx, ls)) if idx < na else InrV(wb(idx - na, ls))
        case Tensor(a, b):
            wa, wb, nb = _writer(a), _writer(b), len(_leaves(b))
            widths = [len(s) for s in _leaves(a)]

            def write(idx, ls):
                i, j = divmod(idx, nb)
                w = widths[i]
                return Pair(wa(i, ls[:w]), wb(j, ls[w:]))
            return write
    raise TypeError(f"not an object: {x!r}")


def _sorting_perm(ixs):
    return sorted(range(len(ixs)), key=lambda j: ixs[j])


@lru_cache(maxsize=None)
def _plan(src: ObjExpr, dst: ObjExpr):
    perms = []
    for s, d in zip(_leaves(src), _leaves(dst), strict=True):
        ps, pd = _sorting_perm(s), _sorting_perm(d)
        perm = [0] * len(d)
        for r, q in enumerate(pd):
            perm[q] = ps[r]
        perms.append(perm)
    return _reader(src), _writer(dst), perms


def _erase_k0(v: Value, x: ObjExpr) -> Value:
    match x:
        case Nat(ix):
            return STAR if ix.k == 0 else v
        case Tensor(a, b):
            return Pair(_erase_k0(v.a, a), _erase_k0(v.b, b))
        case Coprod(a, b):
            return InlV(_erase_k0(v.v, a)) if isinstance(v, InlV) else InrV(_erase_k0(v.v, b))
    return v


# -- evaluation --------------------------------------------------------------

class _OutOfFuel(Exception):
    pass


class Evaluator:
    """Evaluates terms against a shared fuel budget.

    ``trace`` receives one line per fuel step.
    """

    def __init__(self, levels: int = DEFAULT_LEVELS, fuel: int = DEFAULT_FUEL,
                 extended_prn: bool = False, trace: Optional[Callable[[str], None]] = None,
                 checker: Optional[Checker] = None):
        if fuel < 1:
            raise ValueError("fuel must be at least 1")
        self.checker = checker or Checker(levels, extended_prn)
        self.fuel = fuel
        self.remaining = fuel
        self.trace = trace

    def judgment(self, t: Term) -> Judgment:
        return self.checker.judgment(t)

    def run(self, t: Term, v: Value, normalized: bool = False) -> Outcome:
        """Evaluate ``t`` at ``v`` with a fresh budget.

        With ``normalized`` the input and output use the normal-form shapes of
        the judgment instead of the structural ones.
        """
        j = self.checker.judgment(t)
        shape = j.dom if normalized else j.raw_dom
        if not inhabits(v, shape):
            raise ValueError(f"value {v} does not inhabit {shape}")
        if normalized:
            v = coerce(v, j.dom, j.raw_dom)
        self.remaining = self.fuel
        try:
            w = self._ev(t, v)
        except _OutOfFuel:
            return FuelExhausted(self.fuel)
        if normalized:
            w = coerce(w, j.raw_cod, j.cod)
        return Done(w)

    def _tick(self, t, v):
        if self.remaining <= 0:
            raise _OutOfFuel
        self.remaining -= 1
        if self.trace is not None:
            self.trace(f"{type(t).__name__}\t{v}\t{self.remaining}")

    def _raw(self, t):
        j = self.checker.judgment(t)
        return j.raw_dom, j.raw_cod

    def _apply(self, t, v, want_cod):
        """Evaluate ``t`` and transport the result to the shape ``want_cod``."""
        w = self._ev(t, v)
        return coerce(w, self._raw(t)[1], want_cod)

    def _feed(self, t, v, have):
        """Evaluate ``t`` on ``v`` whose shape is ``have``."""
        return self._ev(t, coerce(v, have, self._raw(t)[0]))

    def _ev(self, t: Term, v: Value) -> Value:
        return _RULES[type(t)](self, t, v)

    def _comp(self, t: Comp, v: Value) -> Value:
        # outer successors s_{a1}(...s_{ad}(w)) fold to (w << d) | offset in one pass
        depth = off = 0
        inner = t.f
        if type(inner) is Succ:
            comp, succ = Comp, Succ
            f = inner
            while True:
                if f.n == 2:
                    off |= 1 << depth
                depth += 1
                inner, t = f, t.g
                if type(t) is not comp:
                    break
                f = t.f
                if type(f) is not succ:
                    break
            w = self._ev(t, v)
            if type(w) is not Num:
                w = coerce(w, self._raw(t)[1], Nat(inner.ix))
            return Num((w.n << depth) | off)
        return self._spine(t, v)

    def _spine(self, t: Comp, v: Value) -> Value:
        # walk the spine iteratively; long chains would otherwise recurse deeply
        spine = []
        push = spine.append
        while type(t) is Comp:
            push(t.f)
            t = t.g
        v = self._ev(t, v)
        last = t
        i = len(spine) - 1
        while i >= 0:
            f = spine[i]
            if type(v) is Num and type(f) is Succ:
                # a run of successors works on the plain integer
                n = v.n
                while i >= 0 and type(f := spine[i]) is Succ:
                    n = 2 * n + f.n - 1
                    i -= 1
                v, last = Num(n), spine[i + 1]
                continue
            op = _NAT_OPS.get(type(f))
            if op is not None and type(v) is Num:
                # both shapes are a single natural-number object: no transport needed
                v = op(f, v)
            else:
                v = self._feed(f, v, self._raw(last)[1])
            last = f
            i -= 1
        return v

    def _copair(self, t: Copair, v):
        if isinstance(v, InlV):
            return self._ev(t.f, v.v)
        return self._apply(t.g, v.v, self._raw(t.f)[1])

    def _fr(self, t: FR, v):
        self._tick(t, v)
        m, x = v.a.n, v.b
        if m == 0:
            return self._ev(t.g, x)
        hv = Pair(Num(m >> 1), x)
        return self._apply(t.h, coerce(hv, self._raw(t)[0], self._raw(t.h)[0]),
                           self._raw(t.g)[1])

    def _iterate(self, t, v, step):
        """One step per binary digit of the recursion argument, most significant first."""
        m, x = v.a.n, v.b
        self._tick(t, v)
        acc = self._ev(t.g, x)
        ycod = self._raw(t.g)[1]
        for bit in bin(m)[2:] if m else "":
            self._tick(t, acc)
            h = step(bit == "1")
            acc = self._apply(h, coerce(acc, ycod, self._raw(h)[0]), ycod)
        return acc

    def _prn(self, t: PRN, v):
        m, x = v.a.n, v.b
        self._tick(t, v)
        acc = self._ev(t.g, x)
        ycod = self._raw(t.g)[1]
        y = 0
        for bit in bin(m)[2:] if m else "":
            self._tick(t, acc)
            h = t.h2 if bit == "1" else t.h1
            arg = Pair(Num(y), Pair(x, acc))
            dom = Tensor(Nat(t.ix), Tensor(self._raw(t.g)[0], ycod))
            acc = self._apply(h, coerce(arg, dom, self._raw(h)[0]), ycod)
            y = 2 * y + (bit == "1")
        return acc

    def _min(self, t: Min, v):
        """Unfold the coalgebra ``h`` from ``v``; the result is the number of steps."""
        A, _ = self._raw(t)
        hcod = self._raw(t.h)[1]
        norm = Coprod(Top(), A)
        state, count = v, 0
        while True:
            if t.bound is not None and count > t.bound:
                return InlV(STAR)
            self._tick(t, state)
            r = coerce(self._ev(t.h, state), hcod, norm)
            if isinstance(r, InlV):
                if self.trace is not None:
                    self.trace(_chain_line(t.n, count))
                return Num(count) if t.bound is None else InrV(Num(count))
            state = r.v
            count += 1


def _chain_line(n: int, count: int) -> str:
    """The result spelled as ``count`` successors s^n applied to 0, next to the count.

    The chain denotes a different number when n = 2; the result is the count.
    """
    chain = " ".join([f"s{n}"] * count + ["0"])
    value = 0
    for _ in range(count):
        value = 2 * value + n - 1
    return f"Min.result\tcount {count}\tchain {chain} = {value}"


_NAT_OPS = {
    Succ: lambda t, v: Num(2 * v.n + (t.n - 1)),
    Mod2: lambda t, v: Num(v.n & 1),
    Out: lambda t, v: InlV(STAR) if v.n == 0 else InrV(Num(v.n - 1)),
}

_RULES = {
    Id: lambda ev, t, v: v,
    Comp: Evaluator._comp,
    Par: lambda ev, t, v: Pair(ev._ev(t.f, v.a), ev._ev(t.g, v.b)),
    Copair: Evaluator._copair,
    Sym: lambda ev, t, v: Pair(v.b, v.a),
    LUnit: lambda ev, t, v: v.b,
    LUnitInv: lambda ev, t, v: Pair(STAR, v),
    Inl: lambda ev, t, v: InlV(v),
    Inr: lambda ev, t, v: InrV(v),
    Proj1: lambda ev, t, v: v.a,
    Proj2: lambda ev, t, v: v.b,
    Dup: lambda ev, t, v: Pair(v, v),
    Bang: lambda ev, t, v: STAR,
    Zero: lambda ev, t, v: Num(0),
    Into: lambda ev, t, v: Num(0) if isinstance(v, InlV) else Num(v.v.n + 1),
    EtaAt: lambda ev, t, v: _erase_k0(v, t.x),
    EpsAt: lambda ev, t, v: v,
    FR: Evaluator._fr,
    SRR: lambda ev, t, v: ev._iterate(t, v, lambda bit: t.h),
    DistSRR: lambda ev, t, v: ev._iterate(t, v, lambda bit: t.h2 if bit else t.h1),
    PRN: Evaluator._prn,
    Min: Evaluator._min,
}
for _k, _op in _NAT_OPS.items():
    _RULES[_k] = lambda ev, t, v, _op=_op: _op(t, v)


def evaluate(t: Term, v: Value, fuel: int = DEFAULT_FUEL, levels: int = DEFAULT_LEVELS,
             extended_prn: bool = False, normalized: bool = False, trace=None) -> Outcome:
    return Evaluator(levels, fuel, extended_prn, trace).run(t, v, normalized)


def run_ints(t: Term, *args: int, fuel: int = DEFAULT_FUEL, levels: int = DEFAULT_LEVELS,
             extended_prn: bool = False):
    """Evaluate with the normalized domain filled by ``args`` in factor order.

    Returns the integer result, the value for non-numeric codomains, or the
    :class:`FuelExhausted` outcome.
    """
    ev = Evaluator(levels, fuel, extended_prn)
    j = ev.judgment(t)
    v = point_from_ints(j.dom, args)
    out = ev.run(t, v, normalized=True)
    if isinstance(out, Done):
        return out.value.n if isinstance(out.value, Num) else out.value
    return out


def point_from_ints(x: ObjExpr, args) -> Value:
    ss = summands(x)
    if len(ss) != 1:
        raise ValueError(f"{x} is a coproduct; give an explicit value")
    if len(args) != len(ss[0]):
        raise ValueError(f"{x} needs {len(ss[0])} numbers, got {len(args)}")
    return from_normal(0, [(ix, Num(a)) for ix, a in zip(ss[0], args)], normalize_object(x))
