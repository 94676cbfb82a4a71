"""Judgments for terms, side conditions of the recursion schemes, and classification."""
from __future__ import annotations

import json

from .objects import (
    DEFAULT_LEVELS, TOP, Coprod, IndexOutOfRange, LevelIndex, Nat, ObjExpr, Tensor,
    check_index, in_fiber_T_over_top, map_object, nat_factors,
    same_object, summands, validate_object, T as FT, G as FG, _normalize,
)
from .terms import (
    PRN, Bang, Comp, Copair, DistSRR, Dup, EpsAt, EtaAt, FR, Id, Inl, Inr, Into, LUnit,
    LUnitInv, Min, Mod2, Out, Par, Proj1, Proj2, SRR, Succ, Sym, Term, Zero,
)

MISMATCH = "Mismatch"
SAFE_CODOMAIN = "SafeCodomainViolation"
MIN_BUDGET = "MinBudgetExceeded"
MIN_TARGET = "MinTargetMismatch"
INDEX_RANGE = "IndexOutOfRange"
DISABLED = "DisabledExtension"


class TypingError(Exception):
    def __init__(self, kind: str, location: str, detail: str):
        self.kind, self.location, self.detail = kind, location or ".", detail
        super().__init__(f"{kind} at {self.location}: {detail}")

    def to_json(self):
        return {"error": self.kind, "location": self.location, "detail": self.detail}


class Judgment:
    """Normalized domain and codomain plus minimization depth.

    Equality ignores the structural shapes ``raw_dom``/``raw_cod`` used by the
    evaluator and the highest minimization target ``max_target`` (-1 if none).
    """
    __slots__ = ("dom", "cod", "mindepth", "raw_dom", "raw_cod", "max_target")

    def __init__(self, dom, cod, mindepth, raw_dom=None, raw_cod=None, max_target=-1):
        self.dom, self.cod, self.mindepth = dom, cod, mindepth
        self.raw_dom = dom if raw_dom is None else raw_dom
        self.raw_cod = cod if raw_cod is None else raw_cod
        self.max_target = max_target

    def _key(self):
        return self.dom, self.cod, self.mindepth

    def __eq__(self, other):
        return isinstance(other, Judgment) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Judgment(dom={self.dom!r}, cod={self.cod!r}, mindepth={self.mindepth})"

    def __str__(self):
        return f"{self.dom} ⊢ {self.cod} @ depth {self.mindepth}"

    def to_json(self):
        return {"dom": str(self.dom), "cod": str(self.cod), "mindepth": self.mindepth}


_nf = _normalize


class Checker:
    def __init__(self, levels: int = DEFAULT_LEVELS, extended_prn: bool = False):
        if levels < 1:
            raise ValueError("levels must be at least 1")
        self.levels = levels
        self.extended_prn = extended_prn
        # keyed by id; the terms are kept alive so that ids are never reused
        self._memo: dict[int, Judgment] = {}
        self._alive: list[Term] = []

    def judgment(self, t: Term, path: str = "") -> Judgment:
        j = self._memo.get(id(t))
        if j is not None:
            return j
        j = self._comp(t, path) if type(t) is Comp else self._check(t, path)
        self._memo[id(t)] = j
        self._alive.append(t)
        return j

    def _comp(self, t: Comp, path: str) -> Judgment:
        # hot path for long composites; child paths are only built on a memo miss
        memo = self._memo
        jf = memo.get(id(t.f)) or self.judgment(t.f, path + ".f")
        jg = memo.get(id(t.g)) or self.judgment(t.g, path + ".g")
        if jg.raw_cod is not jf.raw_dom and jg.raw_cod != jf.raw_dom:
            self._same(jg.raw_cod, jf.raw_dom, path, "codomain of g vs domain of f")
        if ((jf.raw_cod is jg.raw_cod or jf.raw_cod == jg.raw_cod) and jf.mindepth <= jg.mindepth
                and jf.max_target <= jg.max_target):
            # an endomorphism after g leaves the judgment of g unchanged
            return jg
        return Judgment(jg.dom, jf.cod, max(jf.mindepth, jg.mindepth), jg.raw_dom, jf.raw_cod,
                        max(jf.max_target, jg.max_target))

    # helpers

    def _ix(self, ix: LevelIndex, path):
        try:
            return check_index(ix, self.levels)
        except IndexOutOfRange as e:
            raise TypingError(INDEX_RANGE, path, str(e)) from None

    def _obj(self, x, path):
        try:
            validate_object(x, self.levels)
        except IndexOutOfRange as e:
            raise TypingError(INDEX_RANGE, path, str(e)) from None
        return x

    @staticmethod
    def _same(a, b, path, what):
        if not same_object(a, b):
            raise TypingError(MISMATCH, path, f"{what}: {_nf(a)} vs {_nf(b)}")

    def _mk(self, raw_dom, raw_cod, depth=0, target=-1):
        return Judgment(_nf(raw_dom), _nf(raw_cod), depth, raw_dom, raw_cod, target)

    def _check(self, t: Term, path: str) -> Judgment:
        sub = lambda child, name: self.judgment(child, f"{path}.{name}")
        mk = self._mk
        match t:
            case Id(x):
                self._obj(x, path)
                return mk(x, x)
            case Par(f, g):
                jf, jg = sub(f, "f"), sub(g, "g")
                return mk(Tensor(jf.raw_dom, jg.raw_dom), Tensor(jf.raw_cod, jg.raw_cod),
                          max(jf.mindepth, jg.mindepth), max(jf.max_target, jg.max_target))
            case Copair(f, g):
                jf, jg = sub(f, "f"), sub(g, "g")
                self._same(jf.raw_cod, jg.raw_cod, path, "copair codomains differ")
                return mk(Coprod(jf.raw_dom, jg.raw_dom), jf.raw_cod,
                          max(jf.mindepth, jg.mindepth), max(jf.max_target, jg.max_target))
            case Sym(x, y):
                self._obj(x, path), self._obj(y, path)
                return mk(Tensor(x, y), Tensor(y, x))
            case LUnit(x):
                self._obj(x, path)
                return mk(Tensor(TOP, x), x)
            case LUnitInv(x):
                self._obj(x, path)
                return mk(x, Tensor(TOP, x))
            case Inl(x, y):
                self._obj(x, path), self._obj(y, path)
                return mk(x, Coprod(x, y))
            case Inr(x, y):
                self._obj(x, path), self._obj(y, path)
                return mk(y, Coprod(x, y))
            case Proj1(x, y):
                self._obj(x, path), self._obj(y, path)
                return mk(Tensor(x, y), x)
            case Proj2(x, y):
                self._obj(x, path), self._obj(y, path)
                return mk(Tensor(x, y), y)
            case Dup(x):
                self._obj(x, path)
                return mk(x, Tensor(x, x))
            case Bang(x):
                self._obj(x, path)
                return mk(x, TOP)
            case Zero(ix):
                self._ix(ix, path)
                return mk(TOP, _nf(Nat(ix)))
            case Succ(ix=ix) | Mod2(ix=ix):
                if isinstance(t, Succ) and t.n not in (1, 2):
                    raise TypingError(MISMATCH, path, f"successor choice {t.n} not in {{1,2}}")
                self._ix(ix, path)
                # the canonical object lets composites compare shapes by identity
                n = _nf(Nat(ix))
                return mk(n, n)
            case Out(ix):
                self._ix(ix, path)
                return mk(Nat(ix), Coprod(TOP, Nat(ix)))
            case Into(ix):
                self._ix(ix, path)
                return mk(Coprod(TOP, Nat(ix)), Nat(ix))
            case EtaAt(x):
                self._obj(x, path)
                return mk(x, map_object(FT, x))
            case EpsAt(x):
                self._obj(x, path)
                return mk(map_object(FG, x), x)
            case FR():
                return self._fr(t, path)
            case SRR():
                return self._srr(t, path)
            case DistSRR():
                return self._dsrr(t, path)
            case Min():
                return self._min(t, path)
            case PRN():
                return self._prn(t, path)
        raise TypingError(MISMATCH, path, f"not a term: {t!r}")

    def _fr(self, t: FR, path):
        self._ix(t.ix, path)
        jg, jh = self.judgment(t.g, path + ".g"), self.judgment(t.h, path + ".h")
        X, Y = jg.raw_dom, jg.raw_cod
        allowed = {LevelIndex(0, t.ix.p)}
        if t.ix.k == 1:
            allowed.add(t.ix)
        for name, obj in (("X", X), ("Y", Y)):
            fs = nat_factors(obj)
            if fs is None or not set(fs) <= allowed:
                want = " / ".join(str(Nat(a)) for a in sorted(allowed))
                raise TypingError(MISMATCH, path,
                                  f"flat recursion needs {name} a tensor power of {want}, got {_nf(obj)}")
        self._same(jh.raw_dom, Tensor(Nat(t.ix), X), path, "flat recursion step domain")
        self._same(jh.raw_cod, Y, path, "flat recursion step codomain")
        return self._mk(Tensor(Nat(t.ix), X), Y, max(jg.mindepth, jh.mindepth),
                        max(jg.max_target, jh.max_target))

    def _srr(self, t: SRR, path):
        ix = self._ix(LevelIndex(1, t.p), path)
        jg, jh = self.judgment(t.g, path + ".g"), self.judgment(t.h, path + ".h")
        Y = jg.raw_cod
        self._same(jh.raw_dom, Y, path, "recursion step domain")
        self._same(jh.raw_cod, Y, path, "recursion step codomain")
        if not in_fiber_T_over_top(Y):
            raise TypingError(SAFE_CODOMAIN, path,
                              f"codomain {_nf(Y)} is not in the fiber of T over Top")
        return self._mk(Tensor(Nat(ix), jg.raw_dom), Y, max(jg.mindepth, jh.mindepth),
                        max(jg.max_target, jh.max_target))

    def _dsrr(self, t: DistSRR, path):
        self._ix(t.ix, path)
        jg = self.judgment(t.g, path + ".g")
        js = [self.judgment(t.h1, path + ".h1"), self.judgment(t.h2, path + ".h2")]
        X, Y = jg.raw_dom, jg.raw_cod
        if len(summands(X)) < 2:
            raise TypingError(MISMATCH, path, f"distributor parameter {_nf(X)} is not a coproduct")
        self._same(Y, Tensor(Nat(t.ix), X), path, "distributor codomain")
        for j in js:
            self._same(j.raw_dom, Y, path, "distributor step domain")
            self._same(j.raw_cod, Y, path, "distributor step codomain")
        return self._mk(Tensor(Nat(t.ix), X), Y, max(j.mindepth for j in [jg, *js]),
                        max(j.max_target for j in [jg, *js]))

    def _prn(self, t: PRN, path):
        if not self.extended_prn:
            raise TypingError(DISABLED, path, "two-branch recursion needs --extended-prn")
        self._ix(t.ix, path)
        jg = self.judgment(t.g, path + ".g")
        js = [self.judgment(t.h1, path + ".h1"), self.judgment(t.h2, path + ".h2")]
        X, Y = jg.raw_dom, jg.raw_cod
        for j in js:
            self._same(j.raw_dom, Tensor(Nat(t.ix), Tensor(X, Y)), path, "step domain")
            self._same(j.raw_cod, Y, path, "step codomain")
        return self._mk(Tensor(Nat(t.ix), X), Y, max(j.mindepth for j in [jg, *js]),
                        max(j.max_target for j in [jg, *js]))

    def _min(self, t: Min, path):
        jh = self.judgment(t.h, path + ".h")
        depth = jh.mindepth + 1
        if depth > self.levels:
            raise TypingError(MIN_BUDGET, path,
                              f"{depth} nested minimizations exceed the budget i={self.levels}")
        if t.n not in (1, 2):
            raise TypingError(MISMATCH, path, f"successor choice {t.n} not in {{1,2}}")
        ix = self._ix(t.target, path)
        A = jh.raw_dom
        self._same(jh.raw_cod, Coprod(TOP, A), path, "minimization step must be A -> Top + A")
        if ix.p != jh.max_target + 1:
            raise TypingError(MIN_TARGET, path,
                              f"target level {ix.p} must be one above the inner targets "
                              f"(max {jh.max_target})")
        if t.bound is not None and t.bound < 0:
            raise TypingError(MISMATCH, path, "search bound must be non-negative")
        cod = Nat(ix) if t.bound is None else Coprod(TOP, Nat(ix))
        return self._mk(A, cod, depth, ix.p)


def typecheck(t: Term, levels: int = DEFAULT_LEVELS, extended_prn: bool = False) -> Judgment:
    """Judgment of ``t``; raises :class:`TypingError` on the first violated condition."""
    return Checker(levels, extended_prn).judgment(t)


def classify(t: Term, levels: int = DEFAULT_LEVELS, extended_prn: bool = False) -> int:
    """Minimization depth of ``t``: the function lies in the (depth+1)-th class."""
    return typecheck(t, levels, extended_prn).mindepth


def raw_types(t: Term) -> tuple[ObjExpr, ObjExpr]:
    j = Checker(levels=10**6, extended_prn=True).judgment(t)
    return j.raw_dom, j.raw_cod


def describe_level(level: int) -> str:
    return f"level {level} → class P^Σ_{level} membership bound: □ᴾ_{level + 1}"


def render(result, as_json=False) -> str:
    if as_json:
        return json.dumps(result.to_json())
    return str(result)
