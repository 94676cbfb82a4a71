"""Extensional checking of commuting diagrams, plus the standard diagram suites."""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .evaluator import (
    DEFAULT_FUEL, Done, Evaluator, InlV, Num, Pair, coerce, from_normal, point_from_ints,
)
from .library import (
    bit_length, case_zero, cond, dist, dist_power, dist_top, kleene_family, kleene_min,
    mod2_paper, numeral, point, pred,
)
from .objects import (
    DEFAULT_LEVELS, TOP, Coprod, LevelIndex, M, N, Nat, ObjExpr, T, G, Tensor,
    apply_functor_obj, normalize_object, summands,
)
from .terms import (
    Bang, Comp, Copair, EtaAt, Id, Inl, Inr, LUnitInv, Min, Mod2, Out, Par, Proj1, Proj2, Sym, Term, Zero,
    apply_functor_term,
)
from .typecheck import Checker, TypingError, MISMATCH, raw_types

DEFAULT_SAMPLE_BOUND = 32


@dataclass(frozen=True)
class DiagramSpec:
    name: str
    left: Term
    right: Term
    # explicit sample points in the normalized domain; None means enumerate
    samples: tuple | None = None


@dataclass
class DiagramReport:
    name: str
    checked: int = 0
    disagreements: list = field(default_factory=list)
    inconclusive: list = field(default_factory=list)

    @property
    def commutes(self) -> bool:
        return not self.disagreements and not self.inconclusive

    def __str__(self):
        status = "ok" if self.commutes else "FAIL"
        return (f"{status:4} {self.name}: {self.checked} points, "
                f"{len(self.disagreements)} disagreements, {len(self.inconclusive)} inconclusive")

    def to_json(self):
        return {"name": self.name, "checked": self.checked,
                "disagreements": [[str(a) for a in d] for d in self.disagreements],
                "inconclusive": [str(p) for p in self.inconclusive]}


def enumerate_points(x: ObjExpr, bound: int = DEFAULT_SAMPLE_BOUND):
    """All values of the normal form of ``x`` with every number at most ``bound``."""
    x = normalize_object(x)
    for idx, factors in enumerate(summands(x)):
        for nums in itertools.product(range(bound + 1), repeat=len(factors)):
            yield from_normal(idx, [(ix, Num(n)) for ix, n in zip(factors, nums)], x)


def recursion_points(left: ObjExpr, rest: ObjExpr, m_bound: int, bound: int):
    """Points of ``left * rest`` in normal form: numbers in ``left`` (the
    recursion argument) up to ``m_bound``, all others up to ``bound``."""
    nl, nr = normalize_object(left), normalize_object(rest)
    norm = normalize_object(Tensor(nl, nr))
    for a in enumerate_points(nl, m_bound):
        for b in enumerate_points(nr, bound):
            yield coerce(Pair(a, b), Tensor(nl, nr), norm)


def check_diagram(d: DiagramSpec, samples=None, fuel: int = DEFAULT_FUEL,
                  levels: int = DEFAULT_LEVELS, bound: int = DEFAULT_SAMPLE_BOUND,
                  workers: int = 1, extended_prn: bool = False) -> DiagramReport:
    """Evaluate both legs on every sample point of the normalized domain."""
    checker = Checker(levels, extended_prn)
    jl, jr = checker.judgment(d.left), checker.judgment(d.right)
    if jl != jr:
        raise TypingError(MISMATCH, ".", f"{d.name}: legs have judgments {jl} and {jr}")
    if samples is None:
        samples = d.samples if d.samples is not None else list(enumerate_points(jl.dom, bound))

    def one(v):
        # a fresh evaluator per point keeps the fuel budgets independent
        return v, [Evaluator(levels, fuel, extended_prn, checker=checker).run(t, v, normalized=True)
                   for t in (d.left, d.right)]

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, samples))
    else:
        results = [one(v) for v in samples]
    report = DiagramReport(d.name)
    for v, (a, b) in results:
        report.checked += 1
        if not (isinstance(a, Done) and isinstance(b, Done)):
            report.inconclusive.append(v)
        elif a.value != b.value:
            report.disagreements.append((v, a.value, b.value))
    return report


# -- suites ------------------------------------------------------------------

POINT_OBJECTS = {
    "Top": TOP,
    "N00": N(0, 0),
    "N00*N00": Tensor(N(0, 0), N(0, 0)),
}


def distributivity_diagrams(p: int = 0, m_bound: int = 32, x_bound: int = 8,
                            objects=None, levels: int = DEFAULT_LEVELS):
    """Both squares for every numeral m; the points of X (resp. Y) are the samples."""
    objects = objects or POINT_OBJECTS
    n = N(1, p)
    for (xn, X), (yn, Y) in itertools.product(objects.items(), repeat=2):
        d = dist(p, X, Y, levels=levels)
        yield from _squares(d, f"dist[{xn},{yn}]", n, X, Y, range(m_bound + 1),
                            lambda m: numeral(m, n.ix, levels), x_bound)


def distributivity_power_diagrams(p: int = 0, m_bound: int = 8, x_bound: int = 8,
                                  levels: int = DEFAULT_LEVELS):
    """The alpha = 2 variant with tuples of numerals."""
    n2 = Tensor(N(1, p), N(1, p))
    for (xn, X), (yn, Y) in itertools.product(POINT_OBJECTS.items(), repeat=2):
        d = dist_power(p, 2, X, Y, levels=levels)
        ms = list(itertools.product(range(m_bound + 1), repeat=2))
        yield from _squares(d, f"dist^2[{xn},{yn}]", n2, X, Y, ms,
                            lambda m: point(n2, m), x_bound)


def _squares(d, name, n, X, Y, ms, spell, bound):
    nX, nY = normalize_object(X), normalize_object(Y)
    nx, ny = normalize_object(Tensor(n, X)), normalize_object(Tensor(n, Y))
    for m in ms:
        mh = spell(m)
        for side, obj, src, dst in (("inl", nX, Inl(nX, nY), Inl(nx, ny)),
                                    ("inr", nY, Inr(nX, nY), Inr(nx, ny))):
            left = Comp(Comp(d, Par(mh, src)), LUnitInv(obj))
            right = Comp(Comp(dst, Par(mh, Id(obj))), LUnitInv(obj))
            yield DiagramSpec(f"{name} m={m} {side}", left, right,
                              samples=tuple(enumerate_points(obj, bound)))


def coherence_diagrams(levels: int = DEFAULT_LEVELS, m_bound: int = 32, x_bound: int = 8):
    """Functor images of distributors against distributors built at the image indices.

    Samples follow the distributivity grid: the recursion argument up to
    ``m_bound``, the numbers in the coproduct up to ``x_bound``.
    """
    out = []
    for p in range(levels):
        objs_p = [TOP, N(0, p), Tensor(N(0, p), N(0, p))]
        for X, Y in itertools.product(objs_p, repeat=2):
            d0 = dist(p, X, Y, k=0, levels=levels)
            out.append((f"T d[N(0,{p})] {X},{Y}", apply_functor_term(T, d0),
                        dist_top(apply_functor_obj(T, X), apply_functor_obj(T, Y))))
            out.append((f"G d[N(0,{p})] {X},{Y}", apply_functor_term(G, d0),
                        dist(p, apply_functor_obj(G, X), apply_functor_obj(G, Y), k=1, levels=levels)))
            for k in (0, 1):
                dk = dist(p, X, Y, k=k, levels=levels)
                mX, mY = apply_functor_obj(M(p), X), apply_functor_obj(M(p), Y)
                fresh = dist_top(mX, mY) if p == 0 else dist(p - 1, mX, mY, k=k, levels=levels)
                out.append((f"M{p} d[N({k},{p})] {X},{Y}", apply_functor_term(M(p), dk), fresh))
    specs = []
    for name, a, b in out:
        dom, _ = raw_types(a)
        samples = tuple(recursion_points(dom.left, dom.right, m_bound, x_bound))
        specs.append(DiagramSpec(name, a, b, samples))
    return specs


def eta_naturality(f: Term, name: str, levels: int = DEFAULT_LEVELS) -> DiagramSpec:
    """eta_B . f  vs  T f . eta_A."""
    j = Checker(levels).judgment(f)
    left = Comp(EtaAt(j.cod), f)
    right = Comp(apply_functor_term(T, f), EtaAt(j.dom))
    return DiagramSpec(f"eta naturality: {name}", left, right)


def eta_diagrams(p: int = 0, levels: int = DEFAULT_LEVELS):
    return [
        eta_naturality(pred(LevelIndex(0, p)), "pred", levels),
        eta_naturality(pred(LevelIndex(1, p)), "pred on N1", levels),
        eta_naturality(cond(p), "C", levels),
        eta_naturality(mod2_paper(p), "mod2paper", levels),
        eta_naturality(bit_length(p), "bitlen", levels),
    ]


def min_square(m: Min, name: str = "min", bound: int | None = None) -> DiagramSpec:
    """(0 + s)^-1 . mu  vs  (1 + mu) . h."""
    ix = m.target
    n = Nat(ix)
    left = Comp(Out(ix), m)
    right = Comp(Copair(Inl(TOP, n), Comp(Inr(TOP, n), m)), m.h)
    samples = None if bound is None else tuple(enumerate_points(m_dom(m), bound))
    return DiagramSpec(f"coalgebra square: {name}", left, right, samples)


def m_dom(m: Min) -> ObjExpr:
    return Checker(levels=10**6).judgment(m).dom


def min_square_family(levels: int = DEFAULT_LEVELS) -> list[tuple[str, Min]]:
    """Ten minimizations with terminating coalgebras ``h : A -> Top + A``."""
    ix, ix1 = LevelIndex(0, 0), LevelIndex(1, 0)
    n, n1 = Nat(ix), Nat(ix1)
    nn = normalize_object(Tensor(n, n))
    stop = lambda a: Comp(Inl(TOP, a), Bang(a))
    go = lambda a, f: Comp(Inr(TOP, a), f)
    tgt = LevelIndex(0, 0)
    # inl when the low digit is 0, else continue with the binary predecessor
    strip = case_zero(n, Mod2(ix), stop(n), go(n, Comp(pred(ix), Proj1(n, n))), levels)
    halve = case_zero(n, Id(n), stop(n), go(n, Comp(pred(ix), Proj1(n, n))), levels)
    parity_once = case_zero(n, Mod2(ix), stop(n), go(n, Comp(Zero(ix), Bang(nn))), levels)
    down_first = case_zero(nn, Proj1(n, n), stop(nn),
                           go(nn, Comp(Sym(n, n), Par(Proj2(n, n), Id(n)))), levels)
    a = Coprod(TOP, n)
    one_step = Copair(Comp(Inl(TOP, a), Bang(TOP)), Comp(Inr(TOP, a), Comp(Inl(TOP, n), Bang(n))))
    inner = Min(Out(ix), 1, tgt)
    nested = Comp(Out(ix), inner)
    out = [
        ("unary countdown", Min(Out(ix), 1, tgt)),
        ("strip trailing ones", Min(strip, 1, tgt)),
        ("halve to zero", Min(halve, 2, tgt)),
        ("stop at once", Min(stop(n1), 1, tgt)),
        ("parity once", Min(parity_once, 1, tgt)),
        ("countdown first of pair", Min(down_first, 1, tgt)),
        ("coproduct carrier", Min(one_step, 1, tgt)),
        ("nested countdown", Min(nested, 1, LevelIndex(0, 1))),
    ]
    for name in ("bitlen-b", "bitlen-2b"):
        f, _ = kleene_family()[name]
        out.append((f"kleene search {name}", kleene_min(f).f))
    return out


def reachable_states(m: Min, starts, fuel: int = DEFAULT_FUEL, levels: int = DEFAULT_LEVELS):
    """Carrier points visited when unfolding ``m.h`` from each start (normalized shape)."""
    ev = Evaluator(levels, fuel)
    seen = {}
    for v in starts:
        while v not in seen:
            seen[v] = None
            out = ev.run(m.h, v, normalized=True)
            if not isinstance(out, Done) or isinstance(out.value, InlV):
                break
            # the normal form of Top + A is Top + (normal form of A)
            v = out.value.v
    return tuple(seen)


def min_square_diagrams(levels: int = DEFAULT_LEVELS, bound: int = 64, pair_bound: int = 12):
    """Samples: all carrier points up to ``bound``.  For Kleene searches the
    states reachable from (x, 0) with x up to ``bound``; other carriers with
    two numeric slots use ``pair_bound`` per slot."""
    out = []
    for name, m in min_square_family(levels):
        dom = m_dom(m)
        if name.startswith("kleene"):
            # the searched slot N_{0,0} sorts before the parameter N_{1,0}
            starts = [point_from_ints(dom, (0, x)) for x in range(bound + 1)]
            spec = min_square(m, name)
            out.append(DiagramSpec(spec.name, spec.left, spec.right,
                                   reachable_states(m, starts, levels=levels)))
            continue
        width = max(len(s) for s in summands(dom))
        out.append(min_square(m, name, bound if width < 2 else pair_bound))
    return out
