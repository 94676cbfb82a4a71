"""The ten acceptance criteria at their stated tolerances."""
import itertools
import time

import oracles
from acceptance_log import record
from nesting import nested_min
from dmc.diagrams import (
    check_diagram, coherence_diagrams, distributivity_diagrams, distributivity_power_diagrams,
    eta_diagrams, min_square_diagrams,
)
from dmc.evaluator import STAR, Done, Evaluator, FuelExhausted, Num, point_from_ints
from dmc.library import (
    kleene_family, kleene_min, numeral, pred, safe_min, stdlib_entry,
)
from dmc.model2i import format_table, verify_model_equations
from dmc.objects import TOP, Coprod, LevelIndex, N, Nat, Tensor
from dmc.terms import Comp, Dup, Id, Inr, Min, Out, Par, SRR, Succ
from dmc.typecheck import MIN_BUDGET, SAFE_CODOMAIN, TypingError, classify, typecheck

L00 = LevelIndex(0, 0)


def run_all(ev, t, points):
    """Normalized-shape outcomes of ``t`` at integer tuples."""
    dom = ev.judgment(t).dom
    for args in points:
        yield args, ev.run(t, point_from_ints(dom, args), normalized=True)


def test_numerals_denote_their_values():
    bad = []
    start = time.perf_counter()
    for k in (0, 1):
        for p in range(3):
            ix = LevelIndex(k, p)
            run = Evaluator().run
            for m in range(2**16 + 1):
                out = run(numeral(m, ix), STAR)
                if out.value.n != m:
                    bad.append((ix, m))
    elapsed = time.perf_counter() - start
    record(1, "numerals, m <= 2^16 at all 6 indices", not bad and elapsed < 5,
           f"{len(bad)} wrong, {elapsed:.2f} s, limit 5 s")


def test_initial_functions():
    ev = Evaluator()
    bad = 0
    for name, want in (("succ1", oracles.s1), ("succ2", oracles.s2)):
        t = stdlib_entry(name).term
        bad += sum(o.value.n != want(m) for (m,), o in run_all(ev, t, ((m,) for m in range(10**4 + 1))))
    bad += sum(o.value.n != oracles.pred(n)
               for (n,), o in run_all(ev, pred(L00), ((n,) for n in range(10**4 + 1))))
    c = stdlib_entry("C").term
    grid = itertools.product(range(65), repeat=3)
    bad += sum(o.value.n != oracles.cond_truth_table(*args) for args, o in run_all(ev, c, grid))
    record(2, "s1, s2, pred up to 10^4 and C on a,b,c <= 64", bad == 0, f"{bad} disagreements")


def test_distributivity():
    start = time.perf_counter()
    specs = [*distributivity_diagrams(), *distributivity_power_diagrams()]
    reports = [check_diagram(d) for d in specs]
    elapsed = time.perf_counter() - start
    wrong = sum(len(r.disagreements) for r in reports)
    unknown = sum(len(r.inconclusive) for r in reports)
    record(3, "distributivity squares and alpha=2 powers", wrong == unknown == 0 and elapsed < 30,
           f"{len(reports)} diagrams, {wrong} disagreements, {unknown} inconclusive, "
           f"{elapsed:.1f} s, limit 30 s")


def test_coherence():
    # check_diagram raises when the two judgments differ
    specs = coherence_diagrams(m_bound=32, x_bound=8)
    reports = [check_diagram(d) for d in specs]
    failed = [r.name for r in reports if not r.commutes]
    points = sum(len(d.samples) for d in specs)
    record(4, "functor images of dist equal fresh dist for T, G and every M_p", not failed,
           f"{len(reports)} diagrams, {points} points, {len(failed)} failing")


def test_min_coalgebra_square():
    reports = [check_diagram(d) for d in min_square_diagrams()]
    failed = [r.name for r in reports if not r.commutes]
    n = Nat(L00)
    never = Min(Comp(Inr(TOP, n), Id(n)), 1, L00)
    exact = all(Evaluator(fuel=f).run(never, Num(0)) == FuelExhausted(f) for f in (1, 1000, 4321))
    record(5, "coalgebra square for 10 minimizations, exact exhaustion",
           len(reports) == 10 and not failed and exact,
           f"{sum(r.checked for r in reports)} points, {len(failed)} failing squares, "
           f"exhaustion at configured fuel: {exact}")


FUEL = 4000


def _kleene_checks():
    wrong = []
    for name, want in oracles.KLEENE_FAMILY.items():
        f, _ = kleene_family()[name]
        search, safe = kleene_min(f), safe_min(f)
        bounded = {b: safe_min(f, bound=b) for b in (2, 5)}
        ev = Evaluator(fuel=FUEL)
        for x in range(65):
            least = oracles.least_witness(want, x, 128)
            even = oracles.least_witness(lambda x, b: want(x, b) % 2, x, 128)
            got = _run(ev, search, x)
            if least is None:
                ok = isinstance(got, FuelExhausted) or got > 128
            else:
                ok = got == least
            got_safe = _run(ev, safe, x)
            if even is None:
                ok &= isinstance(got_safe, FuelExhausted) or got_safe > 2 * 128 + 1
            else:
                ok &= got_safe == 2 * even + 1
            for b, t in bounded.items():
                small = oracles.least_witness(lambda x, c: want(x, c) % 2, x, b)
                ok &= _run(ev, t, x) == (0 if small is None else 2 * small + 1)
            if not ok:
                wrong.append((name, x))
    return wrong


def _run(ev, t, x):
    out = ev.run(t, point_from_ints(ev.judgment(t).dom, (x,)), normalized=True)
    return out.value.n if isinstance(out, Done) else out


def test_kleene_and_safe_minimization():
    wrong = _kleene_checks()
    record(6, "kleene_min, safe_min and bounded mode against brute force", not wrong,
           f"5 functions, x <= 64, {len(wrong)} wrong")


def _corpus():
    n = Nat(L00)
    m1 = Min(Out(L00), 1, L00)
    f, _ = kleene_family()["bitlen-b"]
    return [
        ("pred", pred(L00), 0),
        ("C", stdlib_entry("C").term, 0),
        ("bitlen", stdlib_entry("bitlen").term, 0),
        ("countdown", m1, 1),
        ("kleene search", kleene_min(f), 1),
        ("safe minimization", safe_min(f), 1),
        ("min after pred", Comp(m1, pred(L00)), 1),
        ("two side by side", Comp(Par(m1, m1), Dup(n)), 1),
        ("nested twice", nested_min(2), 2),
        ("nested three times after succ", Comp(nested_min(3), Succ(2, L00)), 3),
    ]


def test_tier_enforcement():
    three = typecheck(nested_min(3)).mindepth == 3
    try:
        typecheck(nested_min(4))
        four = False
    except TypingError as e:
        four = e.kind == MIN_BUDGET
    corpus = _corpus()
    off = [name for name, t, want in corpus if classify(t) != want]
    record(7, "minimization budget at i=3 and classify corpus",
           three and four and len(corpus) == 10 and not off,
           f"3 nested ok: {three}, 4 nested rejected: {four}, {len(off)} misclassified")


UNSAFE = [N(1, 0), N(1, 2), Tensor(N(0, 0), N(1, 1)), Tensor(TOP, N(1, 0)),
          Coprod(N(1, 0), N(0, 0))]
SAFE = [TOP, N(0, 0), N(0, 2), Tensor(N(0, 0), N(0, 1)),
        Tensor(N(0, 0), Tensor(TOP, N(0, 2)))]


def _srr_verdict(y):
    try:
        typecheck(SRR(Id(y), Id(y), 0))
        return "ok"
    except TypingError as e:
        return e.kind


def test_srr_safety():
    rejected = [_srr_verdict(y) == SAFE_CODOMAIN for y in UNSAFE]
    accepted = [_srr_verdict(y) == "ok" for y in SAFE]
    record(8, "recursion codomains with a normal-tier factor rejected",
           all(rejected) and all(accepted),
           f"{sum(rejected)}/{len(UNSAFE)} rejected, {sum(accepted)}/{len(SAFE)} accepted")


def test_eta_naturality():
    reports = {d.name.split(": ")[1]: check_diagram(d, bound=32) for d in eta_diagrams()}
    needed = ["pred", "C", "mod2paper"]
    ok = all(name in reports and reports[name].commutes for name in needed)
    ok &= all(r.commutes for r in reports.values())
    record(9, "eta naturality for pred, C and a recursion on notation", ok,
           ", ".join(f"{k}: {v.checked} points" for k, v in reports.items()))


# rows of the printed table for i = 3 (columns X^(0), X^(1), X^(2))
PRINTED_I3 = [["1^{2xi}", "X^(1)", "X^(2)"],
              ["X^(0)", "X^(0)", "X^(2)"],
              ["X^(0)", "X^(0)", "X^(2)"]]


def _table_cells(text):
    rows = [[c.strip() for c in ln.strip("|").split("|")][1:] for ln in text.splitlines()[1:]]
    return [[c.rstrip("!") for c in r] for r in rows], [[c.endswith("!") for c in r] for r in rows]


def test_model_equations():
    flags = {}
    passes = True
    for i in (2, 3, 5):
        rep = verify_model_equations(i)
        passes &= rep.passes and not rep.rule_mismatches
        flags[i] = [(p, c) for p, c, _, _ in rep.table_discrepancies]
    expected = {2: [], 3: [(2, 1), (2, 2)], 5: [(4, 3), (4, 4)]}
    shown, marks = _table_cells(format_table(3, paper=True))
    layout = shown == PRINTED_I3
    marked = [(p, c) for p, row in enumerate(marks) for c, m in enumerate(row) if m]
    record(10, "grid model equations for i in {2,3,5}, printed table",
           passes and flags == expected and layout and marked == expected[3],
           f"rule holds: {passes}, flagged cells {flags}, layout matches: {layout}")
