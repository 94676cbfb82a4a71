import itertools

import pytest

import oracles
from dmc.evaluator import FuelExhausted, run_ints
from dmc.library import (
    bound_minimizations, const, kleene_family, kleene_min, monus1, numeral, point, safe_min,
    stdlib, unary_pred, unary_succ,
)
from dmc.objects import TOP, LevelIndex, Nat, Tensor, summands
from dmc.terms import Bang, Comp, Id, Inr, Min, Mod2
from dmc.typecheck import typecheck

L00, L10 = LevelIndex(0, 0), LevelIndex(1, 0)
N00, N10 = Nat(L00), Nat(L10)

ORACLE = {
    "zero": lambda: 0,
    "proj": lambda a, b, c: b,
    "succ1": oracles.s1,
    "succ2": oracles.s2,
    "pred": oracles.pred,
    "pred1": oracles.pred,
    "Z": lambda b, c, t: b if t == 0 else c,
    "monus1": lambda a: 1 if a == 0 else 0,
    "mod2paper": oracles.flips,
    "mod2": lambda a: a % 2,
    "C": oracles.cond_truth_table,
    "Cpaper": lambda b, c, a: b if oracles.flips(a) == 0 else c,
    "bitlen": oracles.bit_length,
}


def arity(t):
    return len(summands(typecheck(t).dom)[0])


@pytest.mark.parametrize("entry", stdlib(), ids=lambda e: e.name)
def test_stdlib_matches_oracle(entry):
    want = ORACLE[entry.name]
    n = arity(entry.term)
    for args in itertools.product(range(9 if n == 3 else 40), repeat=n):
        assert run_ints(entry.term, *args) == want(*args), args
        assert entry.reference(*args) == want(*args)


def test_unary_steps():
    assert run_ints(unary_succ(L00), 41) == 42
    assert run_ints(unary_pred(L00), 0) == 0
    assert run_ints(unary_pred(L00), 42) == 41


def test_const_and_point():
    assert run_ints(const(9, N00, L00), 4) == 9
    assert run_ints(point(N00, [12])) == 12


@pytest.mark.parametrize("name", sorted(oracles.KLEENE_FAMILY))
def test_kleene_family_terms(name):
    f, ref = kleene_family()[name]
    want = oracles.KLEENE_FAMILY[name]
    for x in range(20):
        for b in range(10):
            # the searched slot N[0,0] sorts first
            assert run_ints(f, b, x) == want(x, b) == ref(x, b)


def test_kleene_min_small():
    f, _ = kleene_family()["bitlen-b"]
    k = kleene_min(f)
    assert run_ints(k, 0) == 0
    assert run_ints(k, 9) == 4
    parity, _ = kleene_family()["parity"]
    assert isinstance(run_ints(kleene_min(parity), 3, fuel=2000), FuelExhausted)


def test_kleene_min_without_witness():
    one = Comp(numeral(1, L00), Bang(Tensor(N10, N00)))
    assert isinstance(run_ints(kleene_min(one), 5, fuel=500), FuelExhausted)


def test_safe_min_examples():
    # h(b) = 1 - (b mod 2): first even value at b = 1
    h = Comp(monus1(0), Mod2(L00))
    assert run_ints(safe_min(h)) == 3
    assert run_ints(safe_min(const(0, N00, L00))) == 1
    assert run_ints(safe_min(const(1, N00, L00), bound=16)) == 0
    assert isinstance(run_ints(safe_min(const(1, N00, L00)), fuel=500), FuelExhausted)


def test_bound_minimizations():
    never = Min(Comp(Inr(TOP, N00), Id(N00)), 1, L00)
    assert isinstance(run_ints(never, 0, fuel=500), FuelExhausted)
    assert run_ints(bound_minimizations(never, 8), 0) == 0
    # the whole safe block yields 0, not s2(0)
    h = const(1, N00, L00)
    assert run_ints(bound_minimizations(safe_min(h), 8)) == 0
    assert run_ints(bound_minimizations(safe_min(const(0, N00, L00)), 8)) == 1
