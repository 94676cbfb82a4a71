import pytest

from nesting import nested_min
from dmc.library import kleene_min, kleene_family, pred, prn_extended, stdlib
from dmc.objects import TOP, LevelIndex, N, Nat, Tensor
from dmc.terms import (
    PRN, Bang, Comp, Dup, Id, Inr, LUnit, Min, Out, Par, Proj1, Proj2, SRR, Succ, Zero,
)
from dmc.typecheck import (
    DISABLED, INDEX_RANGE, MIN_BUDGET, MIN_TARGET, MISMATCH, SAFE_CODOMAIN, Judgment,
    TypingError, classify, typecheck,
)

L00, L10 = LevelIndex(0, 0), LevelIndex(1, 0)
N00, N10 = N(0, 0), N(1, 0)


def kind_of(t, **kw):
    with pytest.raises(TypingError) as e:
        typecheck(t, **kw)
    return e.value.kind


def test_pred_judgment():
    assert typecheck(pred(L00)) == Judgment(N00, N00, 0)


@pytest.mark.parametrize("entry", stdlib(), ids=lambda e: e.name)
def test_stdlib_is_min_free(entry):
    assert typecheck(entry.term).mindepth == 0


def test_srr_on_normal_codomain_is_unsafe():
    step = Id(N10)
    t = SRR(Comp(Zero(L10), Bang(TOP)), step, 0)
    assert kind_of(t) == SAFE_CODOMAIN


def test_error_location_points_inside():
    bad = SRR(Comp(Zero(L10), Bang(TOP)), Id(N10), 0)
    with pytest.raises(TypingError) as e:
        typecheck(Comp(Id(N10), bad))
    assert e.value.location == ".g"


def test_composition_mismatch():
    assert kind_of(Comp(Succ(1, L00), Succ(1, L10))) == MISMATCH


def test_index_out_of_range():
    assert kind_of(Zero(LevelIndex(0, 3))) == INDEX_RANGE
    typecheck(Zero(LevelIndex(0, 3)), levels=4)


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_nesting_within_budget(depth):
    j = typecheck(nested_min(depth))
    assert j.mindepth == depth
    assert j.cod == Nat(LevelIndex(0, depth - 1))


def test_nesting_over_budget():
    assert kind_of(nested_min(4)) == MIN_BUDGET
    assert typecheck(nested_min(4), levels=4).mindepth == 4


def test_min_target_must_follow_inner():
    inner = nested_min(1)
    h = Comp(Out(L00), Comp(Proj1(N00, N00), Comp(Par(Id(N00), inner), Dup(N00))))
    assert kind_of(Min(h, 1, L00)) == MIN_TARGET


def test_classify_counts():
    assert classify(pred(L00)) == 0
    assert classify(Min(Out(L00), 1, L00)) == 1
    assert classify(nested_min(2)) == 2
    f, _ = kleene_family()["bitlen-b"]
    assert classify(kleene_min(f)) == 1


def test_prn_gated_by_flag():
    t = PRN(Comp(Zero(L00), Bang(TOP)), _step(), _step(), L00)
    assert kind_of(t) == DISABLED
    assert typecheck(t, extended_prn=True).dom == N00
    assert prn_extended(t.g, t.h1, t.h2, L00, enabled=True) == t


def _step():
    # (y, (*, acc)) -> acc
    return Comp(LUnit(N00), Proj2(N00, Tensor(TOP, N00)))


def test_judgment_json():
    assert typecheck(pred(L00)).to_json() == {"dom": "N[0,0]", "cod": "N[0,0]", "mindepth": 0}


def test_unbounded_and_bounded_min_types():
    n = Nat(L00)
    assert typecheck(Min(Comp(Inr(TOP, n), Id(n)), 1, L00)).cod == n
    bounded = typecheck(Min(Comp(Inr(TOP, n), Id(n)), 1, L00, bound=4))
    assert str(bounded.cod) == "(Top + N[0,0])"
