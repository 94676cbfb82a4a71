import pytest
from hypothesis import given, strategies as st

from dmc.objects import (
    TOP, Coprod, G, LevelIndex, M, N, Tensor, T, Top, apply_functor_obj, in_fiber_T_over_top,
    min_fiber_residue, normalize_object, parse_object, same_object, summands, validate_object,
)

N00, N01, N02, N10 = N(0, 0), N(0, 1), N(0, 2), N(1, 0)


def objects(levels=3):
    nat = st.builds(N, st.integers(0, 1), st.integers(0, levels - 1))
    leaf = st.one_of(st.just(TOP), nat)
    return st.recursive(leaf, lambda kids: st.one_of(
        st.builds(Tensor, kids, kids), st.builds(Coprod, kids, kids)), max_leaves=6)


def test_unit_law():
    assert normalize_object(Tensor(TOP, N01)) == N01


def test_tensor_distributes_over_coproduct():
    x = Tensor(Coprod(N00, N10), N01)
    # factors inside each summand are sorted, so N[0,1] precedes N[1,0]
    assert normalize_object(x) == Coprod(Tensor(N00, N01), Tensor(N01, N10))


def test_factors_sorted_by_index():
    assert normalize_object(Tensor(N10, N00)) == Tensor(N00, N10)


def test_coproduct_order_preserved():
    assert normalize_object(Coprod(N10, N00)) == Coprod(N10, N00)
    assert not same_object(Coprod(N10, N00), Coprod(N00, N10))


def test_summands_of_product_of_sums():
    x = Tensor(Coprod(TOP, N00), Coprod(N10, TOP))
    ix = lambda t: tuple(f.ix for f in t)
    assert summands(x) == (ix([N10]), (), ix([N00, N10]), ix([N00]))


@pytest.mark.parametrize("f, x, want", [
    (T, N(0, 2), TOP),
    (T, N(1, 2), N(1, 2)),
    (G, N(0, 1), N(1, 1)),
    (M(0), N10, TOP),
    (M(0), N00, TOP),
    (M(2), N02, N01),
    (M(2), N01, N01),
    (M(1), N(1, 1), N(1, 0)),
])
def test_functors_on_generators(f, x, want):
    assert apply_functor_obj(f, x) == want


def test_T_over_top_fiber():
    assert in_fiber_T_over_top(Tensor(N00, N02))
    assert in_fiber_T_over_top(TOP)
    assert not in_fiber_T_over_top(N10)
    assert not in_fiber_T_over_top(Tensor(N00, N(1, 2)))


def test_min_fiber_residue():
    assert min_fiber_residue(N00, 3) == TOP
    assert min_fiber_residue(N02, 3) == N01
    assert min_fiber_residue(TOP, 3) == TOP


def test_validate_rejects_out_of_range():
    with pytest.raises(ValueError):
        validate_object(N(0, 3), 3)
    with pytest.raises(ValueError):
        validate_object(N(2, 0), 3)
    validate_object(N(1, 2), 3)


def test_level_index_ordering():
    assert LevelIndex(0, 2) < LevelIndex(1, 0)


def test_parse_round_trip():
    x = Tensor(Coprod(N00, TOP), N(1, 2))
    assert parse_object(str(x)) == x
    assert isinstance(parse_object("Top"), Top)


@given(objects())
def test_normalize_idempotent(x):
    n = normalize_object(x)
    assert normalize_object(n) == n


@given(objects(), st.sampled_from([T, G, M(0), M(1), M(2)]))
def test_functors_commute_with_normalization(x, f):
    a = normalize_object(apply_functor_obj(f, x))
    b = normalize_object(apply_functor_obj(f, normalize_object(x)))
    assert a == b


@given(objects(), objects())
def test_tensor_symmetric_up_to_iso(x, y):
    # summand multisets agree; the coproduct order may differ
    a = sorted(map(str, summands(Tensor(x, y))))
    b = sorted(map(str, summands(Tensor(y, x))))
    assert a == b
