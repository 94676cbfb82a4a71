import pytest

from dmc.diagrams import (
    DiagramSpec, check_diagram, coherence_diagrams, distributivity_diagrams, enumerate_points,
    eta_diagrams, min_square, min_square_family,
)
from dmc.evaluator import Num
from dmc.library import pred, stdlib_entry
from dmc.objects import TOP, Coprod, LevelIndex, N, Tensor
from dmc.terms import Id, Min, Succ
from dmc.typecheck import TypingError

L00 = LevelIndex(0, 0)


def test_enumerate_points_counts():
    assert len(list(enumerate_points(Coprod(TOP, Tensor(N(0, 0), N(0, 0))), 3))) == 1 + 16


def test_base_case_of_left_square():
    specs = [d for d in distributivity_diagrams(m_bound=1, x_bound=8)
             if "N00" in d.name and "m=1" in d.name]
    assert specs
    for d in specs:
        assert check_diagram(d).commutes


def test_disagreement_is_reported():
    d = DiagramSpec("succ vs id", Succ(2, L00), Succ(1, L00), (Num(0), Num(3)))
    r = check_diagram(d)
    assert not r.commutes and len(r.disagreements) == 2


def test_legs_must_share_judgment():
    with pytest.raises(TypingError):
        check_diagram(DiagramSpec("bad", Id(N(0, 0)), Id(N(1, 0))))


def test_inconclusive_under_low_fuel():
    m = dict(min_square_family())["unary countdown"]
    r = check_diagram(min_square(m, bound=40), fuel=10)
    assert r.inconclusive and not r.disagreements


def test_eta_for_pred():
    by_name = {d.name: d for d in eta_diagrams()}
    (d,) = [d for n, d in by_name.items() if n.endswith(": pred")]
    assert check_diagram(d, bound=32).commutes


def test_coherence_sample():
    ds = coherence_diagrams()
    assert len(ds) == 108
    for d in ds[::9]:
        assert check_diagram(d, bound=4).commutes, d.name


def test_pred_against_itself():
    r = check_diagram(DiagramSpec("pred", pred(L00), pred(L00)), bound=16)
    assert r.checked == 17 and r.commutes


def test_report_json():
    r = check_diagram(DiagramSpec("C", stdlib_entry("C").term, stdlib_entry("C").term), bound=2)
    assert r.to_json()["checked"] == 27


def test_min_family_size():
    fam = min_square_family()
    assert len(fam) == 10 and all(isinstance(m, Min) for _, m in fam)
