"""Minimizations nested to a chosen depth, for tier tests."""
from dmc.objects import LevelIndex, Nat
from dmc.terms import Comp, Dup, Id, Min, Out, Par, Proj1

N00 = Nat(LevelIndex(0, 0))


def nested_min(depth):
    """Countdown minimization whose coalgebra also runs (and discards) a
    minimization nested ``depth - 1`` deep; its target is (0, depth - 1)."""
    m = Min(Out(LevelIndex(0, 0)), 1, LevelIndex(0, 0))
    for j in range(1, depth):
        inner_cod = Nat(LevelIndex(0, j - 1))
        h = Comp(Out(LevelIndex(0, 0)),
                 Comp(Proj1(N00, inner_cod), Comp(Par(Id(N00), m), Dup(N00))))
        m = Min(h, 1, LevelIndex(0, j))
    return m
