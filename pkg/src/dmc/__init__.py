"""Typechecked combinator calculus for tiered safe recursion with bounded minimization."""
from .objects import (
    TOP, Coprod, FunctorTag, G, LevelIndex, M, N, Nat, T, Tensor, Top, apply_functor_obj,
    normalize_object, parse_object,
)
from .terms import apply_functor_term, parse_term, to_sexpr
from .typecheck import Judgment, TypingError, classify, typecheck
from .evaluator import Done, FuelExhausted, evaluate, run_ints
from .library import kleene_min, numeral, safe_min, stdlib

__all__ = [
    "TOP", "Coprod", "FunctorTag", "G", "LevelIndex", "M", "N", "Nat", "T", "Tensor", "Top",
    "apply_functor_obj", "normalize_object", "parse_object", "apply_functor_term", "parse_term",
    "to_sexpr", "Judgment", "TypingError", "classify", "typecheck", "Done", "FuelExhausted",
    "evaluate", "run_ints", "kleene_min", "numeral", "safe_min", "stdlib",
]
