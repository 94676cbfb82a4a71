"""Command-line front end for ``.dmc`` program files.

A program is a sequence of forms::

    (def NAME (arrow DOM COD) TERM)
    (check NAME)
    (run NAME ARG ...)

Earlier definitions may be referenced by name and are inlined.  Besides the
core term grammar, terms may use ``(numeral M (K P))``, ``(lib NAME [P])``,
``(dist P X Y [K])``, ``(kleene F)`` and ``(safe-min H [B])``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import diagrams, model2i
from .evaluator import (
    DEFAULT_FUEL, Done, Evaluator, FuelExhausted, InlV, InrV, Num, Pair, STAR, coerce, inhabits,
    point_from_ints, value_json,
)
from .library import (
    bound_minimizations, dist, kleene_min, numeral, safe_min, stdlib_entry,
)
from .objects import DEFAULT_LEVELS, normalize_object
from .sexpr import Atom, ParseError, SList, read_all
from .terms import DisabledExtension, Term, from_sexpr, obj_sexpr, parse_ix, parse_obj_sexpr, to_sexpr
from .typecheck import Checker, MISMATCH, TypingError, describe_level

EXIT_OK, EXIT_ERROR, EXIT_FUEL = 0, 1, 2


# -- program files -----------------------------------------------------------

@dataclass(frozen=True)
class Definition:
    name: str
    dom: object
    cod: object
    term: Term


@dataclass(frozen=True)
class Directive:
    kind: str  # "run" or "check"
    name: str
    args: tuple = ()


@dataclass
class ProgramFile:
    definitions: list[Definition] = field(default_factory=list)
    directives: list[Directive] = field(default_factory=list)

    def lookup(self, name: str) -> Definition:
        for d in self.definitions:
            if d.name == name:
                return d
        raise KeyError(name)

    def __str__(self):
        lines = [f"(def {d.name} (arrow {obj_sexpr(d.dom)} {obj_sexpr(d.cod)})\n  {to_sexpr(d.term)})"
                 for d in self.definitions]
        for r in self.directives:
            lines.append(f"({r.kind} {' '.join([r.name, *r.args])})")
        return "\n".join(lines) + "\n"


def _int(node):
    try:
        return int(node.text)
    except (AttributeError, ValueError):
        raise ParseError(f"expected an integer, got {node}", node.line, node.column) from None


def _expand(node: SList, rec):
    head, args = node.head, node.items[1:]
    match head:
        case "numeral" if len(args) == 2:
            return numeral(_int(args[0]), parse_ix(args[1]), levels=10**6)
        case "lib" if len(args) in (1, 2) and isinstance(args[0], Atom):
            p = _int(args[1]) if len(args) == 2 else 0
            try:
                return stdlib_entry(args[0].text, p).term
            except KeyError:
                raise ParseError(f"unknown library entry {args[0].text!r}",
                                 node.line, node.column) from None
        case "dist" if len(args) in (3, 4):
            k = _int(args[3]) if len(args) == 4 else 1
            return dist(_int(args[0]), parse_obj_sexpr(args[1]), parse_obj_sexpr(args[2]), k,
                        levels=10**6)
        case "kleene" if len(args) == 1:
            return kleene_min(rec(args[0]))
        case "safe-min" if len(args) in (1, 2):
            return safe_min(rec(args[0]), _int(args[1]) if len(args) == 2 else None)
    return None


def parse_program(src: str) -> ProgramFile:
    prog = ProgramFile()
    env: dict[str, Term] = {}
    for form in read_all(src):
        if not isinstance(form, SList) or not isinstance(form.head, str):
            raise ParseError(f"expected a def, run or check form, got {form}",
                             form.line, form.column)
        args = form.items[1:]
        match form.head:
            case "def":
                if len(args) != 3 or not isinstance(args[0], Atom):
                    raise ParseError("def needs a name, a type and a term", form.line, form.column)
                name = args[0].text
                if name in env:
                    raise ParseError(f"duplicate definition {name!r}", form.line, form.column)
                ty = args[1]
                if not (isinstance(ty, SList) and ty.head == "arrow" and len(ty) == 3):
                    raise ParseError("type must be (arrow DOM COD)", ty.line, ty.column)
                dom, cod = parse_obj_sexpr(ty[1]), parse_obj_sexpr(ty[2])
                try:
                    term = from_sexpr(args[2], env, _expand)
                except ValueError as e:
                    raise ParseError(str(e), args[2].line, args[2].column) from None
                env[name] = term
                prog.definitions.append(Definition(name, dom, cod, term))
            case "run" | "check":
                if not args or not isinstance(args[0], Atom):
                    raise ParseError(f"{form.head} needs a definition name", form.line, form.column)
                if args[0].text not in env:
                    raise ParseError(f"unknown name {args[0].text!r}", form.line, form.column)
                if form.head == "check" and len(args) != 1:
                    raise ParseError("check takes one name", form.line, form.column)
                prog.directives.append(Directive(form.head, args[0].text,
                                                 tuple(str(a) for a in args[1:])))
            case _:
                raise ParseError(f"unknown form {form.head!r}", form.line, form.column)
    return prog


def read_program(path: str) -> ProgramFile:
    with open(path, encoding="utf-8") as fh:
        return parse_program(fh.read())


# -- configuration -----------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    levels: int = DEFAULT_LEVELS
    fuel: int = DEFAULT_FUEL
    extended_prn: bool = False
    search_bound: int | None = None
    samples_bound: int = diagrams.DEFAULT_SAMPLE_BOUND
    output: str = "text"

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError("levels must be at least 1")
        if self.fuel < 1:
            raise ValueError("fuel must be at least 1")


def _env_int(name, default):
    v = os.environ.get(name)
    return default if v in (None, "") else int(v)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--levels", "-i", type=int, default=_env_int("DMC_LEVELS", DEFAULT_LEVELS),
                        help="hierarchy parameter i (default 3, env DMC_LEVELS)")
    common.add_argument("--fuel", type=int, default=_env_int("DMC_FUEL", DEFAULT_FUEL),
                        help="evaluation fuel (default 10^6, env DMC_FUEL)")
    common.add_argument("--extended-prn", action="store_true",
                        default=os.environ.get("DMC_EXTENDED_PRN", "") not in ("", "0"),
                        help="allow the two-branch recursion on notation")
    common.add_argument("--bound", type=int, default=_env_int("DMC_BOUND", None),
                        help="search bound for minimizations (changes semantics; env DMC_BOUND)")
    common.add_argument("--samples", type=int,
                        default=_env_int("DMC_SAMPLES", diagrams.DEFAULT_SAMPLE_BOUND),
                        help="largest number per slot in diagram samples")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    ap = argparse.ArgumentParser(prog="dmc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common], help="typecheck every definition")
    p.add_argument("file")
    p = sub.add_parser("run", parents=[common], help="evaluate a definition")
    p.add_argument("file")
    p.add_argument("name", nargs="?", help="definition to run; omit to run the file's run forms")
    p.add_argument("args", nargs="*", help="integers in normalized factor order, or one value")
    p.add_argument("--trace", action="store_true", help="print one line per fuel step to stderr")
    p = sub.add_parser("classify", parents=[common], help="print the hierarchy level")
    p.add_argument("file")
    p.add_argument("name")
    p = sub.add_parser("verify-diagrams", parents=[common], help="run the diagram suites")
    p.add_argument("--suite", action="append",
                   choices=["distributivity", "powers", "coherence", "eta", "min"],
                   help="restrict to some suites (repeatable)")
    p = sub.add_parser("verify-model", parents=[common], help="check the grid model")
    p = sub.add_parser("table", parents=[common], help="print the M_p action table")
    p.add_argument("--paper", action="store_true", help="show the printed entries")
    return ap


# -- values on the command line ---------------------------------------------

def parse_value(node):
    """``*``, integers, ``(pair a b)``, ``(inl v)`` and ``(inr v)``."""
    if isinstance(node, Atom):
        if node.text == "*":
            return STAR
        return Num(_int(node))
    match node.head, len(node):
        case "pair", 3:
            return Pair(parse_value(node[1]), parse_value(node[2]))
        case "inl", 2:
            return InlV(parse_value(node[1]))
        case "inr", 2:
            return InrV(parse_value(node[1]))
    raise ParseError(f"malformed value {node}", node.line, node.column)


def _input_value(dom, args):
    if all(a.lstrip("-").isdigit() for a in args):
        nums = [int(a) for a in args]
        if any(n < 0 for n in nums):
            raise ValueError("arguments must be non-negative")
        return point_from_ints(dom, nums)
    forms = read_all(" ".join(args))
    if len(forms) != 1:
        raise ValueError("give either integers or a single value")
    return parse_value(forms[0])


# -- commands ----------------------------------------------------------------

def _emit(out, cfg: RunConfig, text: str, payload):
    print(json.dumps(payload) if cfg.output == "json" else text, file=out)


def _error(cfg, err, out) -> int:
    if isinstance(err, TypingError):
        payload, text = err.to_json(), f"error: {err}"
    elif isinstance(err, ParseError):
        payload = {"error": "ParseError", "line": err.line, "column": err.column,
                   "detail": err.message}
        text = f"error: {err}"
    else:
        payload, text = {"error": type(err).__name__, "detail": str(err)}, f"error: {err}"
    _emit(out, cfg, text, payload)
    return EXIT_ERROR


def _checked(prog: ProgramFile, cfg: RunConfig, name: str):
    d = prog.lookup(name)
    j = Checker(cfg.levels, cfg.extended_prn).judgment(d.term)
    want_dom, want_cod = normalize_object(d.dom), normalize_object(d.cod)
    if (j.dom, j.cod) != (want_dom, want_cod):
        raise TypingError(MISMATCH, ".", f"{name} is declared {want_dom} -> {want_cod} "
                                         f"but has {j.dom} -> {j.cod}")
    return d, j


def cmd_check(prog, cfg, out) -> int:
    results = []
    for d in prog.definitions:
        _, j = _checked(prog, cfg, d.name)
        results.append({"name": d.name, **j.to_json()})
        if cfg.output != "json":
            print(f"{d.name} : {j}", file=out)
    if cfg.output == "json":
        print(json.dumps(results), file=out)
    return EXIT_OK


def run_one(prog, cfg, name, args, out, trace=None) -> int:
    d, j = _checked(prog, cfg, name)
    term = d.term if cfg.search_bound is None else bound_minimizations(d.term, cfg.search_bound)
    v = _input_value(j.dom, list(args))
    if not inhabits(v, j.dom) and inhabits(v, d.dom):
        # a value written in the declared shape
        v = coerce(v, d.dom, j.dom)
    ev = Evaluator(cfg.levels, cfg.fuel, cfg.extended_prn, trace)
    outcome = ev.run(term, v, normalized=True)
    match outcome:
        case Done(w):
            _emit(out, cfg, str(w), {"done": value_json(w)})
            return EXIT_OK
        case FuelExhausted(steps):
            _emit(out, cfg, f"fuel exhausted after {steps} steps", {"fuel_exhausted": steps})
            return EXIT_FUEL


def cmd_run(prog, cfg, name, args, out, trace=None) -> int:
    if name is not None:
        return run_one(prog, cfg, name, args, out, trace)
    code = EXIT_OK
    for r in prog.directives:
        if r.kind == "check":
            _, j = _checked(prog, cfg, r.name)
            _emit(out, cfg, f"{r.name} : {j}", {"name": r.name, **j.to_json()})
        else:
            code = max(code, run_one(prog, cfg, r.name, r.args, out, trace))
    return code


def cmd_classify(prog, cfg, name, out) -> int:
    _, j = _checked(prog, cfg, name)
    _emit(out, cfg, describe_level(j.mindepth), {"name": name, "level": j.mindepth})
    return EXIT_OK


def diagram_suites(cfg: RunConfig, only=None):
    levels, b = cfg.levels, cfg.samples_bound
    suites = {
        "distributivity": lambda: diagrams.distributivity_diagrams(levels=levels),
        "powers": lambda: diagrams.distributivity_power_diagrams(levels=levels),
        "coherence": lambda: diagrams.coherence_diagrams(levels),
        "eta": lambda: diagrams.eta_diagrams(levels=levels),
        "min": lambda: diagrams.min_square_diagrams(levels),
    }
    bounds = {"distributivity": 8, "powers": 8, "coherence": 8, "eta": b, "min": 64}
    for name, make in suites.items():
        if only and name not in only:
            continue
        yield name, make(), bounds[name]


def cmd_verify_diagrams(cfg, only, out) -> int:
    summary, ok = [], True
    for name, specs, bound in diagram_suites(cfg, only):
        reports = [diagrams.check_diagram(d, fuel=cfg.fuel, levels=cfg.levels, bound=bound)
                   for d in specs]
        failed = [r for r in reports if not r.commutes]
        ok &= not failed
        summary.append({"suite": name, "diagrams": len(reports),
                        "points": sum(r.checked for r in reports),
                        "failed": [r.to_json() for r in failed]})
        if cfg.output != "json":
            print(f"{'ok' if not failed else 'FAIL':4} {name}: {len(reports)} diagrams, "
                  f"{summary[-1]['points']} points, {len(failed)} failing", file=out)
            for r in failed:
                print(f"     {r}", file=out)
    if cfg.output == "json":
        print(json.dumps(summary), file=out)
    return EXIT_OK if ok else EXIT_ERROR


def cmd_verify_model(cfg, out) -> int:
    rep = model2i.verify_model_equations(cfg.levels)
    print(model2i.render(rep, cfg.output == "json"), file=out)
    return EXIT_OK if rep.passes else EXIT_ERROR


def cmd_table(cfg, paper, out) -> int:
    if cfg.output == "json":
        tab = model2i.paper_table(cfg.levels)
        print(json.dumps([{"row": p, "column": c, "printed": d, "rule": model2i.rule_entry(p, c)}
                          for (p, c), d in sorted(tab.items())]), file=out)
    else:
        print(model2i.format_table(cfg.levels, paper), file=out)
    return EXIT_OK


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ns = _build_parser().parse_args(argv)
    try:
        cfg = RunConfig(ns.levels, ns.fuel, ns.extended_prn, ns.bound, ns.samples,
                        "json" if ns.json else "text")
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    try:
        match ns.command:
            case "verify-diagrams":
                return cmd_verify_diagrams(cfg, ns.suite, out)
            case "verify-model":
                return cmd_verify_model(cfg, out)
            case "table":
                return cmd_table(cfg, ns.paper, out)
        prog = read_program(ns.file)
        match ns.command:
            case "check":
                return cmd_check(prog, cfg, out)
            case "run":
                trace = (lambda line: print(line, file=sys.stderr)) if ns.trace else None
                return cmd_run(prog, cfg, ns.name, ns.args, out, trace)
            case "classify":
                return cmd_classify(prog, cfg, ns.name, out)
    except (TypingError, ParseError, DisabledExtension, ValueError, KeyError, OSError) as e:
        return _error(cfg, e, out)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
