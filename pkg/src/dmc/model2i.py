"""The grid model: chains of sets indexed by 2 x i, handled symbolically.

A grid has two rows (the safety index k) and ``i`` columns (the
minimization index p).  Cells are tags: ``1`` (a singleton), ``N`` (the
naturals), a named set, or a formal sum ``1+C`` produced by F^{2x i}.  The
horizontal and vertical arrows between cells are canonical, so they are
derived from the cells rather than stored independently.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .objects import (
    TOP, IndexOutOfRange, LevelIndex, M as MTag, Nat, T as TTag, G as GTag, FunctorTag,
    apply_functor_obj, min_fiber_residue,
)


# -- cells -------------------------------------------------------------------

@dataclass(frozen=True)
class One:
    def __str__(self):
        return "1"


@dataclass(frozen=True)
class NatCell:
    def __str__(self):
        return "N"


@dataclass(frozen=True)
class XCell:
    name: str = "X"

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class SumCell:
    left: "CellTag"
    right: "CellTag"

    def __str__(self):
        return f"{self.left}+{self.right}"


CellTag = One | NatCell | XCell | SumCell
ONE, NAT = One(), NatCell()


def parse_cell(text: str) -> CellTag:
    text = text.strip()
    if "+" in text:
        a, b = text.split("+", 1)
        return SumCell(parse_cell(a), parse_cell(b))
    if text == "1":
        return ONE
    if text == "N":
        return NAT
    if not text.isidentifier():
        raise ValueError(f"bad cell tag {text!r}")
    return XCell(text)


def arrow_tag(a: CellTag, b: CellTag) -> str:
    """The canonical arrow between two cells of a level grid."""
    if a == b:
        return "id"
    if b == ONE:
        return "!"
    if a == ONE:
        return "0"
    if isinstance(a, SumCell) and isinstance(b, SumCell):
        return f"{arrow_tag(a.left, b.left)}+{arrow_tag(a.right, b.right)}"
    return f"{a}->{b}"


# -- grids -------------------------------------------------------------------

@dataclass(frozen=True)
class GridObj:
    cells: tuple[tuple[CellTag, ...], tuple[CellTag, ...]]

    def __post_init__(self):
        if len(self.cells) != 2 or len(self.cells[0]) != len(self.cells[1]) or not self.cells[0]:
            raise ValueError("a grid has exactly two rows of equal, positive length")

    @property
    def width(self) -> int:
        return len(self.cells[0])

    @property
    def horizontal(self) -> tuple[tuple[str, ...], ...]:
        return tuple(tuple(arrow_tag(r[c], r[c + 1]) for c in range(self.width - 1))
                     for r in self.cells)

    @property
    def vertical(self) -> tuple[str, ...]:
        top, bottom = self.cells
        return tuple(arrow_tag(a, b) for a, b in zip(top, bottom))

    def column(self, c: int) -> tuple[CellTag, CellTag]:
        return self.cells[0][c], self.cells[1][c]

    def __str__(self):
        return format_grid(self)


def grid(top, bottom) -> GridObj:
    return GridObj((tuple(top), tuple(bottom)))


def terminal(i: int) -> GridObj:
    return grid([ONE] * i, [ONE] * i)


def format_grid(g: GridObj) -> str:
    """One line per row, cells separated by ``|``."""
    return "\n".join(" | ".join(str(c) for c in row) for row in g.cells)


def parse_grid(text: str) -> GridObj:
    rows = [ln for ln in text.strip().splitlines() if ln.strip()]
    if len(rows) != 2:
        raise ValueError(f"a grid has two rows, got {len(rows)}")
    return GridObj(tuple(tuple(parse_cell(c) for c in r.split("|")) for r in rows))


def levels_of(p: int, q: int, i: int, cell: CellTag = XCell()) -> GridObj:
    """X^{p,q}: ``p`` copies of ``cell`` on top and ``q`` below, then ones."""
    if not (0 <= p <= i and 0 <= q <= i):
        raise IndexOutOfRange(f"levels ({p},{q}) outside a grid of width {i}")
    return grid([cell] * p + [ONE] * (i - p), [cell] * q + [ONE] * (i - q))


def levels_of_nat(p: int, k: int, i: int) -> GridObj:
    """The grid of N_{k,p}: naturals in columns 0..p, on top only when k = 0."""
    if not 0 <= p < i or k not in (0, 1):
        raise IndexOutOfRange(f"index ({k},{p}) out of range for i={i}")
    return levels_of(p + 1, (p + 1) * k, i, NAT)


def grid_of_object(x, i: int) -> GridObj:
    """Grid of Top or a single natural-number object."""
    if x == TOP:
        return terminal(i)
    if isinstance(x, Nat):
        return levels_of_nat(x.ix.p, x.ix.k, i)
    raise ValueError(f"no level grid for {x}")


def row_chain(c: int, i: int, cell: CellTag = XCell()) -> GridObj:
    """X^{(c)} in both rows: ``cell`` in columns 0..c."""
    return levels_of(c + 1, c + 1, i, cell)


# -- functors ----------------------------------------------------------------

def _column_T(top, bottom):
    if isinstance(top, SumCell) and isinstance(bottom, SumCell):
        (lt, lb), (rt, rb) = _column_T(top.left, bottom.left), _column_T(top.right, bottom.right)
        return SumCell(lt, rt), SumCell(lb, rb)
    return (ONE, bottom) if bottom == ONE else (top, bottom)


def _column_G(top, bottom):
    if isinstance(top, SumCell) and isinstance(bottom, SumCell):
        (lt, lb), (rt, rb) = _column_G(top.left, bottom.left), _column_G(top.right, bottom.right)
        return SumCell(lt, rt), SumCell(lb, rb)
    return (top, top) if bottom == ONE else (bottom, bottom)


def _columns(g: GridObj, f) -> GridObj:
    cols = [f(*g.column(c)) for c in range(g.width)]
    return grid([a for a, _ in cols], [b for _, b in cols])


def degeneracy(p: int, i: int) -> list[int]:
    """Source column of each target column under M_p: column p reads column p + 1.

    Column ``i`` stands for the terminal set past the end of the chain.
    """
    return [m + 1 if m == p else m for m in range(i)]


def literal_chain_rule(p: int, i: int) -> list[int]:
    """Source column under the chain display: the (i-p+1)-th term is repeated
    and the (i-p+2)-th dropped; positions outside the chain stay put."""
    r = i - p + 1
    return [r if m == r + 1 and r < i else m for m in range(i)]


def _reindex(g: GridObj, src: list[int]) -> GridObj:
    pick = lambda row, s: row[s] if s < len(row) else ONE
    return grid([pick(g.cells[0], s) for s in src], [pick(g.cells[1], s) for s in src])


def grid_functor(f: FunctorTag, g: GridObj) -> GridObj:
    match f.kind:
        case "T":
            return _columns(g, _column_T)
        case "G":
            return _columns(g, _column_G)
        case "M":
            if not 0 <= f.q < g.width:
                raise IndexOutOfRange(f"M_{f.q} on a grid of width {g.width}")
            return _reindex(g, degeneracy(f.q, g.width))
    raise ValueError(f"unknown functor {f}")


def f2i(g: GridObj) -> GridObj:
    """F^{2 x i}: every cell C becomes 1 + C."""
    return GridObj(tuple(tuple(SumCell(ONE, c) for c in row) for row in g.cells))


# -- arrows ------------------------------------------------------------------

def compose_tags(outer: str, inner: str, cod: CellTag) -> str:
    """``outer`` after ``inner``; any arrow into 1 is the unique one."""
    if cod == ONE:
        return "!"
    parts = [t for t in (outer, inner) if t != "id"]
    return " . ".join(parts) if parts else "id"


@dataclass(frozen=True)
class GridMap:
    source: GridObj
    target: GridObj
    # components[k][p] : source cell -> target cell
    components: tuple[tuple[str, ...], tuple[str, ...]]

    def faces(self):
        """Each naturality square as (cell, path through source, path through target)."""
        s, t = self.source, self.target
        for k in (0, 1):
            for c in range(s.width - 1):
                cod = t.cells[k][c + 1]
                yield ((k, c, "h"),
                       compose_tags(self.components[k][c + 1], s.horizontal[k][c], cod),
                       compose_tags(t.horizontal[k][c], self.components[k][c], cod))
        for c in range(s.width):
            cod = t.cells[1][c]
            yield ((0, c, "v"),
                   compose_tags(self.components[1][c], s.vertical[c], cod),
                   compose_tags(t.vertical[c], self.components[0][c], cod))

    def commutes(self) -> bool:
        return all(a == b for _, a, b in self.faces())


def zero_map(k: int, p: int, i: int) -> GridMap:
    """0_{k,p}: the terminal grid into the grid of N_{k,p}."""
    tgt = levels_of_nat(p, k, i)
    comps = tuple(tuple("0" if c == NAT else "id" for c in row) for row in tgt.cells)
    return GridMap(terminal(i), tgt, comps)


def succ_map(n: int, k: int, p: int, i: int) -> GridMap:
    """s^n_{k,p}: binary successor on the naturals, identity on the ones."""
    g = levels_of_nat(p, k, i)
    comps = tuple(tuple(f"s{n}" if c == NAT else "id" for c in row) for row in g.cells)
    return GridMap(g, g, comps)


# -- the printed table -------------------------------------------------------

def paper_table(i: int) -> dict[tuple[int, int], int | None]:
    """The printed M_p^S table: (p, c) -> index d of the entry X^{(d)}, or None
    for the terminal grid.  Rows 0 and 1 are printed in full, the middle rows
    are elided (filled here by the rule) and the last row is printed."""
    tab = {}
    for p in range(i):
        for c in range(i):
            tab[p, c] = rule_entry(p, c)
    for c in range(i):
        tab[0, c] = None if c == 0 else c
        if i > 1:
            tab[1, c] = 0 if c <= 1 else c
    if i - 1 >= 2:
        last = i - 1
        for c in range(i):
            tab[last, c] = i - 3 if c == i - 2 else (i - 1 if c == i - 1 else c)
    return tab


def rule_entry(p: int, c: int) -> int | None:
    """M_p N_{k,c} by the three-clause rule, as a row index (None = terminal)."""
    if p == c:
        return None if p == 0 else c - 1
    return c


def _entry_name(d: int | None) -> str:
    return "1^{2xi}" if d is None else f"X^({d})"


def format_table(i: int, paper: bool = False) -> str:
    """The M_p^S action table in the layout of the example.

    Cells are computed by the grid functor; with ``paper`` the printed entries
    are shown instead.  Cells where they differ carry a ``!``.
    """
    tab = paper_table(i)
    computed = {}
    for p in range(i):
        for c in range(i):
            out = grid_functor(MTag(p), row_chain(c, i))
            computed[p, c] = None if out == terminal(i) else _chain_index(out)
    header = ["", *[_entry_name(c) for c in range(i)]]
    rows = [header]
    for p in range(i):
        row = [f"M_{p}^S"]
        for c in range(i):
            shown = tab[p, c] if paper else computed[p, c]
            mark = "!" if tab[p, c] != computed[p, c] else ""
            row.append(_entry_name(shown) + mark)
        rows.append(row)
    widths = [max(len(r[j]) for r in rows) for j in range(len(header))]
    return "\n".join("| " + " | ".join(s.ljust(w) for s, w in zip(r, widths)) + " |" for r in rows)


def _chain_index(g: GridObj) -> int:
    top = g.cells[0]
    return max(c for c, cell in enumerate(top) if cell != ONE)


# -- verification ------------------------------------------------------------

@dataclass
class ModelReport:
    i: int
    checked: int = 0
    rule_mismatches: list = field(default_factory=list)
    functor_mismatches: list = field(default_factory=list)
    table_discrepancies: list = field(default_factory=list)
    fiber: list = field(default_factory=list)
    literal_rule_agrees: list = field(default_factory=list)
    cube_failures: list = field(default_factory=list)

    @property
    def passes(self) -> bool:
        fiber_ok = all(g == a for _, g, a in self.fiber)
        return (not self.rule_mismatches and not self.functor_mismatches
                and not self.cube_failures and fiber_ok)

    def to_json(self):
        return {
            "i": self.i, "checked": self.checked, "passes": self.passes,
            "rule_mismatches": self.rule_mismatches,
            "functor_mismatches": self.functor_mismatches,
            "table_discrepancies": [
                {"row": f"M_{p}", "column": f"X^({c})", "printed": _entry_name(pr),
                 "rule": _entry_name(ru)} for p, c, pr, ru in self.table_discrepancies],
            "fiber": [{"object": f"N[{k},{p}]", "grid_in_fiber": g, "rule_in_fiber": a}
                      for (k, p), g, a in self.fiber],
            "literal_rule_agrees": [{"p": p, "agrees": ok} for p, ok in self.literal_rule_agrees],
            "cube_failures": self.cube_failures,
        }

    def __str__(self):
        lines = [f"model equations for i={self.i}: {self.checked} checks, "
                 f"{'pass' if self.passes else 'FAIL'}"]
        for m in self.rule_mismatches + self.functor_mismatches + self.cube_failures:
            lines.append(f"  mismatch: {m}")
        for p, c, pr, ru in self.table_discrepancies:
            lines.append(f"  flagged: printed table row M_{p}, column X^({c}) shows "
                         f"{_entry_name(pr)}; the rule gives {_entry_name(ru)}")
        fib = [f"N[{k},{p}]" for (k, p), g, _ in self.fiber if g]
        lines.append(f"  in the fiber of M_{self.i - 1}...M_0 over the terminal grid: "
                     f"{', '.join(fib) or 'none'} (of {len(self.fiber)} carriers)")
        agree = [str(p) for p, ok in self.literal_rule_agrees if ok]
        lines.append(f"  literal chain rule agrees with the three clauses for p in "
                     f"{{{', '.join(agree)}}}")
        return "\n".join(lines)


def verify_model_equations(i: int) -> ModelReport:
    if i < 1:
        raise ValueError("the grid needs at least one column")
    rep = ModelReport(i)
    nats = [(k, p) for k in (0, 1) for p in range(i)]

    # the three-clause rule for M_p against the grid action
    for k, q in nats:
        for p in range(i):
            rep.checked += 1
            got = grid_functor(MTag(p), levels_of_nat(q, k, i))
            want = grid_of_object(apply_functor_obj(MTag(p), Nat(LevelIndex(k, q))), i)
            if got != want:
                rep.rule_mismatches.append(f"M_{p} N[{k},{q}]: grid {_flat(got)} vs rule {_flat(want)}")

    # T and G on generators, terminal preservation, idempotence
    for k, q in nats:
        g = levels_of_nat(q, k, i)
        for f in (TTag, GTag):
            rep.checked += 1
            want = grid_of_object(apply_functor_obj(f, Nat(LevelIndex(k, q))), i)
            got = grid_functor(f, g)
            if got != want:
                rep.functor_mismatches.append(f"{f} N[{k},{q}]: grid {_flat(got)} vs rule {_flat(want)}")
            if grid_functor(f, got) != got:
                rep.functor_mismatches.append(f"{f} is not idempotent on N[{k},{q}]")
            if grid_functor(f, f2i(g)) != f2i(got):
                rep.functor_mismatches.append(f"{f} does not commute with F on N[{k},{q}]")
    for f in (TTag, GTag, *[MTag(p) for p in range(i)]):
        rep.checked += 1
        if grid_functor(f, terminal(i)) != terminal(i):
            rep.functor_mismatches.append(f"{f} moves the terminal grid")

    # cubes of the zero and successor families
    for k, p in nats:
        for m in (zero_map(k, p, i), succ_map(1, k, p, i), succ_map(2, k, p, i)):
            rep.checked += 1
            if not m.commutes():
                rep.cube_failures.append(f"cube for N[{k},{p}] does not commute")

    # carriers of the terminal coalgebra and the fiber over the terminal grid
    for k, p in nats:
        g = levels_of_nat(p, k, i)
        for q in range(i):
            g = grid_functor(MTag(q), g)
        in_rule = min_fiber_residue(Nat(LevelIndex(k, p)), i) == TOP
        rep.checked += 1
        rep.fiber.append(((k, p), g == terminal(i), in_rule))

    # the printed table
    tab = paper_table(i)
    for p in range(i):
        for c in range(i):
            if tab[p, c] != rule_entry(p, c):
                rep.table_discrepancies.append((p, c, tab[p, c], rule_entry(p, c)))

    # the literal chain rule of the example against the three clauses
    for p in range(i):
        ok = all(
            _reindex(levels_of_nat(q, k, i), literal_chain_rule(p, i))
            == grid_of_object(apply_functor_obj(MTag(p), Nat(LevelIndex(k, q))), i)
            for k, q in nats)
        rep.literal_rule_agrees.append((p, ok))
    return rep


def _flat(g: GridObj) -> str:
    return " / ".join(" ".join(str(c) for c in row) for row in g.cells)


def render(report: ModelReport, as_json: bool = False) -> str:
    return json.dumps(report.to_json()) if as_json else str(report)
