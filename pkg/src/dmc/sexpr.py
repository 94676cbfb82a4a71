"""Minimal s-expression reader that keeps source positions."""
from __future__ import annotations

from dataclasses import dataclass, field


class ParseError(Exception):
    def __init__(self, message, line=None, column=None):
        self.message, self.line, self.column = message, line, column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Atom:
    text: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def __str__(self):
        return "(" + " ".join(map(str, self.items)) + ")"

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    @property
    def head(self):
        if self.items and isinstance(self.items[0], Atom):
            return self.items[0].text
        return None


def read_all(src: str) -> list:
    """Read every top-level form in ``src``; ``;`` starts a line comment."""
    forms, stack = [], []
    line, col, i = 1, 1, 0
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if c in " \t\r":
            i, col = i + 1, col + 1
            continue
        if c == ";":
            while i < n and src[i] != "\n":
                i += 1
            continue
        if c == "(":
            stack.append((line, col, []))
            i, col = i + 1, col + 1
            continue
        if c == ")":
            if not stack:
                raise ParseError("unbalanced ')'", line, col)
            l0, c0, items = stack.pop()
            node = SList(tuple(items), l0, c0)
            (stack[-1][2] if stack else forms).append(node)
            i, col = i + 1, col + 1
            continue
        start, c0 = i, col
        while i < n and src[i] not in " \t\r\n();":
            i, col = i + 1, col + 1
        atom = Atom(src[start:i], line, c0)
        (stack[-1][2] if stack else forms).append(atom)
    if stack:
        l0, c0, _ = stack[-1]
        raise ParseError("unbalanced '(' never closed", l0, c0)
    return forms


def read_one(src: str):
    forms = read_all(src)
    if len(forms) != 1:
        raise ParseError(f"expected exactly one form, found {len(forms)}")
    return forms[0]
