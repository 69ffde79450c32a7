"""Finite presentations and the `.grp` text format.

Format::

    group <name>
    gens a b
    rel a^2
    rel (a b)^3
    rel [a,b]

A word is a whitespace-separated product of factors; a factor is an
identifier, ``id^int``, ``( word )^int`` or the commutator sugar
``[x,y]`` = ``x y x^-1 y^-1`` (x, y may themselves be words).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError
from .words import Word

_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|\^-?\d+|[()\[\],]|\S")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    name: str = "G"

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ParseError("duplicate generator names")
        for r in self.relators:
            if r.max_generator() >= len(self.generators):
                raise ParseError(
                    f"relator {r!r} uses a generator index out of range")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def parse_word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def format(self) -> str:
        lines = [f"group {self.name}", "gens " + " ".join(self.generators)]
        for r in self.relators:
            lines.append("rel " + r.format(self.generators))
        return "\n".join(lines) + "\n"


class _Parser:
    def __init__(self, tokens: list[str], gens: dict[str, int]):
        self.toks = tokens
        self.pos = 0
        self.gens = gens

    def peek(self) -> str | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of word")
        self.pos += 1
        return tok

    def word(self, stop: tuple[str, ...] = ()) -> Word:
        w = Word()
        while self.peek() is not None and self.peek() not in stop:
            w = w * self.factor()
        return w

    def factor(self) -> Word:
        tok = self.next()
        if tok == "(":
            inner = self.word(stop=(")",))
            if self.next() != ")":
                raise ParseError("expected ')'")
            return inner ** self._exponent()
        if tok == "[":
            x = self.word(stop=(",",))
            if self.next() != ",":
                raise ParseError("expected ',' in commutator")
            y = self.word(stop=("]",))
            if self.next() != "]":
                raise ParseError("expected ']'")
            return (x.commutator(y)) ** self._exponent()
        if _IDENT.match(tok):
            if tok not in self.gens:
                raise ParseError(f"unknown generator {tok!r}")
            return Word.gen(self.gens[tok]) ** self._exponent()
        raise ParseError(f"unexpected token {tok!r}")

    def _exponent(self) -> int:
        tok = self.peek()
        if tok is not None and tok.startswith("^"):
            self.next()
            return int(tok[1:])
        return 1


def parse_word(text: str, generators: tuple[str, ...] | list[str]) -> Word:
    gens = {g: i for i, g in enumerate(generators)}
    parser = _Parser(_TOKEN.findall(text), gens)
    w = parser.word()
    if parser.peek() is not None:
        raise ParseError(f"trailing tokens in word: {text!r}")
    return w


def parse_presentation(text: str) -> Presentation:
    name = "G"
    gens: tuple[str, ...] | None = None
    relators: list[Word] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "group":
            name = rest or "G"
        elif head == "gens":
            if gens is not None:
                raise ParseError(f"line {lineno}: duplicate gens line")
            gens = tuple(rest.split())
            for g in gens:
                if not _IDENT.match(g):
                    raise ParseError(f"line {lineno}: bad generator name {g!r}")
        elif head == "rel":
            if gens is None:
                raise ParseError(f"line {lineno}: rel before gens")
            relators.append(parse_word(rest, gens))
        else:
            raise ParseError(f"line {lineno}: unknown directive {head!r}")
    if gens is None:
        raise ParseError("missing gens line")
    return Presentation(gens, tuple(relators), name=name)


def load_presentation(path) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())
