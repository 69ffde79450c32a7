"""Freely reduced words over a free group.

A word is a tuple of nonzero signed letters: letter ``+(i+1)`` is
generator ``i``, ``-(i+1)`` its inverse.  All constructors reduce, so a
``Word`` is always in its unique normal form and tuple equality is group
equality in the free group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    """Cancel adjacent inverse pairs; returns the reduced letter tuple."""
    out: list[int] = []
    for a in letters:
        if a == 0:
            raise ValueError("letter 0 is not allowed")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))

    @staticmethod
    def gen(i: int, sign: int = 1) -> "Word":
        return Word(((i + 1) * (1 if sign >= 0 else -1),))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-a for a in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        w = Word()
        for _ in range(n):
            w = w * self
        return w

    def conj(self, by: "Word") -> "Word":
        """by * self * by^-1"""
        return by * self * by.inverse()

    def commutator(self, other: "Word") -> "Word":
        return self * other * self.inverse() * other.inverse()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def max_generator(self) -> int:
        """Largest generator index used, or -1 for the empty word."""
        return max((abs(a) - 1 for a in self.letters), default=-1)

    def exponent_vector(self, ngens: int) -> list[int]:
        v = [0] * ngens
        for a in self.letters:
            v[abs(a) - 1] += 1 if a > 0 else -1
        return v

    def syllables(self) -> list[tuple[int, int]]:
        """Run-length form [(generator index, exponent), ...]."""
        out: list[tuple[int, int]] = []
        for a in self.letters:
            g = abs(a) - 1
            e = 1 if a > 0 else -1
            if out and out[-1][0] == g:
                out[-1] = (g, out[-1][1] + e)
            else:
                out.append((g, e))
        return [s for s in out if s[1] != 0]

    def format(self, names: list[str] | tuple[str, ...]) -> str:
        if not self.letters:
            return "1"
        parts = []
        for g, e in self.syllables():
            parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Word({list(self.letters)})"


def commutator_decomposition(w: Word) -> list[tuple[Word, Word]]:
    """Write a word with zero exponent sums as a product of commutators.

    Returns pairs (u, v) with w = prod [u, v] in the free group.  Raises
    ValueError if some generator has nonzero exponent sum.
    """
    ng = w.max_generator() + 1
    if any(e != 0 for e in w.exponent_vector(ng)):
        raise ValueError("word is not in the commutator subgroup")
    pairs: list[tuple[Word, Word]] = []
    cur = w
    while cur:
        letters = cur.letters
        a = letters[0]
        # first matching inverse letter; one exists since exponent sums vanish
        j = next(i for i in range(1, len(letters)) if letters[i] == -a)
        x = Word((a,))
        mid = Word(letters[1:j])
        rest = Word(letters[j + 1:])
        # a * mid * a^-1 * rest = [a, mid] * (mid * rest)
        pairs.append((x, mid))
        cur = mid * rest
    return pairs
