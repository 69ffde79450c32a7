"""Todd-Coxeter coset enumeration (HLT with coincidence handling).

Deterministic: cosets are defined in scan order, relators are scanned in
presentation order, and coincidences always keep the smaller index, so
the same input yields the same table on every run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import config
from .errors import EnumerationOverflow, NotClosed
from .presentation import Presentation
from .words import Word


def _cols(w: Word) -> list[int]:
    # column 2i acts by generator i, column 2i+1 by its inverse
    return [2 * (a - 1) if a > 0 else 2 * (-a - 1) + 1 for a in w.letters]


@dataclass
class CosetAction:
    """A complete, transitive action of a presentation on cosets."""

    presentation: Presentation
    subgroup_words: tuple[Word, ...]
    table: list[list[int]]      # n rows of length 2*ngens, all defined

    @property
    def degree(self) -> int:
        return len(self.table)

    def act(self, coset: int, w: Word) -> int:
        for c in _cols(w):
            coset = self.table[coset][c]
        return coset

    def generator_permutations(self) -> list[list[int]]:
        return [[row[2 * i] for row in self.table]
                for i in range(self.presentation.ngens)]

    def check_closed(self) -> None:
        for row in self.table:
            if any(x is None for x in row):
                raise NotClosed("coset table has undefined entries")


def coset_enumerate(pres: Presentation,
                    subgroup_words: Sequence[Word] = (),
                    max_cosets: int = config.DEFAULT_MAX_COSETS) -> CosetAction:
    """Enumerate cosets of the subgroup generated by ``subgroup_words``.

    Raises EnumerationOverflow if more than ``max_cosets`` cosets are
    needed before the table closes.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    ncols = 2 * pres.ngens
    rels = [_cols(w) for w in pres.relators if w]
    subs = [_cols(w) for w in subgroup_words if w]

    table: list[list[int | None]] = [[None] * ncols]
    p = [0]  # union-find over cosets; rep is always the smallest index

    def rep(k: int) -> int:
        l = k
        while p[l] != l:
            l = p[l]
        while p[k] != l:
            p[k], k = l, p[k]
        return l

    def define(alpha: int, x: int) -> int:
        if len(table) >= max_cosets:
            raise EnumerationOverflow(
                f"more than {max_cosets} cosets required")
        beta = len(table)
        table.append([None] * ncols)
        p.append(beta)
        table[alpha][x] = beta
        table[beta][x ^ 1] = alpha
        return beta

    def merge(k: int, l: int, queue: list[int]) -> None:
        k, l = rep(k), rep(l)
        if k == l:
            return
        if k > l:
            k, l = l, k
        p[l] = k
        queue.append(l)

    def coincidence(alpha: int, beta: int) -> None:
        queue: list[int] = []
        merge(alpha, beta, queue)
        i = 0
        while i < len(queue):
            gamma = queue[i]
            i += 1
            for x in range(ncols):
                delta = table[gamma][x]
                if delta is None:
                    continue
                table[delta][x ^ 1] = None
                mu, nu = rep(gamma), rep(delta)
                if table[mu][x] is not None:
                    merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] is not None:
                    merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def scan_and_fill(alpha: int, w: list[int]) -> None:
        f, i = alpha, 0
        b, j = alpha, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] is not None:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] is not None:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            define(f, w[i])

    for w in subs:
        scan_and_fill(0, w)
    alpha = 0
    while alpha < len(table):
        if rep(alpha) != alpha:
            alpha += 1
            continue
        for w in rels:
            scan_and_fill(alpha, w)
            if rep(alpha) != alpha:
                break
        if rep(alpha) == alpha:
            for x in range(ncols):
                if table[alpha][x] is None:
                    define(alpha, x)
        alpha += 1

    # compress live cosets, renumbering in index order
    live = [k for k in range(len(table)) if rep(k) == k]
    index = {k: i for i, k in enumerate(live)}
    out: list[list[int]] = []
    for k in live:
        row = table[k]
        if any(v is None for v in row):
            raise NotClosed("internal error: incomplete table after closure")
        out.append([index[rep(v)] for v in row])
    return CosetAction(pres, tuple(subgroup_words), out)
