"""Schreier transversals, subgroup presentations, and the relation module.

Given a finite presentation F/R and its regular coset table, the
Reidemeister-Schreier rewriting presents R on Schreier generators.  The
relation module R/[F,R] then yields the Schur multiplier by the Hopf
formula: H2 = (R n [F,F]) / [F,R] is the torsion of R/[F,R], realized
here as ker(exponent map) modulo the conjugation-difference lattice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .coset import CosetAction, coset_enumerate
from .errors import StablabError
from .intmat import AbelianGroup, SmithForm, cokernel, mat_mul, smith_normal_form
from .presentation import Presentation
from .words import Word


def abelianization(p: Presentation) -> AbelianGroup:
    """Cokernel of the relator-exponent matrix."""
    n = p.ngens
    cols = [r.exponent_vector(n) for r in p.relators]
    matrix = [[c[i] for c in cols] for i in range(n)]
    return cokernel(matrix, n)


@dataclass
class SchreierData:
    """Transversal and Schreier generators for a transitive coset action."""

    action: CosetAction
    transversal: list[Word]                 # shortlex tree words per coset
    tree_edges: set[tuple[int, int]]        # (coset, column) pairs in the tree
    gen_pairs: list[tuple[int, int]]        # (coset, generator) non-tree pairs
    gen_index: dict[tuple[int, int], int]
    gen_words: list[Word]                   # Schreier generator words in F

    @property
    def rank(self) -> int:
        return len(self.gen_pairs)

    def rewrite(self, w: Word, start: int = 0) -> Word:
        """Rewrite a subgroup word as a word in the Schreier generators.

        The letters of the result index ``gen_pairs``; tree pairs are
        dropped (they rewrite to the identity).
        """
        tbl = self.action.table
        out: list[int] = []
        gamma = start
        for a in w.letters:
            g = abs(a) - 1
            if a > 0:
                pair = (gamma, g)
                gamma = tbl[gamma][2 * g]
                if pair not in self.tree_edges:
                    out.append(self.gen_index[pair] + 1)
            else:
                gamma = tbl[gamma][2 * g + 1]
                pair = (gamma, g)
                if pair not in self.tree_edges:
                    out.append(-(self.gen_index[pair] + 1))
        return Word(tuple(out))

    def rewrite_exponents(self, w: Word, start: int = 0) -> list[int]:
        return self.rewrite(w, start).exponent_vector(self.rank)


def schreier_data(action: CosetAction) -> SchreierData:
    tbl = action.table
    n = action.presentation.ngens
    transversal: dict[int, Word] = {0: Word()}
    tree: set[tuple[int, int]] = set()
    frontier = [0]
    while frontier:
        nxt = []
        for gamma in frontier:
            for c in range(2 * n):
                delta = tbl[gamma][c]
                if delta not in transversal:
                    g = c // 2
                    sign = 1 if c % 2 == 0 else -1
                    transversal[delta] = transversal[gamma] * Word.gen(g, sign)
                    # record the tree edge in positive orientation
                    if sign == 1:
                        tree.add((gamma, g))
                    else:
                        tree.add((delta, g))
                    nxt.append(delta)
        frontier = nxt
    if len(transversal) != action.degree:
        raise StablabError("coset action is not transitive")
    pairs = []
    index = {}
    words = []
    for gamma in range(action.degree):
        for g in range(n):
            if (gamma, g) in tree:
                continue
            delta = tbl[gamma][2 * g]
            index[(gamma, g)] = len(pairs)
            pairs.append((gamma, g))
            words.append(transversal[gamma] * Word.gen(g)
                         * transversal[delta].inverse())
    return SchreierData(action, [transversal[i] for i in range(action.degree)],
                        tree, pairs, index, words)


def reidemeister_schreier(p: Presentation, action: CosetAction,
                          name: str | None = None) -> Presentation:
    """Presentation of the subgroup defining a transitive coset action."""
    data = schreier_data(action)
    names = tuple(f"x{g}_{gamma}" for gamma, g in data.gen_pairs)
    relators = []
    seen = set()
    for gamma in range(action.degree):
        for r in p.relators:
            w = data.rewrite(r, start=gamma)
            if w and w.letters not in seen:
                seen.add(w.letters)
                seen.add(w.inverse().letters)
                relators.append(w)
    return Presentation(names, tuple(relators),
                        name=name or f"{p.name}-sub{action.degree}")


@dataclass
class RelationModule:
    """Hopf-formula data for a finite presentation.

    ``h2`` is (R n [F,F]) / [F,R] with explicit coordinates; each
    invariant factor comes with a representative word in F (a product of
    Schreier generators lying in R n [F,F]).
    """

    presentation: Presentation
    action: CosetAction
    schreier: SchreierData
    h2: AbelianGroup
    rep_words: list[Word]
    _exp_smith: SmithForm = field(repr=False)
    _coker_smith: SmithForm = field(repr=False)
    _kept: list[int] = field(repr=False)
    _full_smith: SmithForm = field(repr=False)
    _conj_cols: list[list[int]] = field(repr=False)

    def h2_coords(self, w: Word) -> tuple[int, ...]:
        """Coordinates in h2 of a word lying in R n [F,F]."""
        n = self.presentation.ngens
        if any(w.exponent_vector(n)):
            raise StablabError("word is not in [F,F]")
        vec = self.schreier.rewrite_exponents(w)
        sf = self._exp_smith
        k = self.schreier.rank
        y = [sum(sf.right_inv[i][j] * vec[j] for j in range(k))
             for i in range(k)]
        r = sf.rank
        if any(y[:r]):
            raise StablabError("word is not in R n [F,F]")
        z = y[r:]
        L = self._coker_smith.left
        full = [sum(L[i][j] * z[j] for j in range(len(z)))
                for i in range(len(z))]
        fs = self.h2.invariant_factors
        return tuple(full[i] % f for i, f in zip(self._kept, fs))


def relation_module(p: Presentation,
                    action: CosetAction | None = None) -> RelationModule:
    if action is None:
        action = coset_enumerate(p)
    data = schreier_data(action)
    n = p.ngens
    k = data.rank
    # exponent map Z^k -> Z^n on Schreier generators
    E = [[w.exponent_vector(n)[i] for w in data.gen_words] for i in range(n)]
    # [F,R]-lattice: columns rewrite(f s f^-1) - e_s over f in S and S^-1
    conj_cols: list[list[int]] = []
    for g in range(n):
        for sign in (1, -1):
            f = Word.gen(g, sign)
            finv = f.inverse()
            for j, s in enumerate(data.gen_words):
                col = data.rewrite_exponents(f * s * finv)
                col[j] -= 1
                if any(col):
                    conj_cols.append(col)
    sfE = smith_normal_form(E) if k else smith_normal_form([[0]])
    r = sfE.rank
    # kernel coordinates: columns r.. of the right transform
    M2 = []
    for col in conj_cols:
        y = [sum(sfE.right_inv[i][j] * col[j] for j in range(k))
             for i in range(k)]
        if any(y[:r]):
            raise StablabError("conjugation column escapes ker(exponent)")
        M2.append(y[r:])
    dim = k - r
    matrix = [[c[i] for c in M2] for i in range(dim)] if M2 else \
        [[0] for _ in range(dim)]
    if dim == 0:
        sfC = smith_normal_form([[0]])
        kept: list[int] = []
        factors: list[int] = []
    else:
        sfC = smith_normal_form(matrix)
        diag = sfC.diag + [0] * (dim - len(sfC.diag))
        if any(d == 0 for d in diag):
            raise StablabError("relation module has infinite torsion part")
        kept = [i for i, d in enumerate(diag) if d != 1]
        factors = [diag[i] for i in kept]
    h2 = AbelianGroup(tuple(factors))
    # representative words: preimages of the kept coordinate basis vectors
    reps = []
    KB = [[sfE.right[i][r + j] for j in range(dim)] for i in range(k)]
    for pos in kept:
        z = [sfC.left_inv[i][pos] for i in range(dim)]
        v = [sum(KB[i][j] * z[j] for j in range(dim)) for i in range(k)]
        w = Word()
        for j, e in enumerate(v):
            if e:
                w = w * (data.gen_words[j] ** e)
        reps.append(w)
    # full relation-module quotient, for covering construction
    full_matrix = [[c[i] for c in conj_cols] for i in range(k)] \
        if conj_cols else [[0] for _ in range(k)]
    sfF = smith_normal_form(full_matrix)
    return RelationModule(p, action, data, h2, reps, sfE, sfC, kept, sfF,
                          conj_cols)


def schur_multiplier(p: Presentation, g=None) -> AbelianGroup:
    """H2 of the group presented by p, via the Hopf formula."""
    if g is not None and g.presentation is not None \
            and g.presentation is not p:
        pass  # g is informational; the computation runs on p
    return relation_module(p).h2


def covering_presentation(rm: RelationModule) -> tuple[Presentation, list[Word]]:
    """Presentation of a Schur covering F/([F,R]*C).

    C is a free complement of the torsion of R/[F,R], chosen by
    Smith-form column order.  Returns the presentation together with the
    h2 representative words (which map to the covering's kernel).
    """
    p = rm.presentation
    n = p.ngens
    k = rm.schreier.rank
    sfF = rm._full_smith
    diag = sfF.diag + [0] * (k - len(sfF.diag))
    free = [i for i, d in enumerate(diag) if d == 0]
    relators: list[Word] = []
    seen = set()
    for g in range(n):
        f = Word.gen(g)
        for s in rm.schreier.gen_words:
            w = f.commutator(s)
            if w and w.letters not in seen:
                seen.add(w.letters)
                relators.append(w)
    for pos in free:
        v = [sfF.left_inv[i][pos] for i in range(k)]
        w = Word()
        for j, e in enumerate(v):
            if e:
                w = w * (rm.schreier.gen_words[j] ** e)
        if w:
            relators.append(w)
    pres = Presentation(p.generators, tuple(relators),
                        name=f"{p.name}-cover")
    return pres, rm.rep_words
