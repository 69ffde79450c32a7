"""Nonabelian exterior squares and Schur coverings.

The exterior square G ^ G is realized by coset enumeration of its
defining presentation: one generator per ordered pair (x, y) of group
elements, the two biderivation relation families over all triples, and
x ^ x = 1.  The commutator map makes it a central extension of the
derived subgroup whose kernel is the Schur multiplier.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .errors import CapExceeded, StablabError
from .extensions import (CentralExtension, cocycle_from_extension,
                         extension_from_cocycle)
from .gtable import (AbelianCoordinates, GroupTable, group_table,
                     hom_from_gen_images, subgroup_table)
from .intmat import AbelianGroup
from .presentation import Presentation
from .rs import RelationModule, covering_presentation, relation_module
from .words import Word


@dataclass
class ExteriorSquare:
    source: GroupTable
    presentation: Presentation
    table: GroupTable
    pair_list: list[tuple[int, int]]          # nondegenerate pairs, gen order
    id_bar: np.ndarray                        # table element -> source element
    derived_elements: list[int]               # sorted image of id_bar
    kernel_elements: list[int]                # fiber over the identity
    kernel_coords: AbelianCoordinates

    @property
    def kernel(self) -> AbelianGroup:
        return self.kernel_coords.group

    def pair_element(self, x: int, y: int) -> int:
        """The element x ^ y of the realized exterior square."""
        idx = self._pair_gen.get((x, y))
        if idx is None:
            return self.table.identity
        return int(self.table.gen_images[idx])

    @property
    def _pair_gen(self) -> dict[tuple[int, int], int]:
        if not hasattr(self, "_pg"):
            self._pg = {p: i for i, p in enumerate(self.pair_list)}
        return self._pg

    def summary(self) -> dict:
        return {"source_order": self.source.order,
                "extsq_order": self.table.order,
                "kernel_invariant_factors":
                    list(self.kernel.invariant_factors)}


def _pair_presentation(g: GroupTable) -> tuple[Presentation,
                                               list[tuple[int, int]]]:
    n = g.order
    e = g.identity
    pairs = [(x, y) for x in range(n) for y in range(n)
             if x != y and x != e and y != e]
    index = {p: i for i, p in enumerate(pairs)}

    def letter(x, y, sign=1):
        i = index.get((x, y))
        return () if i is None else (sign * (i + 1),)

    mul, inv = g.mul, g.inv
    relators = []
    seen = set()

    def add(letters):
        w = Word(letters)
        if w and w.letters not in seen:
            seen.add(w.letters)
            seen.add(w.inverse().letters)
            relators.append(w)

    for x in range(n):
        cx = mul[x]                       # left translation by x
        for y in range(n):
            xy = int(mul[x, y])
            cyx = int(mul[cx[y], inv[x]])     # x y x^-1
            for z in range(n):
                czx = int(mul[cx[z], inv[x]])     # x z x^-1
                # (xy ^ z) = (x.y ^ x.z)(x ^ z), conjugates by x
                add(letter(xy, z, -1) + letter(cyx, czx) + letter(x, z))
                # (z ^ xy) = (z ^ x)(x.z ^ x.y), conjugates by x
                add(letter(z, xy, -1) + letter(z, x) + letter(czx, cyx))
    names = tuple(f"w{i}" for i in range(len(pairs)))
    return Presentation(names, tuple(relators),
                        name=f"{g.name}-extsq"), pairs


def exterior_square(g: GroupTable,
                    max_cosets: int = config.DEFAULT_MAX_COSETS
                    ) -> ExteriorSquare:
    if g.order > config.MAX_EXTSQ_SOURCE_ORDER:
        raise CapExceeded(
            f"exterior square needs |G|^2 generators; order {g.order} "
            f"exceeds cap {config.MAX_EXTSQ_SOURCE_ORDER}")
    pres, pairs = _pair_presentation(g)
    table = group_table(pres, max_cosets=max_cosets)
    images = [g.commutator(x, y) for x, y in pairs]
    id_bar = hom_from_gen_images(table, g, images)
    if id_bar is None:
        raise StablabError("commutator map does not factor through G ^ G")
    derived = sorted(set(int(v) for v in id_bar))
    kernel = [i for i in range(table.order) if id_bar[i] == g.identity]
    coords = AbelianCoordinates(table, kernel)
    return ExteriorSquare(g, pres, table, pairs, id_bar, derived, kernel,
                          coords)


def miller_kernel(g: GroupTable) -> AbelianGroup:
    """Invariant factors of ker(G ^ G -> [G, G])."""
    return exterior_square(g).kernel


def check_pair_relations(sq: ExteriorSquare) -> bool:
    """Exhaustively verify the biderivation relations in the realization."""
    g, t = sq.source, sq.table
    n = g.order
    mul, inv = g.mul, g.inv
    tm = t.mul
    for x in range(n):
        for y in range(n):
            xy = int(mul[x, y])
            cyx = int(mul[mul[x, y], inv[x]])
            if sq.pair_element(x, x) != t.identity:
                return False
            for z in range(n):
                czx = int(mul[mul[x, z], inv[x]])
                lhs = sq.pair_element(xy, z)
                rhs = tm[sq.pair_element(cyx, czx), sq.pair_element(x, z)]
                if lhs != rhs:
                    return False
                lhs = sq.pair_element(z, xy)
                rhs = tm[sq.pair_element(z, x), sq.pair_element(czx, cyx)]
                if lhs != rhs:
                    return False
    return True


@dataclass
class MillerExtension:
    """G ^ G as a central extension of the derived subgroup."""

    square: ExteriorSquare
    derived_table: GroupTable
    section: np.ndarray                  # derived index -> G ^ G element
    cocycle_elements: np.ndarray         # (d, d) kernel elements of G ^ G


def miller_extension(sq: ExteriorSquare) -> MillerExtension:
    d_table, d_index = subgroup_table(sq.source, sq.derived_elements)
    n_d = d_table.order
    proj = np.array([d_index[int(v)] for v in sq.id_bar])
    section = np.array([int(np.nonzero(proj == i)[0][0])
                        for i in range(n_d)])
    t = sq.table
    coc = np.empty((n_d, n_d), dtype=np.int64)
    kset = set(sq.kernel_elements)
    for x in range(n_d):
        for y in range(n_d):
            z = int(d_table.mul[x, y])
            val = int(t.mul[t.mul[section[x], section[y]],
                            t.inv[section[z]]])
            if val not in kset:
                raise StablabError("section defect escapes the kernel")
            coc[x, y] = val
    return MillerExtension(sq, d_table, section, coc)


# -- Schur coverings -----------------------------------------------------

def schur_covering(g: GroupTable, rm: RelationModule | None = None,
                   max_cosets: int = config.DEFAULT_MAX_COSETS
                   ) -> CentralExtension:
    """A stem cover of G in cocycle form, kernel = the multiplier.

    Built from the quotient of the free group by the conjugation lattice
    plus a free complement; the covering's kernel coordinates come from
    the multiplier representative words.
    """
    if g.presentation is None:
        raise StablabError("group table must carry its presentation")
    if rm is None:
        rm = relation_module(g.presentation)
    pres, rep_words = covering_presentation(rm)
    cover = group_table(pres, max_cosets=max_cosets)
    if cover.order != g.order * rm.h2.order:
        raise StablabError(
            f"covering has order {cover.order}, expected "
            f"{g.order * rm.h2.order}")
    proj = hom_from_gen_images(cover, g, list(g.gen_images))
    if proj is None:
        raise StablabError("covering does not project onto the group")
    kgens = [cover.evaluate(w) for w in rep_words]
    m = rm.h2.order
    kernel_elements = np.empty(m, dtype=np.int64)
    for idx, coords in enumerate(rm.h2.elements()):
        x = cover.identity
        for k, a in zip(kgens, coords):
            x = int(cover.mul[x, cover.power(k, a)])
        kernel_elements[idx] = x
    fiber = set(int(i) for i in np.nonzero(proj == g.identity)[0])
    if set(int(v) for v in kernel_elements) != fiber \
            or len(fiber) != m:
        raise StablabError("multiplier words do not span the kernel")
    c = cocycle_from_extension(cover, proj, kernel_elements, rm.h2, base=g)
    return extension_from_cocycle(c)


def pi_bar(ext: CentralExtension, x: int, y: int,
           section: np.ndarray | None = None) -> int:
    """[s(x), s(y)] in the total group; section-independent since the
    kernel is central."""
    s = ext.section if section is None else section
    return ext.total.commutator(int(s[x]), int(s[y]))


def pi_bar_hom(sq: ExteriorSquare, ext: CentralExtension) -> np.ndarray:
    """The homomorphism G ^ G -> L extending x ^ y -> [s(x), s(y)]."""
    images = [pi_bar(ext, x, y) for x, y in sq.pair_list]
    hom = hom_from_gen_images(sq.table, ext.total, images)
    if hom is None:
        raise StablabError("pair commutators do not define a homomorphism")
    return hom


def h_of_extension(ext: CentralExtension,
                   rm: RelationModule | None = None) -> list[tuple[int, ...]]:
    """h: H2(G, Z) -> A for a central extension, as the images of the
    Hopf-formula basis words evaluated through the section."""
    if rm is None:
        if ext.base.presentation is None:
            raise StablabError("base table must carry its presentation")
        rm = relation_module(ext.base.presentation)
    return [ext.kernel_coords(ext.section_eval(w)) for w in rm.rep_words]
