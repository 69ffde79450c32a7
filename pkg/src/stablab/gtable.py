"""Finite groups as explicit multiplication tables.

A ``GroupTable`` is the concrete realization every higher layer works
with: elements are 0..n-1, multiplication is a numpy table, element 0 is
the identity.  Tables are immutable once built.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import config
from .coset import CosetAction, coset_enumerate
from .errors import CapExceeded, StablabError
from .intmat import AbelianGroup, smith_normal_form
from .presentation import Presentation
from .words import Word


@dataclass(frozen=True)
class GroupTable:
    mul: np.ndarray                  # (n, n) int32, mul[i, j] = i*j
    inv: np.ndarray                  # (n,) int32
    identity: int
    gen_images: tuple[int, ...] = ()
    presentation: Presentation | None = None
    name: str = "G"
    _words: tuple[Word, ...] | None = field(default=None, compare=False)

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    # -- basic arithmetic ------------------------------------------------

    def product(self, elements: Iterable[int]) -> int:
        x = self.identity
        for y in elements:
            x = int(self.mul[x, y])
        return x

    def power(self, x: int, k: int) -> int:
        if k < 0:
            return self.power(int(self.inv[x]), -k)
        out = self.identity
        for _ in range(k):
            out = int(self.mul[out, x])
        return out

    def commutator(self, x: int, y: int) -> int:
        m, v = self.mul, self.inv
        return int(m[m[m[x, y], v[x]], v[y]])

    def conjugate(self, x: int, by: int) -> int:
        m = self.mul
        return int(m[m[by, x], self.inv[by]])

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = int(self.mul[y, x])
            k += 1
        return k

    def evaluate(self, w: Word, images: Sequence[int] | None = None) -> int:
        """Evaluate a word through generator images (default: own gens)."""
        ims = self.gen_images if images is None else images
        x = self.identity
        for a in w.letters:
            g = ims[abs(a) - 1]
            x = int(self.mul[x, g if a > 0 else int(self.inv[g])])
        return x

    # -- structure -------------------------------------------------------

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def subgroup_closure(self, gens: Iterable[int]) -> list[int]:
        gens = [g for g in set(gens)]
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.mul[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def commutator_subgroup(self) -> list[int]:
        comms = {self.commutator(x, y)
                 for x in range(self.order) for y in range(self.order)}
        return self.subgroup_closure(comms)

    def center(self) -> list[int]:
        eq = self.mul == self.mul.T
        return [i for i in range(self.order) if eq[i].all()]

    def centralizes(self, elements: Iterable[int]) -> bool:
        m = self.mul
        return all(m[x, y] == m[y, x]
                   for x in elements for y in range(self.order))

    def is_normal(self, subgroup: Sequence[int]) -> bool:
        sset = set(subgroup)
        return all(self.conjugate(x, g) in sset
                   for x in subgroup for g in range(self.order))

    def element_words(self) -> tuple[Word, ...]:
        """Shortlex-least word for each element over the generator images.

        BFS from the identity, trying generator, then its inverse, in
        index order; deterministic.
        """
        if self._words is not None:
            return self._words
        steps: list[tuple[int, int]] = []
        for i, g in enumerate(self.gen_images):
            steps.append((g, i + 1))
            steps.append((int(self.inv[g]), -(i + 1)))
        words: dict[int, tuple[int, ...]] = {self.identity: ()}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g, letter in steps:
                    y = int(self.mul[x, g])
                    if y not in words:
                        words[y] = words[x] + (letter,)
                        nxt.append(y)
            frontier = nxt
        if len(words) != self.order:
            raise StablabError("generator images do not generate the group")
        out = tuple(Word(words[i]) for i in range(self.order))
        object.__setattr__(self, "_words", out)
        return out

    # -- validation ------------------------------------------------------

    def validate(self) -> None:
        n = self.order
        m = self.mul
        if m.shape != (n, n):
            raise StablabError("mul table not square")
        rows_ok = (np.sort(m, axis=1) == np.arange(n)).all()
        cols_ok = (np.sort(m, axis=0) == np.arange(n)[:, None]).all()
        if not (rows_ok and cols_ok):
            raise StablabError("mul table is not a Latin square")
        e = self.identity
        if not ((m[e] == np.arange(n)).all() and (m[:, e] == np.arange(n)).all()):
            raise StablabError("identity is not a two-sided unit")
        if not (m[np.arange(n), self.inv] == e).all():
            raise StablabError("inv inconsistent with mul")
        if not (self.inv[self.inv] == np.arange(n)).all():
            raise StablabError("inv is not an involution")
        if n <= config.MAX_ASSOC_CHECK_ORDER:
            left = m[m, :][:, :, :]           # (i*j)*k
            right = m[:, m]                   # i*(j*k)
            if not np.array_equal(left, right):
                raise StablabError("multiplication is not associative")
        if self.presentation is not None:
            for r in self.presentation.relators:
                if self.evaluate(r) != self.identity:
                    raise StablabError(f"relator {r!r} does not evaluate to 1")


# -- constructions -------------------------------------------------------

def from_coset_action(action: CosetAction, name: str | None = None,
                      validate: bool = True) -> GroupTable:
    """Regular action (trivial subgroup) -> multiplication table."""
    if action.subgroup_words and any(w for w in action.subgroup_words):
        raise StablabError("regular table requires the trivial subgroup")
    n = action.degree
    if n > config.MAX_GROUP_ORDER:
        raise CapExceeded(f"group order {n} exceeds cap")
    pres = action.presentation
    tbl = np.array(action.table, dtype=np.int32)
    # shortlex word for each coset over the enumeration columns
    words: dict[int, list[int]] = {0: []}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for c in range(tbl.shape[1]):
                y = int(tbl[x, c])
                if y not in words:
                    words[y] = words[x] + [c]
                    nxt.append(y)
        frontier = nxt
    mul = np.empty((n, n), dtype=np.int32)
    all_cosets = np.arange(n, dtype=np.int32)
    for j in range(n):
        col = all_cosets
        for c in words[j]:
            col = tbl[col, c]
        mul[:, j] = col
    inv = np.empty(n, dtype=np.int32)
    for i in range(n):
        inv[i] = int(np.nonzero(mul[i] == 0)[0][0])
    gen_images = tuple(int(tbl[0, 2 * i]) for i in range(pres.ngens))
    g = GroupTable(mul, inv, 0, gen_images, pres,
                   name=name or pres.name)
    if validate:
        g.validate()
    return g


def group_table(pres: Presentation,
                max_cosets: int = config.DEFAULT_MAX_COSETS) -> GroupTable:
    """Realize a finite presentation as a multiplication table."""
    return from_coset_action(coset_enumerate(pres, (), max_cosets))


def cyclic_table(n: int) -> GroupTable:
    mul = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    inv = (-np.arange(n)) % n
    pres = Presentation(("a",), (Word.gen(0) ** n,), name=f"C{n}")
    return GroupTable(mul.astype(np.int32), inv.astype(np.int32), 0, (1 % n,),
                      pres, name=f"C{n}")


def direct_product(a: GroupTable, b: GroupTable,
                   name: str | None = None) -> GroupTable:
    na, nb = a.order, b.order
    ia = np.repeat(np.arange(na), nb)
    ib = np.tile(np.arange(nb), na)
    mul = (a.mul[np.ix_(ia, ia)] * nb + b.mul[np.ix_(ib, ib)]).astype(np.int32)
    inv = (a.inv[ia] * nb + b.inv[ib]).astype(np.int32)
    gen_images = tuple(int(g) * nb for g in a.gen_images) + \
        tuple(int(g) for g in b.gen_images)
    return GroupTable(mul, inv, 0, gen_images, None,
                      name=name or f"{a.name}x{b.name}")


def subgroup_table(g: GroupTable, elements: Sequence[int],
                   gens: Sequence[int] | None = None,
                   name: str | None = None) -> tuple[GroupTable, dict[int, int]]:
    """Table of a subgroup; returns (table, parent-element -> index map)."""
    elements = sorted(set(elements))
    if g.identity != elements[0]:
        if g.identity not in elements:
            raise StablabError("subgroup must contain the identity")
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    mul = np.empty((n, n), dtype=np.int32)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            z = int(g.mul[x, y])
            if z not in index:
                raise StablabError("element set is not closed")
            mul[i, j] = index[z]
    inv = np.array([index[int(g.inv[x])] for x in elements], dtype=np.int32)
    if gens is None:
        gens = _greedy_generators(g, elements)
    gen_images = tuple(index[x] for x in gens)
    sub = GroupTable(mul, inv, index[g.identity], gen_images, None,
                     name=name or f"{g.name}-sub{n}")
    return sub, index


def quotient_table(g: GroupTable, normal_elements: Sequence[int],
                   name: str | None = None) -> tuple[GroupTable, np.ndarray]:
    """Quotient by a normal subgroup; returns (table, projection array)."""
    nset = sorted(set(normal_elements))
    if not g.is_normal(nset):
        raise StablabError("subgroup is not normal")
    coset_of = -np.ones(g.order, dtype=np.int64)
    reps = []
    for x in range(g.order):
        if coset_of[x] >= 0:
            continue
        c = len(reps)
        reps.append(x)
        for h in nset:
            coset_of[int(g.mul[x, h])] = c
    n = len(reps)
    mul = np.empty((n, n), dtype=np.int32)
    for i, x in enumerate(reps):
        mul[i] = coset_of[g.mul[x, reps]]
    inv = coset_of[g.inv[reps]].astype(np.int32)
    gen_images = tuple(int(coset_of[x]) for x in g.gen_images)
    q = GroupTable(mul, inv, int(coset_of[g.identity]), gen_images, None,
                   name=name or f"{g.name}/N{len(nset)}")
    return q, coset_of


def _greedy_generators(g: GroupTable, elements: Sequence[int]) -> list[int]:
    gens: list[int] = []
    closure = {g.identity}
    for x in elements:
        if x not in closure:
            gens.append(x)
            closure = set(g.subgroup_closure(gens))
    return gens


# -- abelian structure ---------------------------------------------------

class AbelianCoordinates:
    """Explicit isomorphism of a finite abelian (sub)group with its
    invariant-factor form.

    ``coords(x)`` maps a parent-group element to a tuple over the
    invariant factors; ``element(t)`` inverts it.
    """

    def __init__(self, g: GroupTable, elements: Sequence[int]):
        elements = sorted(set(elements))
        for x in elements:
            for y in elements:
                if g.mul[x, y] != g.mul[y, x]:
                    raise StablabError("subgroup is not abelian")
        gens = _greedy_generators(g, elements)
        if not gens:
            gens = []
        k = len(gens)
        # expression vector for every element via BFS over the generators
        expr: dict[int, tuple[int, ...]] = {g.identity: (0,) * k}
        frontier = [g.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for i, h in enumerate(gens):
                    y = int(g.mul[x, h])
                    if y not in expr:
                        v = list(expr[x])
                        v[i] += 1
                        expr[y] = tuple(v)
                        nxt.append(y)
            frontier = nxt
        if set(expr) != set(elements):
            raise StablabError("generators do not generate the element set")
        # relation lattice: tree-edge relations expr(x) + e_i - expr(x*g_i)
        rel_cols: list[list[int]] = []
        for x in elements:
            for i, h in enumerate(gens):
                y = int(g.mul[x, h])
                v = [a - b for a, b in zip(expr[x], expr[y])]
                v[i] += 1
                if any(v):
                    rel_cols.append(v)
        if k == 0:
            self.group = AbelianGroup(())
            self._coords = {g.identity: ()}
            self._elements_by_coords = {(): g.identity}
            return
        matrix = [[col[i] for col in rel_cols] for i in range(k)] \
            if rel_cols else [[0] for _ in range(k)]
        sf = smith_normal_form(matrix)
        diag = sf.diag + [0] * (k - len(sf.diag))
        keep = [i for i, d in enumerate(diag) if d != 1]
        factors = [diag[i] for i in keep]
        if any(d == 0 for d in factors):
            raise StablabError("subgroup is not finite")
        self.group = AbelianGroup(tuple(factors))
        self._coords = {}
        self._elements_by_coords = {}
        L = sf.left
        for x in elements:
            v = expr[x]
            full = [sum(L[i][j] * v[j] for j in range(k)) for i in range(k)]
            t = tuple(full[i] % diag[i] for i in keep)
            self._coords[x] = t
            self._elements_by_coords[t] = x

    def coords(self, x: int) -> tuple[int, ...]:
        return self._coords[x]

    def element(self, t: Sequence[int]) -> int:
        return self._elements_by_coords[tuple(
            a % f for a, f in zip(t, self.group.invariant_factors))]

    @property
    def elements(self) -> list[int]:
        return sorted(self._coords)


def abelian_invariants(g: GroupTable,
                       elements: Sequence[int] | None = None) -> AbelianGroup:
    """Invariant factors of an abelian subgroup (default: G_ab)."""
    if elements is None:
        q, _ = quotient_table(g, g.commutator_subgroup())
        return AbelianCoordinates(q, list(range(q.order))).group
    return AbelianCoordinates(g, elements).group


# -- homomorphisms and isomorphism --------------------------------------

def is_homomorphism(src: GroupTable, dst: GroupTable,
                    image: Sequence[int]) -> bool:
    im = np.asarray(image)
    return bool(np.array_equal(im[src.mul], dst.mul[np.ix_(im, im)]))


def hom_from_gen_images(src: GroupTable, dst: GroupTable,
                        gen_images: Sequence[int]) -> np.ndarray | None:
    """Extend generator images to a full map, or None on conflict."""
    image = -np.ones(src.order, dtype=np.int64)
    image[src.identity] = dst.identity
    frontier = [src.identity]
    gens = list(src.gen_images)
    while frontier:
        nxt = []
        for x in frontier:
            for g, img in zip(gens, gen_images):
                y = int(src.mul[x, g])
                t = int(dst.mul[image[x], img])
                if image[y] < 0:
                    image[y] = t
                    nxt.append(y)
                elif image[y] != t:
                    return None
        frontier = nxt
    if (image < 0).any():
        return None
    if not is_homomorphism(src, dst, image):
        return None
    return image


def _order_profile(g: GroupTable) -> tuple:
    orders = sorted(g.element_order(x) for x in range(g.order))
    return tuple(orders)


def are_isomorphic(g1: GroupTable, g2: GroupTable) -> bool:
    if g1.order != g2.order:
        return False
    if _order_profile(g1) != _order_profile(g2):
        return False
    ab1, ab2 = g1.is_abelian(), g2.is_abelian()
    if ab1 != ab2:
        return False
    if ab1:
        return (abelian_invariants(g1).invariant_factors ==
                abelian_invariants(g2).invariant_factors)
    if len(g1.center()) != len(g2.center()):
        return False
    gens = _greedy_generators(g1, list(range(g1.order)))
    g1 = GroupTable(g1.mul, g1.inv, g1.identity, tuple(gens),
                    None, name=g1.name)
    orders = [g1.element_order(x) for x in gens]
    candidates = [[y for y in range(g2.order)
                   if g2.element_order(y) == o] for o in orders]

    def extend(i: int, chosen: list[int]) -> bool:
        if i == len(gens):
            return hom_from_gen_images(g1, g2, chosen) is not None
        for y in candidates[i]:
            chosen.append(y)
            if _partial_consistent(g1, g2, gens[:i + 1], chosen):
                if extend(i + 1, chosen):
                    return True
            chosen.pop()
        return False

    return extend(0, [])


def _partial_consistent(g1: GroupTable, g2: GroupTable,
                        gens: list[int], images: list[int]) -> bool:
    """Partial map on the subgroup generated so far must be a bijective hom."""
    sub1 = g1.subgroup_closure(gens)
    image = {g1.identity: g2.identity}
    frontier = [g1.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g, img in zip(gens, images):
                y = int(g1.mul[x, g])
                t = int(g2.mul[image[x], img])
                if y not in image:
                    image[y] = t
                    nxt.append(y)
                elif image[y] != t:
                    return False
        frontier = nxt
    return len(set(image.values())) == len(sub1)
