"""Exact integer matrices: Smith normal form and finite abelian groups.

Everything here is arbitrary-precision; transform entries can grow even
when the input is tiny, so no machine-integer arithmetic is used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Iterator, Sequence


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(m):
                    oi[j] += c * bt[j]
    return out


@dataclass
class SmithForm:
    """L @ M @ R == diag(factors), with L, R unimodular."""

    diag: list[int]            # nonnegative, d_i | d_{i+1} over nonzeros
    left: list[list[int]]
    right: list[list[int]]
    left_inv: list[list[int]]
    right_inv: list[list[int]]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SmithForm:
    """Exact Smith normal form with all four transform matrices."""
    a = [list(map(int, row)) for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    left = identity_matrix(m)
    left_inv = identity_matrix(m)
    right = identity_matrix(n)
    right_inv = identity_matrix(n)

    def row_op(i, j, c):  # row_i += c*row_j
        ai, aj = a[i], a[j]
        for t in range(n):
            ai[t] += c * aj[t]
        li, lj = left[i], left[j]
        for t in range(m):
            li[t] += c * lj[t]
        for t in range(m):
            left_inv[t][j] -= c * left_inv[t][i]

    def col_op(i, j, c):  # col_i += c*col_j
        for t in range(m):
            a[t][i] += c * a[t][j]
        for t in range(n):
            right[t][i] += c * right[t][j]
        ri, rj = right_inv[i], right_inv[j]
        for t in range(n):
            rj[t] -= c * ri[t]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]
        for t in range(m):
            left_inv[t][i], left_inv[t][j] = left_inv[t][j], left_inv[t][i]

    def col_swap(i, j):
        for t in range(m):
            a[t][i], a[t][j] = a[t][j], a[t][i]
        for t in range(n):
            right[t][i], right[t][j] = right[t][j], right[t][i]
        right_inv[i], right_inv[j] = right_inv[j], right_inv[i]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        left[i] = [-x for x in left[i]]
        for t in range(m):
            left_inv[t][i] = -left_inv[t][i]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    pivot = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        i0, j0 = pivot
        if i0 != t:
            row_swap(t, i0)
        if j0 != t:
            col_swap(t, j0)
        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        row_op(i, t, -q)
                    if a[i][t]:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        col_op(j, t, -q)
                    if a[t][j]:
                        col_swap(t, j)
                        dirty = True
            if dirty:
                continue
            # enforce divisibility of the remaining block by the pivot
            p = a[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, 1)
        if a[t][t] < 0:
            row_negate(t)
        t += 1

    diag = [a[i][i] if i < n else 0 for i in range(min(m, n))]
    diag = [d for d in diag]
    return SmithForm(diag, left, right, left_inv, right_inv)


@dataclass(frozen=True)
class AbelianGroup:
    """Invariant-factor decomposition; factor 0 encodes an infinite cyclic."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        fs = self.invariant_factors
        for f in fs:
            if f == 1 or f < 0:
                raise ValueError(f"bad invariant factor {f}")
        nz = [f for f in fs if f != 0]
        for x, y in zip(nz, nz[1:]):
            if y % x:
                raise ValueError(f"factors {fs} not in divisibility order")

    @staticmethod
    def from_diag(diag: Sequence[int], extra_free: int = 0) -> "AbelianGroup":
        fs = [d for d in diag if d != 1]
        fs += [0] * extra_free
        fs.sort(key=lambda d: (d == 0, d))
        return AbelianGroup(tuple(fs))

    @staticmethod
    def from_prime_powers(powers: Sequence[int]) -> "AbelianGroup":
        """Combine a multiset of prime-power orders into invariant factors."""
        by_p: dict[int, list[int]] = {}
        for q in powers:
            if q == 1:
                continue
            p = _smallest_prime_factor(q)
            by_p.setdefault(p, []).append(q)
        for lst in by_p.values():
            lst.sort(reverse=True)
        depth = max((len(v) for v in by_p.values()), default=0)
        factors = []
        for i in range(depth):
            f = 1
            for lst in by_p.values():
                if i < len(lst):
                    f *= lst[i]
            factors.append(f)
        factors.reverse()
        return AbelianGroup(tuple(factors))

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def is_finite(self) -> bool:
        return 0 not in self.invariant_factors

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise ValueError("infinite group")
        n = 1
        for f in self.invariant_factors:
            n *= f
        return n

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def elements(self) -> Iterator[tuple[int, ...]]:
        if not self.is_finite:
            raise ValueError("infinite group")
        return itertools.product(*(range(f) for f in self.invariant_factors))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def add(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        return tuple((a + b) % f for a, b, f in
                     zip(x, y, self.invariant_factors))

    def neg(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple((-a) % f for a, f in zip(x, self.invariant_factors))

    def smul(self, c: int, x: Sequence[int]) -> tuple[int, ...]:
        return tuple((c * a) % f for a, f in zip(x, self.invariant_factors))

    def element_order(self, x: Sequence[int]) -> int:
        o = 1
        for a, f in zip(x, self.invariant_factors):
            if a:
                o = o * (f // gcd(f, a)) // gcd(o, f // gcd(f, a))
        return o

    def __str__(self) -> str:
        if self.is_trivial:
            return "0"
        return " x ".join("Z" if f == 0 else f"Z/{f}"
                          for f in self.invariant_factors)


def _smallest_prime_factor(n: int) -> int:
    p = 2
    while p * p <= n:
        if n % p == 0:
            return p
        p += 1
    return n


def cokernel(matrix: Sequence[Sequence[int]], ambient_rank: int) -> AbelianGroup:
    """Z^ambient_rank modulo the column span of ``matrix``."""
    if not matrix or not matrix[0]:
        return AbelianGroup((0,) * ambient_rank)
    sf = smith_normal_form(matrix)
    diag = sf.diag + [0] * (ambient_rank - len(sf.diag))
    free = sum(1 for d in diag if d == 0)
    return AbelianGroup.from_diag([d for d in diag if d != 0], extra_free=free)


def hom_invariants(src: AbelianGroup, dst: AbelianGroup) -> AbelianGroup:
    """Hom(src, dst) for dst finite (src factors may be 0 = Z)."""
    if not dst.is_finite:
        raise ValueError("target must be finite")
    powers = []
    for m in src.invariant_factors:
        for k in dst.invariant_factors:
            g = k if m == 0 else gcd(m, k)
            for q in _prime_power_parts(g):
                powers.append(q)
    return AbelianGroup.from_prime_powers(powers)


def hom_generators(src: AbelianGroup, dst: AbelianGroup
                   ) -> list[tuple[int, list[tuple[int, ...]]]]:
    """Generators of Hom(src, dst) as (order, images-of-src-basis) pairs.

    The full Hom group is the set of sums of multiples of these; they
    generate with the product of the listed orders equal to |Hom|.
    """
    gens = []
    for i, m in enumerate(src.invariant_factors):
        for j, k in enumerate(dst.invariant_factors):
            g = k if m == 0 else gcd(m, k)
            if g == 1:
                continue
            images = [dst.zero() for _ in src.invariant_factors]
            img = list(dst.zero())
            img[j] = k // g
            images[i] = tuple(img)
            gens.append((g, images))
    return gens


def hom_elements(src: AbelianGroup, dst: AbelianGroup
                 ) -> list[list[tuple[int, ...]]]:
    """All homomorphisms src -> dst, each as a list of basis images."""
    gens = hom_generators(src, dst)
    homs = []
    for coeffs in itertools.product(*(range(o) for o, _ in gens)):
        images = [dst.zero() for _ in src.invariant_factors]
        for c, (_, ims) in zip(coeffs, gens):
            if c:
                images = [dst.add(a, dst.smul(c, b))
                          for a, b in zip(images, ims)]
        homs.append(images)
    if not gens:
        homs = [[dst.zero() for _ in src.invariant_factors]]
    return homs


def ext_invariants(src: AbelianGroup, dst: AbelianGroup) -> AbelianGroup:
    """Ext^1_Z(src, dst); Ext(Z, -) = 0, Ext(Z/m, Z/k) = Z/gcd(m,k)."""
    powers = []
    for m in src.invariant_factors:
        if m == 0:
            continue
        for k in dst.invariant_factors:
            if k == 0:
                raise ValueError("target must be finite")
            for q in _prime_power_parts(gcd(m, k)):
                powers.append(q)
    return AbelianGroup.from_prime_powers(powers)


def _prime_power_parts(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            q = 1
            while n % p == 0:
                q *= p
                n //= p
            out.append(q)
        p += 1
    if n > 1:
        out.append(n)
    return out
