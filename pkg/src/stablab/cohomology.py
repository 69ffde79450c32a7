"""Cohomology of finite groups via the normalized bar resolution.

Coefficients always carry the trivial action.  Cochains in degree d are
tables indexed by d-tuples of group elements (identity rows forced to
zero by normalization); internally each finite coefficient module is
split into prime-power cyclic blocks and all linear algebra runs over
Z/p^j with numpy.

Degree-2 classes come with explicit coordinate maps in both directions,
which is what the extension and spectral machinery consumes.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from . import config
from .errors import CapExceeded, StablabError
from .gtable import GroupTable, abelian_invariants
from .intmat import AbelianGroup, _prime_power_parts
from .zq import fp_echelon, smith_mod_prime_power

_RATIONAL_PRIME = 65521  # rank over Q == rank over a huge prime here


# -- coefficient modules -------------------------------------------------

@dataclass(frozen=True)
class CoefficientModule:
    kind: str                       # "finite" | "field" | "rationals"
    group: AbelianGroup | None = None
    p: int | None = None

    @staticmethod
    def finite(group: AbelianGroup) -> "CoefficientModule":
        if not group.is_finite:
            raise ValueError("coefficient group must be finite")
        return CoefficientModule("finite", group=group)

    @staticmethod
    def cyclic(m: int) -> "CoefficientModule":
        return CoefficientModule.finite(AbelianGroup((m,)))

    @staticmethod
    def prime_field(p: int) -> "CoefficientModule":
        if any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)) or p < 2:
            raise ValueError(f"{p} is not prime")
        return CoefficientModule("field", p=p)

    @staticmethod
    def rationals() -> "CoefficientModule":
        return CoefficientModule("rationals")

    @staticmethod
    def parse(spec: str) -> "CoefficientModule":
        """Parse 'F2', 'Q', 'Z/4', 'Z/2+Z/4', ...; factors sorted."""
        s = spec.strip()
        if s in ("Q", "QQ", "rationals"):
            return CoefficientModule.rationals()
        if s.startswith("F"):
            return CoefficientModule.prime_field(int(s[1:]))
        parts = []
        for tok in s.split("+"):
            tok = tok.strip()
            if not tok.startswith("Z/"):
                raise ValueError(f"bad coefficient spec {spec!r}")
            parts.extend(_prime_power_parts(int(tok[2:])))
        return CoefficientModule.finite(AbelianGroup.from_prime_powers(parts))

    @property
    def factors(self) -> tuple[int, ...]:
        """Cyclic moduli of the value components."""
        if self.kind == "finite":
            return self.group.invariant_factors
        if self.kind == "field":
            return (self.p,)
        return ()

    @property
    def ncomp(self) -> int:
        return max(len(self.factors), 1)

    def blocks(self) -> list[tuple[int, int, int]]:
        """(component index, p, j) for each prime-power cyclic block."""
        out = []
        for comp, f in enumerate(self.factors):
            for q in _prime_power_parts(f):
                p = min(d for d in range(2, q + 1) if q % d == 0)
                j = 0
                while p ** j < q:
                    j += 1
                out.append((comp, p, j))
        return out

    def __str__(self) -> str:
        if self.kind == "rationals":
            return "Q"
        if self.kind == "field":
            return f"F{self.p}"
        return str(self.group)


# -- bar differentials ---------------------------------------------------

def bar_matrix(g: GroupTable, d: int) -> np.ndarray:
    """Matrix of the normalized bar differential C^d -> C^{d+1}.

    Basis of C^d: d-tuples of non-identity elements in lexicographic
    order; rows index C^{d+1}.
    """
    if g.identity != 0:
        raise StablabError("tables must place the identity at index 0")
    nm = g.order - 1
    if d == 0:
        return np.zeros((nm, 1), dtype=np.int8)
    nrows = nm ** (d + 1)
    ncols = nm ** d
    M = np.zeros((nrows, ncols), dtype=np.int8)
    grids = np.indices((nm,) * (d + 1)).reshape(d + 1, -1) + 1
    rows = np.arange(nrows)

    def scatter(elem, sign):
        valid = (elem != 0).all(axis=0)
        idx = np.zeros(elem.shape[1], dtype=np.int64)
        for t in range(d):
            idx = idx * nm + (elem[t] - 1)
        np.add.at(M, (rows[valid], idx[valid]), sign)

    scatter(grids[1:], 1)
    for i in range(1, d + 1):
        merged = g.mul[grids[i - 1], grids[i]]
        elem = np.vstack([grids[:i - 1], merged[None, :], grids[i + 1:]])
        scatter(elem, -1 if i % 2 else 1)
    scatter(grids[:d], -1 if (d + 1) % 2 else 1)
    return M


def bar2_row_chunks(g: GroupTable, x_batch: int = 4):
    """Rows of the degree-2 differential, yielded per batch of first
    arguments — for field-rank computations too large to materialize."""
    nm = g.order - 1
    pair = np.indices((nm, nm)).reshape(2, -1) + 1
    y, z = pair
    rows = np.arange(nm * nm)

    def colidx(a, b):
        valid = (a != 0) & (b != 0)
        return (a - 1) * nm + (b - 1), valid

    for lo in range(1, g.order, x_batch):
        xs = range(lo, min(lo + x_batch, g.order))
        blocks = []
        for x in xs:
            M = np.zeros((nm * nm, nm * nm), dtype=np.int8)
            idx, valid = colidx(y, z)
            np.add.at(M, (rows[valid], idx[valid]), 1)
            xy = g.mul[x, y]
            idx, valid = colidx(xy, z)
            np.add.at(M, (rows[valid], idx[valid]), -1)
            yz = g.mul[y, z]
            idx, valid = colidx(np.full_like(y, x), yz)
            np.add.at(M, (rows[valid], idx[valid]), 1)
            idx, valid = colidx(np.full_like(y, x), y)
            np.add.at(M, (rows[valid], idx[valid]), -1)
            blocks.append(M)
        yield np.concatenate(blocks, axis=0)


# -- one prime-power block -----------------------------------------------

class PPBlock:
    """ker(D)/im(E) over Z/p^j with explicit coordinates.

    D is the outgoing differential, E the incoming one (may be None or
    have zero columns).  Over the local ring Z/p^j the kernel of D is
    generated by p^{j-a_i} times the i-th column of D's right Smith
    transform, where p^{a_i} is the i-th diagonal entry.
    """

    def __init__(self, D: np.ndarray, E: np.ndarray | None, p: int, j: int):
        self.p, self.j = p, j
        q = self.q = p ** j
        Dq = D.astype(np.int64) % q
        # ker(D) only depends on the row space, so compress tall inputs
        # first (invertible row operations leave the right transforms valid)
        if Dq.shape[0] > 2 * Dq.shape[1]:
            if j == 1:
                Dq = fp_echelon(Dq, p).rows
            else:
                Dq = np.unique(Dq, axis=0)
                Dq = Dq[Dq.any(axis=1)]
        sf = smith_mod_prime_power(Dq, p, j, want_left=False, want_right=True)
        n = D.shape[1]
        self.R, self.Ri = sf.right, sf.right_inv
        self.a = np.array([sf.diag_val(i) for i in range(n)], dtype=np.int64)
        self.gens = np.nonzero(self.a > 0)[0]
        ag = self.a[self.gens]
        if E is not None and E.shape[1]:
            Y = (self.Ri @ (E.astype(np.int64) % q)) % q
            if Y[self.a == 0].any():
                raise StablabError("incoming image escapes the kernel")
            shift = (p ** (j - ag))[:, None]
            Yg = Y[self.gens]
            if (Yg % shift).any():
                raise StablabError("incoming image escapes the kernel")
            T = (Yg // shift) % (p ** ag)[:, None]
        else:
            T = np.zeros((len(self.gens), 0), dtype=np.int64)
        rel = np.concatenate([T, np.diag(p ** ag)], axis=1) \
            if len(self.gens) else np.zeros((0, 1), dtype=np.int64)
        sfr = smith_mod_prime_power(rel, p, j, want_left=True,
                                    want_right=False)
        self.Lr, self.Lri = sfr.left, sfr.left_inv
        b = [sfr.diag_val(i) for i in range(len(self.gens))]
        self.kept = [i for i, bv in enumerate(b) if bv >= 1]
        self.divisors = [p ** b[i] for i in self.kept]

    def coords(self, f: np.ndarray) -> tuple[int, ...]:
        q, p, j = self.q, self.p, self.j
        y = (self.Ri @ (np.asarray(f, dtype=np.int64) % q)) % q
        if y[self.a == 0].any():
            raise StablabError("vector is not a cocycle for this block")
        ag = self.a[self.gens]
        shift = p ** (j - ag)
        yg = y[self.gens]
        if (yg % shift).any():
            raise StablabError("vector is not a cocycle for this block")
        t = (yg // shift) % (p ** ag)
        c = (self.Lr @ t) % q
        return tuple(int(c[i]) % d for i, d in zip(self.kept, self.divisors))

    def rep(self, coords) -> np.ndarray:
        q, p, j = self.q, self.p, self.j
        chat = np.zeros(len(self.gens), dtype=np.int64)
        for i, c in zip(self.kept, coords):
            chat[i] = c
        t = (self.Lri @ chat) % q
        ag = self.a[self.gens]
        y = np.zeros(self.R.shape[0], dtype=np.int64)
        y[self.gens] = (p ** (j - ag)) * t % q
        return (self.R @ y) % q


# -- cohomology groups ---------------------------------------------------

@dataclass
class CohomologyGroup:
    group: GroupTable
    module: CoefficientModule
    degree: int
    struct: AbelianGroup                 # trivial for rationals with dim 0
    blocks: list = field(repr=False, default_factory=list)
    # blocks entries: (component index, component modulus, crt coef, PPBlock)
    representatives: list = field(default_factory=list)

    @property
    def divisors(self) -> list[int]:
        """Moduli of the coordinate positions (prime powers, block order)."""
        return [d for _, _, _, blk in self.blocks for d in blk.divisors]

    @property
    def order(self) -> int:
        return self.struct.order

    @property
    def dim(self) -> int:
        """Vector-space dimension (field / rational coefficients only)."""
        if self.module.kind == "finite":
            raise StablabError("dimension undefined for mixed coefficients")
        return self.struct.rank

    def _component_vec(self, table: np.ndarray, comp: int) -> np.ndarray:
        d = self.degree
        table = np.asarray(table, dtype=np.int64)
        if d == 0:
            return table.reshape(-1)[comp:comp + 1]
        sl = (slice(1, None),) * d + (comp,)
        return table[sl].reshape(-1)

    def coords(self, table: np.ndarray) -> tuple[int, ...]:
        out: list[int] = []
        for comp, _f, _coef, blk in self.blocks:
            vec = self._component_vec(table, comp)
            out.extend(blk.coords(vec))
        return tuple(out)

    def representative(self, coords) -> np.ndarray:
        coords = tuple(coords)
        if len(coords) != len(self.divisors):
            raise StablabError("coordinate length mismatch")
        n = self.group.order
        d = self.degree
        shape = (n,) * d + (self.module.ncomp,)
        table = np.zeros(shape, dtype=np.int64)
        pos = 0
        for comp, f, coef, blk in self.blocks:
            k = len(blk.divisors)
            vec = blk.rep(coords[pos:pos + k])
            pos += k
            if d == 0:
                table[comp] = (table[comp] + coef * vec[0]) % f
            else:
                sl = (slice(1, None),) * d + (comp,)
                nm = n - 1
                table[sl] = (table[sl] + coef * vec.reshape((nm,) * d)) % f
        return table

    def is_coboundary(self, table: np.ndarray) -> bool:
        return not any(self.coords(table))

    def same_class(self, t1: np.ndarray, t2: np.ndarray) -> bool:
        return self.coords(t1) == self.coords(t2)

    def classes(self, cap: int = 65536):
        if self.order > cap:
            raise CapExceeded(f"{self.order} classes exceed enumeration cap")
        return itertools.product(*(range(d) for d in self.divisors))

    def reduce(self, table: np.ndarray) -> np.ndarray:
        """Reduce a value table modulo the component moduli."""
        table = np.asarray(table, dtype=np.int64).copy()
        for comp, f in enumerate(self.module.factors):
            if self.degree == 0:
                table[comp] %= f
            else:
                table[..., comp] %= f
        return table

    def summary(self) -> dict:
        if self.module.kind == "finite":
            value = {"invariant_factors":
                     list(self.struct.invariant_factors)}
        else:
            value = {"dimension": self.struct.rank}
        return {"degree": self.degree, **value,
                "representative_count": len(self.representatives)}


def _crt_coef(f: int, q: int) -> int:
    """Coefficient c with c = 1 mod q and c = 0 mod f/q."""
    m = f // q
    if m == 1:
        return 1
    return m * pow(m % q, -1, q) % f


def _check_caps(g: GroupTable, degree: int) -> None:
    nm = g.order - 1
    cells = (nm ** (degree + 1)) * max(nm ** degree, 1)
    if cells > config.MAX_BAR_CELLS:
        raise CapExceeded(
            f"bar resolution table for |G|={g.order}, degree {degree} "
            f"needs {cells} cells")


def cohomology(g: GroupTable, module: CoefficientModule,
               degree: int) -> CohomologyGroup:
    """H^degree(g, module) with trivial action, degrees 0..3."""
    if not 0 <= degree <= 3:
        raise ValueError("degree must be between 0 and 3")
    if g.order > config.MAX_BAR_ORDER:
        raise CapExceeded(f"|G|={g.order} exceeds the bar-resolution cap")
    _check_caps(g, degree)
    nm = g.order - 1
    D = bar_matrix(g, degree)
    E = bar_matrix(g, degree - 1) if degree >= 1 else None
    if module.kind == "rationals":
        dim = (1 if degree == 0 else nm ** degree)
        dim -= _rational_rank(D)
        if E is not None:
            dim -= _rational_rank(E)
        struct = AbelianGroup((0,) * dim)
        return CohomologyGroup(g, module, degree, struct)
    blocks = []
    divisors = []
    for comp, p, j in module.blocks():
        blk = PPBlock(D, E, p, j)
        f = module.factors[comp]
        blocks.append((comp, f, _crt_coef(f, p ** j), blk))
        divisors.extend(blk.divisors)
    struct = AbelianGroup.from_prime_powers(divisors)
    coh = CohomologyGroup(g, module, degree, struct, blocks)
    # one representative per generator position, in block order
    total = sum(len(blk.divisors) for _, _, _, blk in blocks)
    reps = []
    for i in range(total):
        unit = [0] * total
        unit[i] = 1
        reps.append(coh.representative(tuple(unit)))
    coh.representatives = reps
    return coh


def _rational_rank(M: np.ndarray) -> int:
    return fp_echelon(M, _RATIONAL_PRIME).rank


def check_cocycle(g: GroupTable, table: np.ndarray, degree: int,
                  module: CoefficientModule) -> bool:
    """Exhaustive cocycle-identity check on a value table."""
    D = bar_matrix(g, degree)
    for comp, f in enumerate(module.factors):
        if degree == 0:
            vec = np.asarray(table, dtype=np.int64)[comp:comp + 1]
        else:
            sl = (slice(1, None),) * degree + (comp,)
            vec = np.asarray(table, dtype=np.int64)[sl].reshape(-1)
        if ((D.astype(np.int64) @ vec) % f).any():
            return False
    return True


# -- integral H2 oracle --------------------------------------------------

def bar_h2(g: GroupTable) -> AbelianGroup:
    """H_2(g, Z) from the bar chain complex, prime by prime.

    Works over Z/p^J for J = v_p(|g|) + 3; by universal coefficients the
    resulting group is H_2(g) (p-part) plus a Tor term equal to the
    p-part of the abelianization, which is subtracted as a multiset of
    prime powers.
    """
    n = g.order
    if n == 1:
        return AbelianGroup(())
    _check_caps(g, 2)
    d2 = np.ascontiguousarray(bar_matrix(g, 1).T)      # C2 -> C1
    d3 = np.ascontiguousarray(bar_matrix(g, 2).T)      # C3 -> C2
    d3 = np.unique(d3, axis=1)
    gab = abelian_invariants(g)
    tor = Counter()
    for f in gab.invariant_factors:
        tor.update(_prime_power_parts(f))
    powers: list[int] = []
    for p in _prime_factors(n):
        vp = 0
        m = n
        while m % p == 0:
            vp += 1
            m //= p
        blk = PPBlock(d2, d3, p, vp + 3)
        have = Counter(blk.divisors)
        expect_tor = Counter(q for q in tor if q % p == 0
                             for _ in range(tor[q]))
        diff = have - expect_tor
        if sum((expect_tor - have).values()):
            raise StablabError("Tor term does not embed in mod-q homology")
        powers.extend(diff.elements())
    return AbelianGroup.from_prime_powers(powers)


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def h2_dim_fp(g: GroupTable, p: int) -> int:
    """dim H^2(g, F_p), streaming the degree-2 differential if needed."""
    nm = g.order - 1
    if nm == 0:
        return 0
    d1 = bar_matrix(g, 1)
    rank1 = fp_echelon(d1, p).rank
    if (nm ** 3) * (nm ** 2) <= config.MAX_BAR_CELLS:
        rank2 = fp_echelon(bar_matrix(g, 2), p).rank
    else:
        ech = fp_echelon(np.zeros((0, nm * nm), dtype=np.int64), p)
        for chunk in bar2_row_chunks(g):
            ech.add_rows(chunk)
        rank2 = ech.rank
    return nm * nm - rank2 - rank1


def uct_sequence(g: GroupTable, module: CoefficientModule) -> dict:
    """The sequence 0 -> Ext^1(G_ab,k) -> H^2(G,k) -> Hom(H2,k) -> 0
    with both maps made explicit on class representatives.

    The Ext side is generated by pullbacks of addition-carry cocycles on
    the abelianization; the Hom side evaluates multiplier representative
    words through the section of each class's extension.  Exactness is
    verified element-by-element and reported.
    """
    from itertools import product as iproduct

    from .extensions import h_of_class, module_values
    from .gtable import AbelianCoordinates, quotient_table
    from .intmat import ext_invariants, hom_elements
    from .rs import relation_module

    if module.kind == "rationals":
        return {"group": g.name, "module": str(module), "ext_order": 1,
                "h2_order": 1, "hom_order": 1, "exact": True}
    if g.presentation is None:
        raise StablabError("group table must carry its presentation")
    k_ab = module_values(module)
    rm = relation_module(g.presentation)
    h2k = cohomology(g, module, 2)
    # Hom-side map on every class
    h_of = {}
    for cls in h2k.classes():
        val = h_of_class(h2k.representative(cls), g, module, rm.rep_words)
        h_of[cls] = tuple(tuple(int(x) for x in t) for t in val)
    hom_all = {tuple(tuple(int(x) for x in t) for t in images)
               for images in hom_elements(rm.h2, k_ab)}
    image_h = set(h_of.values())
    ker_h = {cls for cls, v in h_of.items()
             if all(not any(t) for t in v)}
    # Ext side: carry-cocycle generators pulled back from G_ab
    q, pr = quotient_table(g, g.commutator_subgroup())
    ac = AbelianCoordinates(q, range(q.order))
    gab = ac.group
    n = g.order
    coords_g = np.array([ac.coords(int(pr[x])) for x in range(n)],
                        dtype=np.int64).reshape(n, gab.rank)
    kfs = np.array(k_ab.invariant_factors, dtype=np.int64)
    gens = []
    for i, d in enumerate(gab.invariant_factors):
        xi = coords_g[:, i]
        carry = (xi[:, None] + xi[None, :]) // d
        for j, qf in enumerate(k_ab.invariant_factors):
            o = gcd(d, qf)
            if o == 1:
                continue
            tab = np.zeros((n, n, k_ab.rank), dtype=np.int64)
            tab[:, :, j] = carry % qf
            gens.append((o, tab))
    ext_classes = []
    for coeffs in iproduct(*(range(o) for o, _ in gens)):
        tab = np.zeros((n, n, k_ab.rank), dtype=np.int64)
        for c, (_, t) in zip(coeffs, gens):
            tab = (tab + c * t) % kfs
        ext_classes.append(h2k.coords(tab))
    if not gens:
        ext_classes = [h2k.coords(np.zeros((n, n, k_ab.rank),
                                           dtype=np.int64))]
    ext_set = set(ext_classes)
    expected_ext = ext_invariants(gab, k_ab)
    injective = len(ext_set) == len(ext_classes) \
        and len(ext_set) == expected_ext.order
    exact = (injective and image_h == hom_all and ext_set == ker_h
             and len(ext_set) * len(hom_all) == h2k.order)
    return {"group": g.name, "module": str(module),
            "ext_order": len(ext_set), "h2_order": h2k.order,
            "hom_order": len(hom_all), "ext_injective": injective,
            "h_surjective": image_h == hom_all,
            "kernel_matches_ext_image": ext_set == ker_h,
            "exact": exact}
