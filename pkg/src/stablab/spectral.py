"""Low-degree spectral bookkeeping for central extensions.

For 1 -> A -> L -> Q -> 1 with A central and field coefficients F the
second page is E_2^{pq} = H^p(Q,F) (x) H^q(A,F); this module computes
the p+q <= 2 corner, checks d_2^{01} against the transgression as an
explicit matrix, and reads the infinity-page dimensions of H^2(L,F)
off the inflation and restriction images.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cohomology import CoefficientModule, cohomology
from .errors import CapExceeded, StablabError
from .extensions import (CentralExtension, _chi_of_cocycle, kernel_as_table,
                         module_values, transgression)
from .intmat import hom_generators
from .zq import fp_echelon, fp_rank

_RATIONAL_PRIME = 65521


def _field_dims(g, module):
    """dim H^d(g, module) for d = 0, 1, 2 (field coefficients)."""
    return [cohomology(g, module, d).struct.rank for d in range(3)]


def _check_field(module: CoefficientModule) -> None:
    if module.kind not in ("field", "rationals"):
        raise StablabError("spectral computations need field coefficients")


@dataclass
class E2Page:
    extension_name: str
    field: str
    dims: dict[tuple[int, int], int]
    d2_01: np.ndarray                    # (dim H2(Q), dim H1(A))
    d2_01_rank: int

    def to_json(self) -> dict:
        return {"extension": self.extension_name, "field": self.field,
                "dims": {f"E{p}{q}": d for (p, q), d in
                         sorted(self.dims.items())},
                "d2_01_rank": self.d2_01_rank}


def _cap(e: CentralExtension) -> None:
    if e.total.order > 64:
        raise CapExceeded("spectral computations cap at |L| = 64")


def d2_01(e: CentralExtension, module: CoefficientModule,
          seed: int = 0) -> np.ndarray:
    """Matrix of d_2^{01}: H^1(A,F) -> H^2(Q,F) in the unit-class bases.

    Computed by cochain descent: a character chi of A extends over a
    set-theoretic section to a 1-cochain of L whose coboundary is
    inflated from Q, and the descended class represents d_2(chi).  A
    random section (seeded) exercises section independence; the result
    must equal the transgression matrix.
    """
    _cap(e)
    _check_field(module)
    if module.kind == "rationals":
        return np.zeros((0, 0), dtype=np.int64)
    p = module.p
    a_table = kernel_as_table(e.kernel)
    h1A = cohomology(a_table, module, 1)
    h2Q = cohomology(e.base, module, 2)
    rng = np.random.default_rng(seed)
    section = e.random_section(rng)
    # a-part of each total element relative to the random section
    t = e.total
    n = e.base.order
    kpos = -np.ones(t.order, dtype=np.int64)
    kpos[e.kernel_elements] = np.arange(e.kernel.order)
    apart = np.empty(t.order, dtype=np.int64)
    for l in range(t.order):
        rem = int(t.mul[t.inv[section[e.proj[l]]], l])
        if kpos[rem] < 0:
            raise StablabError("section remainder escapes the kernel")
        apart[l] = kpos[rem]
    cols = []
    for i in range(h1A.struct.rank):
        unit = [0] * h1A.struct.rank
        unit[i] = 1
        chi = h1A.representative(unit)          # table on A, shape (|A|, 1)
        # u(l) = chi(a-part of l); du(l1, l2) descends to a Q-cocycle
        u = chi[apart, 0]
        du = np.empty((n, n), dtype=np.int64)
        s = section
        for x in range(n):
            du[x] = (u[t.mul[s[x], s]] - u[s[x]] - u[s]) % p
        cols.append(h2Q.coords(du[:, :, None]))
    mat = np.array(cols, dtype=np.int64).T
    return mat.reshape(h2Q.struct.rank, h1A.struct.rank)


def transgression_matrix(e: CentralExtension,
                         module: CoefficientModule) -> np.ndarray:
    """tg as a matrix in the same unit-class bases as ``d2_01``."""
    _check_field(module)
    if module.kind == "rationals":
        return np.zeros((0, 0), dtype=np.int64)
    a_table = kernel_as_table(e.kernel)
    h1A = cohomology(a_table, module, 1)
    h2Q = cohomology(e.base, module, 2)
    cols = []
    for i in range(h1A.struct.rank):
        unit = [0] * h1A.struct.rank
        unit[i] = 1
        chi = h1A.representative(unit)
        cols.append(h2Q.coords(_chi_of_cocycle(e, chi, module)))
    return np.array(cols, dtype=np.int64).T.reshape(
        h2Q.struct.rank, h1A.struct.rank)


def e2_page(e: CentralExtension, module: CoefficientModule,
            seed: int = 0) -> E2Page:
    _cap(e)
    _check_field(module)
    a_table = kernel_as_table(e.kernel)
    dq = _field_dims(e.base, module)
    da = _field_dims(a_table, module)
    dims = {(p, q): dq[p] * da[q]
            for p in range(3) for q in range(3) if p + q <= 2}
    mat = d2_01(e, module, seed=seed)
    rank = fp_rank(mat, module.p) if module.kind == "field" else 0
    name = getattr(e.total, "name", "L")
    fname = str(module)
    return E2Page(name, fname, dims, mat, rank)


@dataclass
class FiltrationReport:
    extension_name: str
    field: str
    h2_total: int
    inflation_dim: int                   # E_infinity^{20}
    middle_dim: int                      # E_infinity^{11}
    restriction_dim: int                 # E_infinity^{02}
    sum_matches: bool

    def to_json(self) -> dict:
        return {"extension": self.extension_name, "field": self.field,
                "dim_h2_L": self.h2_total,
                "graded": [self.inflation_dim, self.middle_dim,
                           self.restriction_dim],
                "sum_matches": self.sum_matches}


def h2_filtration(e: CentralExtension,
                  module: CoefficientModule) -> FiltrationReport:
    """Graded dimensions of the filtration of H^2(L,F): the inflation
    image, the middle quotient, and the restriction image."""
    _cap(e)
    _check_field(module)
    name = getattr(e.total, "name", "L")
    if module.kind == "rationals":
        return FiltrationReport(name, str(module), 0, 0, 0, 0, True)
    p = module.p
    a_table = kernel_as_table(e.kernel)
    h2L = cohomology(e.total, module, 2)
    h2Q = cohomology(e.base, module, 2)
    h2A = cohomology(a_table, module, 2)
    nL = h2L.struct.rank
    # inflation image in H^2(L) coordinates
    inf_vecs = []
    for i in range(h2Q.struct.rank):
        unit = [0] * h2Q.struct.rank
        unit[i] = 1
        rep = h2Q.representative(unit)
        inf_vecs.append(h2L.coords(rep[np.ix_(e.proj, e.proj)]))
    inf_dim = fp_rank(np.array(inf_vecs, dtype=np.int64).reshape(-1, nL), p) \
        if inf_vecs else 0
    # restriction H^2(L) -> H^2(A) on the H^2(L) basis
    res_cols = []
    for i in range(nL):
        unit = [0] * nL
        unit[i] = 1
        rep = h2L.representative(unit)
        res_cols.append(h2A.coords(
            rep[np.ix_(e.kernel_elements, e.kernel_elements)]))
    nA = h2A.struct.rank
    res_mat = np.array(res_cols, dtype=np.int64).reshape(nL, nA).T
    res_dim = fp_rank(res_mat, p) if nL else 0
    # the inflation image must die under restriction
    for v in inf_vecs:
        img = (res_mat @ np.array(v, dtype=np.int64)) % p
        if img.any():
            raise StablabError("inflation image survives restriction")
    middle = (nL - res_dim) - inf_dim
    report = FiltrationReport(name, str(module), nL, inf_dim, middle,
                              res_dim, middle >= 0
                              and inf_dim + middle + res_dim == nL)
    return report


def symmetrization(n: int) -> dict:
    """Matrix of x ^ y -> x (x) y - y (x) x from wedge^2 to the tensor
    square of an n-dimensional space, with an injectivity verdict."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mat = np.zeros((n * n, len(pairs)), dtype=np.int64)
    for col, (i, j) in enumerate(pairs):
        mat[i * n + j, col] = 1
        mat[j * n + i, col] = -1
    rank = fp_echelon(mat.T, _RATIONAL_PRIME).rank
    return {"n": n, "matrix": mat, "rank": rank,
            "wedge_dim": len(pairs), "injective": rank == len(pairs)}
