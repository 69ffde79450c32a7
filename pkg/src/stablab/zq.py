"""Vectorized linear algebra over Z/p^k and F_p.

Complements the exact integer routines in ``intmat``: these work on
numpy int64 arrays and scale to the bar-resolution matrices.  Over the
local ring Z/p^k a diagonal form diag(p^{a_i}) always exists and no
divisibility fix-up is needed (every nonzero element is a unit times a
power of p).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StablabError


def valuations(a: np.ndarray, p: int, k: int) -> np.ndarray:
    """Elementwise p-adic valuation of residues mod p^k; val(0) = k."""
    a = np.asarray(a, dtype=np.int64)
    v = np.zeros(a.shape, dtype=np.int64)
    for e in range(1, k + 1):
        v += (a % (p ** e) == 0)
    return v


@dataclass
class LocalSmithForm:
    """L @ A @ R = diag(p^vals) over Z/p^k (transforms invertible mod p^k)."""

    p: int
    k: int
    shape: tuple[int, int]
    diag_vals: np.ndarray          # length min(m,n); entry k encodes 0
    left: np.ndarray | None
    left_inv: np.ndarray | None
    right: np.ndarray | None
    right_inv: np.ndarray | None

    @property
    def q(self) -> int:
        return self.p ** self.k

    def diag_val(self, i: int) -> int:
        """Valuation of the i-th diagonal entry; k for any i (zero block)."""
        if i < len(self.diag_vals):
            return int(self.diag_vals[i])
        return self.k


def smith_mod_prime_power(a, p: int, k: int,
                          want_left: bool = True,
                          want_right: bool = True) -> LocalSmithForm:
    """Diagonalize over Z/p^k with min-valuation pivoting."""
    q = p ** k
    a = np.array(a, dtype=np.int64) % q
    m, n = a.shape
    L = np.eye(m, dtype=np.int64) if want_left else None
    Li = np.eye(m, dtype=np.int64) if want_left else None
    R = np.eye(n, dtype=np.int64) if want_right else None
    Ri = np.eye(n, dtype=np.int64) if want_right else None
    vals = []
    t = 0
    while t < min(m, n):
        sub = a[t:, t:]
        # fast path: unit pivots dominate, so look for valuation 0 first
        unit = np.argwhere(sub % p != 0)
        if len(unit):
            vmin = 0
            i0, j0 = unit[0]
        else:
            v = valuations(sub, p, k)
            vmin = int(v.min())
            if vmin >= k:
                break
            i0, j0 = np.argwhere(v == vmin)[0]
        i0, j0 = int(i0) + t, int(j0) + t
        if i0 != t:
            a[[t, i0]] = a[[i0, t]]
            if want_left:
                L[[t, i0]] = L[[i0, t]]
                Li[:, [t, i0]] = Li[:, [i0, t]]
        if j0 != t:
            a[:, [t, j0]] = a[:, [j0, t]]
            if want_right:
                R[:, [t, j0]] = R[:, [j0, t]]
                Ri[[t, j0]] = Ri[[j0, t]]
        pv = p ** vmin
        u = int(a[t, t]) // pv          # unit mod q (prime to p)
        uinv = pow(u % q, -1, q)
        a[t, :] = (a[t, :] * uinv) % q
        if want_left:
            L[t, :] = (L[t, :] * uinv) % q
            Li[:, t] = (Li[:, t] * u) % q
        # clear the rest of column t
        fcol = a[:, t].copy()
        fcol[t] = 0
        fcol //= pv
        if fcol.any():
            a -= np.outer(fcol, a[t, :])
            a %= q
            if want_left:
                L -= np.outer(fcol, L[t, :])
                L %= q
                Li[:, t] = (Li[:, t] + Li @ fcol) % q
        # clear the rest of row t
        frow = a[t, :].copy()
        frow[t] = 0
        frow //= pv
        if frow.any():
            a[t, :] -= pv * frow        # only row t is affected now
            a[t, :] %= q
            if want_right:
                R -= np.outer(R[:, t], frow)
                R %= q
                Ri[t, :] = (Ri[t, :] + frow @ Ri) % q
        vals.append(vmin)
        t += 1
    return LocalSmithForm(p, k, (m, n), np.array(vals, dtype=np.int64),
                          L, Li, R, Ri)


def solve_mod_prime_power(a, b, p: int, k: int) -> np.ndarray | None:
    """One solution x of a @ x = b over Z/p^k, or None."""
    q = p ** k
    sf = smith_mod_prime_power(a, p, k, want_left=True, want_right=True)
    m, n = sf.shape
    c = (sf.left @ (np.asarray(b, dtype=np.int64) % q)) % q
    y = np.zeros(n, dtype=np.int64)
    for i in range(m):
        av = sf.diag_val(i) if i < n else k
        ci = int(c[i])
        if i >= n or av >= k:
            if ci % q:
                return None
            continue
        if ci % (p ** av):
            return None
        y[i] = (ci // (p ** av)) % (p ** (k - av))
    return (sf.right @ y) % q


class FpEchelon:
    """Incremental reduced row-echelon basis over F_p.

    Rows are fed in chunks; reduction against the existing basis is one
    float64 matmul (exact: entries < p, inner dimension bounded so
    products stay below 2^53).
    """

    def __init__(self, ncols: int, p: int):
        self.ncols = ncols
        self.p = p
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, chunk: np.ndarray) -> np.ndarray:
        """Return the chunk reduced modulo the current row space."""
        p = self.p
        chunk = np.asarray(chunk, dtype=np.int64) % p
        if self.pivots:
            coef = chunk[:, self.pivots].astype(np.float64)
            chunk = (chunk - (coef @ self.rows.astype(np.float64)
                              ).astype(np.int64)) % p
        return chunk

    def add_rows(self, chunk: np.ndarray) -> None:
        p = self.p
        chunk = self.reduce(chunk)
        live = np.nonzero(chunk.any(axis=1))[0]
        for i in live:
            row = chunk[i] % p
            # re-reduce against basis rows added after the matmul above
            for j, c in enumerate(self.pivots):
                if row[c]:
                    row = (row - row[c] * self.rows[j]) % p
            if not row.any():
                continue
            c = int(np.nonzero(row)[0][0])
            row = (row * pow(int(row[c]), -1, p)) % p
            if len(self.rows):
                coef = self.rows[:, c].copy()
                self.rows = (self.rows - np.outer(coef, row)) % p
            self.rows = np.vstack([self.rows, row[None, :]])
            self.pivots.append(c)

    def nullspace(self) -> np.ndarray:
        """Basis of the right nullspace of the accumulated row space,
        as columns of an (ncols x nullity) array."""
        p = self.p
        free = [c for c in range(self.ncols) if c not in set(self.pivots)]
        basis = np.zeros((self.ncols, len(free)), dtype=np.int64)
        for idx, c in enumerate(free):
            basis[c, idx] = 1
            for j, pc in enumerate(self.pivots):
                basis[pc, idx] = (-self.rows[j, c]) % p
        return basis

    def contains(self, vec: np.ndarray) -> bool:
        return not self.reduce(np.asarray(vec)[None, :]).any()


def fp_echelon(a, p: int, chunk_size: int = 4096) -> FpEchelon:
    """Echelonize a dense matrix (rows = vectors) over F_p."""
    a = np.asarray(a, dtype=np.int64)
    ech = FpEchelon(a.shape[1], p)
    for lo in range(0, a.shape[0], chunk_size):
        ech.add_rows(a[lo:lo + chunk_size])
    return ech


def fp_rank(a, p: int) -> int:
    return fp_echelon(a, p).rank


def fp_rank_chunks(chunks, ncols: int, p: int) -> FpEchelon:
    """Echelonize a stream of row chunks without materializing the matrix."""
    ech = FpEchelon(ncols, p)
    for chunk in chunks:
        ech.add_rows(chunk)
    return ech


def fp_in_colspace(cols: np.ndarray, vec: np.ndarray, p: int) -> bool:
    """Is vec in the column space of cols over F_p?"""
    ech = fp_echelon(cols.T, p)
    return ech.contains(vec)


def fp_solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution of a @ x = b over F_p, or None (dense, small systems)."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    m, n = a.shape
    aug = np.concatenate([a, b.reshape(m, 1)], axis=1)
    piv: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        rows = np.nonzero(aug[r:, c])[0]
        if not len(rows):
            continue
        i = r + int(rows[0])
        aug[[r, i]] = aug[[i, r]]
        aug[r] = (aug[r] * pow(int(aug[r, c]), -1, p)) % p
        mask = np.nonzero(aug[:, c])[0]
        for t in mask:
            if t != r:
                aug[t] = (aug[t] - aug[t, c] * aug[r]) % p
        piv.append((r, c))
        r += 1
        if r == m:
            break
    if (aug[r:, n] % p).any():
        return None
    x = np.zeros(n, dtype=np.int64)
    for rr, cc in piv:
        x[cc] = aug[rr, n] % p
    return x
