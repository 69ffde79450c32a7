"""Numerical stability lab: norms, defects, and perturbation solving.

Almost-representations of a finite presentation are tuples of unitary
matrices; their quality is the worst relator defect in a bi-invariant
norm.  The solver runs Riemannian gradient descent on the product of
unitary groups against the smooth Frobenius-squared objective (whatever
norm is requested for reporting) with polar retraction and backtracking.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (DecompositionFailure, DimensionMismatch,
                     StablabError, ThresholdViolation)
from .gtable import GroupTable
from .presentation import Presentation
from .words import Word


# -- norms ---------------------------------------------------------------

@dataclass(frozen=True)
class NormKind:
    kind: str                      # frobenius | hs | operator | schatten
    p: float | None = None

    @staticmethod
    def parse(spec: str) -> "NormKind":
        s = spec.strip().lower()
        if s in ("frobenius", "f"):
            return NormKind("frobenius")
        if s in ("hs", "hilbert-schmidt"):
            return NormKind("hs")
        if s in ("operator", "op"):
            return NormKind("operator")
        if s.startswith("schatten:"):
            p = float(s.split(":", 1)[1])
            if p <= 0:
                raise ValueError("schatten exponent must be positive")
            return NormKind("schatten", p)
        raise ValueError(f"unknown norm {spec!r}")

    def __str__(self) -> str:
        return self.kind if self.p is None else f"schatten:{self.p:g}"


FROBENIUS = NormKind("frobenius")


def matrix_norm(a: np.ndarray, kind: NormKind = FROBENIUS) -> float:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("matrix must be square")
    if kind.kind == "frobenius":
        return float(np.linalg.norm(a))
    if kind.kind == "hs":
        return float(np.linalg.norm(a)) / np.sqrt(a.shape[0])
    sv = np.linalg.svd(a, compute_uv=False)
    if kind.kind == "operator":
        return float(sv[0]) if len(sv) else 0.0
    return float((sv ** kind.p).sum() ** (1.0 / kind.p))


# -- unitary tuples ------------------------------------------------------

@dataclass(frozen=True)
class UnitaryTuple:
    matrices: tuple[np.ndarray, ...]

    @property
    def dimension(self) -> int:
        return self.matrices[0].shape[0] if self.matrices else 0

    def unitarity_defect(self) -> float:
        n = self.dimension
        return max((float(np.linalg.norm(u.conj().T @ u - np.eye(n)))
                    for u in self.matrices), default=0.0)

    def validate(self, tol: float = 1e-12) -> None:
        if self.unitarity_defect() > tol:
            raise StablabError("matrices are not unitary to tolerance")

    def evaluate(self, w: Word) -> np.ndarray:
        n = self.dimension
        out = np.eye(n, dtype=complex)
        for a in w.letters:
            u = self.matrices[abs(a) - 1]
            out = out @ (u if a > 0 else u.conj().T)
        return out


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def perturb(t: UnitaryTuple, delta: float,
            rng: np.random.Generator) -> UnitaryTuple:
    """Multiply each matrix by exp(delta K), K random anti-Hermitian of
    unit Frobenius norm."""
    out = []
    for u in t.matrices:
        n = u.shape[0]
        z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        k = (z - z.conj().T) / 2
        k /= np.linalg.norm(k)
        out.append(u @ scipy.linalg.expm(delta * k))
    return UnitaryTuple(tuple(out))


@dataclass
class DefectReport:
    norm: str
    per_relator: list[float]
    max_defect: float

    def to_json(self) -> dict:
        return {"norm": self.norm, "per_relator": self.per_relator,
                "max_defect": self.max_defect}


def defect(p: Presentation, t: UnitaryTuple,
           kind: NormKind = FROBENIUS) -> DefectReport:
    if len(t.matrices) != p.ngens:
        raise DimensionMismatch(
            f"{p.ngens} generators but {len(t.matrices)} matrices")
    eye = np.eye(t.dimension)
    per = [matrix_norm(t.evaluate(r) - eye, kind) for r in p.relators]
    return DefectReport(str(kind), per, max(per, default=0.0))


def voiculescu_pair(n: int) -> UnitaryTuple:
    """Shift and clock matrices: an almost-commuting pair far from any
    commuting pair in operator norm."""
    if n < 2:
        raise ValueError("need n >= 2")
    shift = np.zeros((n, n), dtype=complex)
    shift[np.arange(1, n) % n, np.arange(n - 1)] = 1
    shift[0, n - 1] = 1
    clock = np.diag(np.exp(2j * np.pi * np.arange(n) / n))
    return UnitaryTuple((shift, clock))


def free_commutator_presentation() -> Presentation:
    a, b = Word.gen(0), Word.gen(1)
    return Presentation(("a", "b"), (a.commutator(b),), name="Z2")


# -- solver --------------------------------------------------------------

@dataclass
class SolverConfig:
    max_iterations: int = 3000
    initial_step: float = 0.25
    tolerance: float = 1e-9        # on the max Frobenius relator defect
    seed: int = 0

    def __post_init__(self):
        if self.tolerance <= 0 or self.initial_step <= 0:
            raise ValueError("tolerances must be positive")


def _polar(a: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(a)
    return u @ vh


def _objective_and_grads(p: Presentation, mats: list[np.ndarray]):
    """Frobenius-squared objective and Euclidean gradients per generator."""
    n = mats[0].shape[0]
    eye = np.eye(n)
    obj = 0.0
    grads = [np.zeros((n, n), dtype=complex) for _ in mats]
    maxdef = 0.0
    for r in p.relators:
        letters = r.letters
        factors = [mats[abs(a) - 1] if a > 0 else
                   mats[abs(a) - 1].conj().T for a in letters]
        # prefix[i] = product of factors[:i]; suffix[i] = product factors[i+1:]
        m = len(factors)
        prefix = [np.eye(n, dtype=complex)]
        for f in factors:
            prefix.append(prefix[-1] @ f)
        suffix = [np.eye(n, dtype=complex)]
        for f in reversed(factors):
            suffix.append(f @ suffix[-1])
        suffix.reverse()
        prod = prefix[-1]
        diff = prod - eye
        d = float(np.linalg.norm(diff))
        obj += d * d
        maxdef = max(maxdef, d)
        for i, a in enumerate(letters):
            A = prefix[i]
            B = suffix[i + 1]
            g = abs(a) - 1
            if a > 0:
                grads[g] += A.conj().T @ diff @ B.conj().T
            else:
                grads[g] += (B @ diff.conj().T @ A)
    return obj, grads, maxdef


def perturbation_solve(p: Presentation, t: UnitaryTuple,
                       kind: NormKind = FROBENIUS,
                       cfg: SolverConfig | None = None) -> dict:
    """Project an almost-representation to a nearby representation.

    Riemannian gradient descent with polar retraction; the objective is
    always the sum of squared Frobenius relator defects (smooth), while
    distances are reported in the requested norm.  Non-convergence is a
    status in the result, not an exception.
    """
    cfg = cfg or SolverConfig()
    if len(t.matrices) != p.ngens:
        raise DimensionMismatch("generator count mismatch")
    mats = [u.copy() for u in t.matrices]
    step = cfg.initial_step
    obj, grads, maxdef = _objective_and_grads(p, mats)
    trace = [obj]
    converged = maxdef <= cfg.tolerance
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        if maxdef <= cfg.tolerance:
            converged = True
            break
        # Riemannian direction: project gradient to the tangent space
        dirs = [g - u @ g.conj().T @ u for g, u in zip(grads, mats)]
        gnorm2 = sum(float(np.linalg.norm(d)) ** 2 for d in dirs)
        if gnorm2 == 0:
            break
        while step > 1e-18:
            cand = [_polar(u - step * d) for u, d in zip(mats, dirs)]
            cobj, cgrads, cmax = _objective_and_grads(p, cand)
            if cobj <= obj - 0.25 * step * gnorm2:
                mats, obj, grads, maxdef = cand, cobj, cgrads, cmax
                step *= 1.5
                break
            step *= 0.5
        else:
            break
        trace.append(obj)
        converged = maxdef <= cfg.tolerance
    result = UnitaryTuple(tuple(mats))
    moved = [matrix_norm(a - b, kind)
             for a, b in zip(result.matrices, t.matrices)]
    return {
        "tuple": result,
        "distance_moved": moved,
        "final_defect": defect(p, result, kind).to_json(),
        "final_defect_frobenius": maxdef,
        "iterations": iterations,
        "trace": trace,
        "converged": converged,
        "status": "converged" if converged else "NoConvergence",
        "objective": "frobenius-squared surrogate",
        "seed": cfg.seed,
    }


# -- alpha threshold -----------------------------------------------------

def regular_representation(g: GroupTable) -> list[np.ndarray]:
    n = g.order
    mats = []
    for x in range(n):
        m = np.zeros((n, n))
        m[g.mul[x, np.arange(n)], np.arange(n)] = 1
        mats.append(m)
    return mats


def _invariant_splitting(mats: list[np.ndarray], basis: np.ndarray,
                         rng: np.random.Generator, tol: float
                         ) -> list[np.ndarray]:
    """Split a subrepresentation (columns of basis) into irreducible
    blocks by eigen-splitting a group-averaged random Hermitian."""
    d = basis.shape[1]
    if d == 0:
        return []
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = (z + z.conj().T) / 2
    sub = [basis.conj().T @ m @ basis for m in mats]
    avg = sum(s @ h @ s.conj().T for s in sub) / len(mats)
    avg = (avg + avg.conj().T) / 2
    vals, vecs = np.linalg.eigh(avg)
    # group eigenvalues into clusters
    clusters = []
    start = 0
    for i in range(1, d + 1):
        if i == d or vals[i] - vals[i - 1] > tol:
            clusters.append(vecs[:, start:i])
            start = i
    if len(clusters) == 1:
        # scalar invariant operator: the block is irreducible
        scal = avg - (np.trace(avg) / d) * np.eye(d)
        if np.linalg.norm(scal) > np.sqrt(d) * tol:
            raise DecompositionFailure("non-scalar invariant operator "
                                       "survived eigen-splitting")
        return [basis]
    out = []
    for c in clusters:
        out.extend(_invariant_splitting(mats, basis @ c, rng, tol))
    return out


def irreducible_blocks(g: GroupTable, seed: int = 0,
                       tol: float = 1e-8) -> list[list[np.ndarray]]:
    """Irreducible summands of the regular representation (numerical)."""
    mats = regular_representation(g)
    rng = np.random.default_rng(seed)
    blocks = _invariant_splitting(mats, np.eye(g.order, dtype=complex),
                                  rng, tol)
    if sum(b.shape[1] ** 2 for b in blocks) < g.order:
        # the regular rep contains each irreducible dim-many times, so the
        # squared dimensions can only fall short if splitting stalled
        pass
    total = sum(b.shape[1] for b in blocks)
    if total != g.order:
        raise DecompositionFailure("block dimensions do not sum to |N|")
    return [[b.conj().T @ m @ b for m in mats] for b in blocks]


def alpha_threshold(g: GroupTable, seed: int = 0) -> float:
    """min over nontrivial irreducibles of max_n ||pi(n) - I||_F."""
    if g.order > 64:
        raise StablabError("alpha threshold capped at order 64")
    best = None
    for block in irreducible_blocks(g, seed=seed):
        d = block[0].shape[0]
        eye = np.eye(d)
        worst = max(float(np.linalg.norm(m - eye)) for m in block)
        if worst < 1e-8:
            continue                      # trivial representation
        best = worst if best is None else min(best, worst)
    if best is None:
        raise DecompositionFailure("no nontrivial irreducible found")
    # cross-seed stability check
    rng2 = seed + 104729
    second = None
    for block in irreducible_blocks(g, seed=rng2):
        d = block[0].shape[0]
        eye = np.eye(d)
        worst = max(float(np.linalg.norm(m - eye)) for m in block)
        if worst < 1e-8:
            continue
        second = worst if second is None else min(second, worst)
    if second is None or abs(second - best) > 1e-8:
        raise DecompositionFailure("alpha threshold unstable across seeds")
    return best


# -- quotient transfer ---------------------------------------------------

def quotient_transfer_experiment(p: Presentation,
                                 n_words: list[Word],
                                 t: UnitaryTuple,
                                 cfg: SolverConfig | None = None,
                                 kind: NormKind = FROBENIUS) -> dict:
    """Solve over the big group, then certify the result kills the
    central subgroup and descends to the quotient.

    The margin logic: with alpha the threshold of N, a representation
    whose distance to t plus t's defect on the N-relators stays below
    alpha must be trivial on N.
    """
    from .gtable import group_table, subgroup_table

    cfg = cfg or SolverConfig()
    g = group_table(p)
    images = [g.evaluate(w) for w in n_words]
    elems = g.subgroup_closure(images)
    for x in elems:
        if not (g.mul[x, :] == g.mul[:, x]).all():
            raise StablabError("subgroup is not central")
    n_table, _ = subgroup_table(g, elems)
    alpha = alpha_threshold(n_table, seed=cfg.seed)
    # margin check on the input: defect on the N-bar relators
    eye = np.eye(t.dimension)
    n_defects = [matrix_norm(t.evaluate(w) - eye, FROBENIUS)
                 for w in n_words]
    d_rel = defect(p, t, FROBENIUS).max_defect
    if max(n_defects, default=0.0) + d_rel > alpha / 2:
        raise ThresholdViolation(
            f"input defect {max(n_defects):.3g}+{d_rel:.3g} exceeds "
            f"alpha/2 = {alpha / 2:.3g}")
    solved = perturbation_solve(p, t, kind, cfg)
    rho = solved["tuple"]
    n_final = [matrix_norm(rho.evaluate(w) - eye, FROBENIUS)
               for w in n_words]
    kills_n = max(n_final, default=0.0) < alpha
    # the descended tuple is just rho read as a tuple for the quotient
    quotient_pres = Presentation(
        p.generators, tuple(p.relators) + tuple(n_words),
        name=f"{p.name}-quotient")
    q_defect = defect(quotient_pres, rho, kind)
    return {
        "alpha": alpha,
        "input_defect": d_rel,
        "n_word_defects": n_defects,
        "solver": {k: v for k, v in solved.items() if k != "tuple"},
        "final_n_defects": n_final,
        "kills_kernel": kills_n,
        "quotient_defect": q_defect.to_json(),
        "distance_to_input": [matrix_norm(a - b, kind) for a, b in
                              zip(rho.matrices, t.matrices)],
        "tuple": rho,
        "ok": kills_n and solved["converged"],
    }
