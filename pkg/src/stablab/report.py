"""Batch perturbation-recovery experiments and file reports.

An experiment perturbs a genuine representation at several magnitudes,
runs the solver on each trial, and collects one row per run.  Reports
are written as a delimited results.csv plus one matplotlib PNG per
perturbation magnitude showing the objective traces.
"""

from __future__ import annotations

import csv
import pathlib

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .catalog import catalog_group, catalog_presentation  # noqa: E402
from .presentation import Presentation, parse_presentation  # noqa: E402
from .words import Word  # noqa: E402
from .stability import (FROBENIUS, NormKind, SolverConfig,  # noqa: E402
                        UnitaryTuple, defect, perturb, perturbation_solve,
                        random_unitary, regular_representation)


def base_tuple(case: str, n: int,
               rng: np.random.Generator) -> tuple[Presentation, UnitaryTuple]:
    """A genuine n-dimensional unitary representation for a named case.

    Cases: "cyclic:k" (random k-th roots of unity), "z2" (commuting
    random phases), or any catalog group name (conjugated block-diagonal
    copies of its regular representation).
    """
    conj = random_unitary(n, rng)
    if case.startswith("cyclic:"):
        k = int(case.split(":", 1)[1])
        pres = parse_presentation(
            f"group C{k}\ngens a\nrel a^{k}\n")
        phases = np.exp(2j * np.pi * rng.integers(0, k, size=n) / k)
        mats = [conj @ np.diag(phases) @ conj.conj().T]
    elif case == "z2":
        pres = Presentation(("a", "b"), (Word((1, 2, -1, -2)),), name="Z2")
        mats = [conj @ np.diag(np.exp(2j * np.pi * rng.random(n)))
                @ conj.conj().T for _ in range(2)]
    else:
        pres = catalog_presentation(case)
        g = catalog_group(case)
        if n % g.order:
            raise ValueError(f"dimension {n} not a multiple of |{case}| "
                             f"= {g.order}")
        reg = regular_representation(g)
        mats = []
        for gi in g.gen_images:
            block = np.asarray(reg[int(gi)], dtype=complex)
            full = np.kron(np.eye(n // g.order), block)
            mats.append(conj @ full @ conj.conj().T)
    return pres, UnitaryTuple(tuple(mats))


def recovery_experiment(case: str, n: int,
                        deltas: list[float] | None = None,
                        trials: int = 5,
                        kind: NormKind = FROBENIUS,
                        seed: int = 0,
                        cfg: SolverConfig | None = None) -> dict:
    deltas = deltas or [1e-2, 1e-3]
    rng = np.random.default_rng(seed)
    pres, t0 = base_tuple(case, n, rng)
    rows = []
    traces = {}
    for delta in deltas:
        traces[delta] = []
        for trial in range(trials):
            t = perturb(t0, delta, rng)
            run_cfg = cfg or SolverConfig(seed=seed)
            r = perturbation_solve(pres, t, kind, run_cfg)
            rows.append({
                "case": case,
                "n": n,
                "norm": str(kind),
                "delta": delta,
                "trial": trial,
                "initial_defect": defect(pres, t, kind).max_defect,
                "final_defect": r["final_defect"]["max_defect"],
                "distance_moved": max(r["distance_moved"], default=0.0),
                "iterations": r["iterations"],
                "converged": r["converged"],
            })
            traces[delta].append(r["trace"])
    passed = sum(1 for row in rows
                 if row["converged"]
                 and row["distance_moved"] <= 10 * row["delta"])
    return {"case": case, "n": n, "norm": str(kind), "seed": seed,
            "rows": rows, "traces": traces,
            "passed": passed, "total": len(rows)}


def write_report(experiment: dict, outdir: str) -> list[str]:
    """Write results.csv and per-delta objective-trace PNGs; return paths."""
    out = pathlib.Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    rows = experiment["rows"]
    csv_path = out / "results.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    written.append(str(csv_path))
    for delta, trs in experiment["traces"].items():
        fig, ax = plt.subplots(figsize=(6, 4))
        for i, tr in enumerate(trs):
            ax.semilogy(np.maximum(tr, 1e-300), label=f"trial {i}")
        ax.set_xlabel("iteration")
        ax.set_ylabel("objective")
        ax.set_title(f"{experiment['case']} n={experiment['n']} "
                     f"delta={delta:g}")
        ax.legend(fontsize="small")
        fig.tight_layout()
        png = out / f"trace_{experiment['case'].replace(':', '')}"
        png = png.with_name(png.name + f"_d{delta:g}.png")
        fig.savefig(png, dpi=120)
        plt.close(fig)
        written.append(str(png))
    return written
