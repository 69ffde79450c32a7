"""Cross-check suites over the group catalog.

Each suite fans an independent-oracle comparison out over the catalog
(or the built-in extension catalog) and reports one case per group.  A
suite passes only if every case passes; cases are sorted by name so
output is deterministic.
"""

from __future__ import annotations

import time

import numpy as np

from .catalog import catalog_group, catalog_names
from .cohomology import CoefficientModule
from .errors import UnknownEntry
from .extensions import (extension_catalog, five_term_check, lemma_i_check,
                         split_identity_check)
from .extsq import check_pair_relations, exterior_square
from .rs import relation_module
from .spectral import (d2_01, h2_filtration, symmetrization,
                       transgression_matrix)

SUITES = ("miller", "split", "lemma-i", "five-term", "spectral", "all")


def _case(name: str, ok: bool, **detail) -> dict:
    return {"case": name, "ok": bool(ok), **detail}


def verify_miller(max_order: int = 16) -> list[dict]:
    """Exterior-square kernels against the presentation-based multiplier."""
    out = []
    for name in catalog_names(max_order):
        g = catalog_group(name)
        sq = exterior_square(g)
        hopf = relation_module(g.presentation).h2
        ok = (tuple(sq.kernel.invariant_factors)
              == tuple(hopf.invariant_factors)) and check_pair_relations(sq)
        out.append(_case(name, ok,
                         kernel=list(sq.kernel.invariant_factors),
                         multiplier=list(hopf.invariant_factors),
                         extsq_order=sq.table.order))
    return sorted(out, key=lambda c: c["case"])


_SPLIT_MODULES = ("Z/2", "Z/3", "Z/4")


def verify_split(max_order: int = 16) -> list[dict]:
    out = []
    for name in catalog_names(max_order):
        g = catalog_group(name)
        rm = relation_module(g.presentation)
        for spec in _SPLIT_MODULES:
            res = split_identity_check(
                g, CoefficientModule.parse(spec), rm=rm)
            out.append(_case(f"{name}/{spec}", res["ok"],
                             direct_sum=res["direct_sum"],
                             identity_on_hom=res["identity_on_hom"]))
    return sorted(out, key=lambda c: c["case"])


def verify_lemma_i(max_order: int = 16) -> list[dict]:
    out = []
    for name in catalog_names(max_order):
        g = catalog_group(name)
        for spec in ("Z/2", "Z/3"):
            res = lemma_i_check(g, CoefficientModule.parse(spec))
            out.append(_case(f"{name}/{spec}", res["ok"],
                             classes_checked=res["classes_checked"]))
    return sorted(out, key=lambda c: c["case"])


def verify_five_term(max_order: int = 16) -> list[dict]:
    out = []
    for name, e in extension_catalog():
        if e.total.order > max_order:
            continue
        for spec in ("F2", "F3", "Z/6"):
            rep = five_term_check(e, CoefficientModule.parse(spec))
            out.append(_case(f"{name}/{spec}", rep.ok,
                             nodes=rep.nodes))
    return sorted(out, key=lambda c: c["case"])


def verify_spectral(max_order: int = 16) -> list[dict]:
    out = []
    for name, e in extension_catalog():
        if e.total.order > max_order:
            continue
        for p in (2, 3):
            module = CoefficientModule.prime_field(p)
            same = np.array_equal(d2_01(e, module, seed=p),
                                  transgression_matrix(e, module))
            filt = h2_filtration(e, module)
            out.append(_case(f"{name}/F{p}", same and filt.sum_matches,
                             d2_equals_tg=bool(same),
                             filtration_sum=filt.sum_matches))
    for n in range(2, 7):
        s = symmetrization(n)
        out.append(_case(f"symmetrization/n={n}", s["injective"],
                         rank=s["rank"], wedge_dim=s["wedge_dim"]))
    return sorted(out, key=lambda c: c["case"])


_RUNNERS = {
    "miller": verify_miller,
    "split": verify_split,
    "lemma-i": verify_lemma_i,
    "five-term": verify_five_term,
    "spectral": verify_spectral,
}


def run_suite(suite: str, max_order: int = 16) -> dict:
    if suite not in SUITES:
        raise UnknownEntry(f"unknown suite {suite!r}; choose from {SUITES}")
    names = list(_RUNNERS) if suite == "all" else [suite]
    suites = {}
    t0 = time.monotonic()
    for nm in names:
        cases = _RUNNERS[nm](max_order)
        suites[nm] = {"cases": cases,
                      "passed": sum(c["ok"] for c in cases),
                      "total": len(cases),
                      "ok": all(c["ok"] for c in cases)}
    return {"suite": suite, "max_order": max_order,
            "elapsed_seconds": round(time.monotonic() - t0, 3),
            "suites": suites,
            "ok": all(s["ok"] for s in suites.values())}
