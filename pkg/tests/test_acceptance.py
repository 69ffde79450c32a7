"""End-to-end acceptance checks.

Each test covers one numbered criterion, enforces its stated tolerance
and runtime budget, and prints a single PASS line (shown with -s or on
failure).
"""

import time

import numpy as np
import pytest

from stablab.catalog import catalog_group, catalog_names
from stablab.cohomology import CoefficientModule, bar_h2
from stablab.extensions import (extension_catalog, five_term_check,
                                lemma_i_check, split_identity_check)
from stablab.extsq import miller_kernel
from stablab.rs import relation_module
from stablab.spectral import (d2_01, h2_filtration, symmetrization,
                              transgression_matrix)
from stablab.stability import (FROBENIUS, NormKind, SolverConfig,
                               UnitaryTuple, alpha_threshold, defect,
                               free_commutator_presentation, matrix_norm,
                               perturb, quotient_transfer_experiment,
                               random_unitary, voiculescu_pair)
from stablab.symspace import (catalog_entry, exception_entries,
                              instability_verdict,
                              is_odd_rational_homology_sphere, load_catalog,
                              poincare_polynomial)
from stablab.words import Word


def _report(n, detail):
    print(f"criterion {n}: PASS — {detail}")


def test_criterion_01_multiplier_oracle_agreement():
    t0 = time.monotonic()
    known = {"C2": (), "C3": (), "C4": (),
             "V4": (2,), "C3xC3": (3,), "C4xC4": (4,),
             "Q8": (), "D4": (2,), "A4": (2,)}
    names = catalog_names(16)
    assert "A4" in names
    for name in names:
        g = catalog_group(name)
        hopf = relation_module(g.presentation).h2.invariant_factors
        bar = bar_h2(g).invariant_factors
        assert hopf == bar, (name, hopf, bar)
        if name in known:
            assert hopf == known[name], name
    elapsed = time.monotonic() - t0
    assert elapsed < 60
    _report(1, f"Hopf = bar H2 on {len(names)} groups in {elapsed:.1f}s")


def test_criterion_02_miller_theorem():
    t0 = time.monotonic()
    names = catalog_names(16)
    for name in names:
        g = catalog_group(name)
        hopf = relation_module(g.presentation).h2
        assert miller_kernel(g).invariant_factors == hopf.invariant_factors
    elapsed = time.monotonic() - t0
    assert elapsed < 600
    _report(2, f"ker(id-bar) = H2 on {len(names)} groups in {elapsed:.1f}s")


def test_criterion_03_five_term_exactness():
    cat = extension_catalog()
    names = [n for n, _ in cat]
    assert len(cat) >= 10
    assert "C4/C2-carry" in names
    assert "Heisenberg-2" in names and "Heisenberg-3" in names
    mods = [CoefficientModule.prime_field(2),
            CoefficientModule.prime_field(3),
            CoefficientModule.parse("Z/6")]
    checked = 0
    for name, e in cat:
        for m in mods:
            rep = five_term_check(e, m)
            assert rep.ok, (name, str(m), rep.to_json())
            checked += 1
    _report(3, f"exact at all interior nodes, {checked} "
               "(extension, module) pairs, zero failures")


def test_criterion_04_split_identity():
    for name in ("V4", "C4", "Q8", "S3", "D4"):
        g = catalog_group(name)
        for spec in ("Z/2", "Z/4", "Z/3"):
            res = split_identity_check(g, CoefficientModule.parse(spec))
            assert res["ok"], (name, spec, res)
    _report(4, "h o tg = id and H2 = im(tg) (+) ker(h) on 5 groups x "
               "3 modules")


def test_criterion_05_lemma_i():
    for name in ("S3", "D4", "A4"):
        g = catalog_group(name)
        for spec in ("Z/2", "Z/3"):
            res = lemma_i_check(g, CoefficientModule.parse(spec))
            assert res["ok"], (name, spec, res)
    _report(5, "tg o h = restriction classwise on {S3, D4, A4} x "
               "{Z/2, Z/3}")


def test_criterion_06_spectral_identities():
    cat = extension_catalog()
    for name, e in cat:
        for p in (2, 3, 5, 7):
            module = CoefficientModule.prime_field(p)
            assert np.array_equal(d2_01(e, module),
                                  transgression_matrix(e, module)), (name, p)
            assert h2_filtration(e, module).sum_matches, (name, p)
    for n in range(2, 9):
        assert symmetrization(n)["injective"], n
    _report(6, f"d2 = tg and filtration sums on {len(cat)} extensions, "
               "sigma injective for n <= 8")


def test_criterion_07_symmetric_space_catalog():
    assert sorted(exception_entries()) == ["S3", "S5", "S7", "S9",
                                           "SU3_SO3"]
    groups = {catalog_entry(n).group for n in exception_entries()}
    assert groups == {"SL(3,R)", "SO(3,1)", "SO(5,1)", "SO(7,1)",
                      "SO(9,1)"}
    p16 = poincare_polynomial(catalog_entry("SU16_SO16"))
    assert p16.coefficient(14) == 1
    names = list(load_catalog())
    for a in names:
        for b in names:
            v = instability_verdict([a, b])
            assert v["verdict"] == "cocompact lattices not operator stable"
    _report(7, "odd rational homology spheres, exception set, SU16/SO16 "
               "degree 14, and all 2-factor products verified")


def test_criterion_08_norm_numerics():
    rng = np.random.default_rng(0)
    s2 = NormKind.parse("schatten:2")
    hs = NormKind.parse("hs")
    for n in range(2, 17):
        a = (rng.standard_normal((1000, n, n))
             + 1j * rng.standard_normal((1000, n, n)))
        sv = np.linalg.svd(a, compute_uv=False)
        frob = np.sqrt((sv ** 2).sum(axis=1))
        for m, f in zip(a, frob):
            assert abs(np.linalg.norm(m) - f) < 1e-12 * max(1.0, f)
            assert abs(matrix_norm(m, s2) - f) < 1e-12 * max(1.0, f)
            assert abs(matrix_norm(m, hs) - f / np.sqrt(n)) < 1e-12
    p = free_commutator_presentation()
    op = NormKind.parse("operator")
    for n in range(2, 65):
        d = defect(p, voiculescu_pair(n), op).max_defect
        assert abs(d - 2 * np.sin(np.pi / n)) < 1e-10, n
    _report(8, "schatten(2)/HS identities on 15000 random matrices; "
               "Voiculescu defect = 2 sin(pi/n) for n <= 64")


def test_criterion_09_solver_recovery():
    from stablab.report import recovery_experiment
    t0 = time.monotonic()
    total = passed = 0
    for case, n in (("cyclic:3", 12), ("S3", 12), ("z2", 12)):
        tb = time.monotonic()
        e = recovery_experiment(case, n, deltas=[1e-2, 1e-3], trials=10,
                                seed=11)
        assert time.monotonic() - tb < 300, case
        total += e["total"]
        passed += e["passed"]
    assert passed >= 0.95 * total, (passed, total)
    _report(9, f"defect <= 1e-8 within 10*delta on {passed}/{total} runs "
               f"in {time.monotonic() - t0:.1f}s")


def test_criterion_10_alpha_threshold_and_transfer():
    assert abs(alpha_threshold(catalog_group("C2")) - 2) < 1e-8
    assert abs(alpha_threshold(catalog_group("C3")) - np.sqrt(3)) < 1e-8
    assert abs(alpha_threshold(catalog_group("V4")) - 2) < 1e-8
    from stablab.presentation import parse_presentation
    pres = parse_presentation("group C4\ngens a\nrel a^4\n")
    rng = np.random.default_rng(12)
    u = np.diag([1, -1, 1, -1]).astype(complex)
    conj = random_unitary(4, rng)
    t = perturb(UnitaryTuple((conj @ u @ conj.conj().T,)), 1e-3, rng)
    res = quotient_transfer_experiment(pres, [Word((1, 1))], t,
                                       cfg=SolverConfig(seed=12))
    assert res["ok"] and res["kills_kernel"]
    _report(10, "alpha values to 1e-8; Z/4 -> Z/2 quotient transfer "
                "succeeds")


def test_criterion_11_verify_all(capsys):
    from stablab.cli import main
    t0 = time.monotonic()
    code = main(["verify", "--suite", "all", "--max-order", "16"])
    capsys.readouterr()
    elapsed = time.monotonic() - t0
    assert code == 0
    assert elapsed < 1800
    _report(11, f"verify --suite all --max-order 16 exited 0 in "
                f"{elapsed:.1f}s")
