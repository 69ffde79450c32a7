import numpy as np
import pytest

from stablab.catalog import catalog_group, catalog_presentation
from stablab.errors import (DimensionMismatch, StablabError,
                            ThresholdViolation)
from stablab.presentation import parse_presentation
from stablab.stability import (FROBENIUS, NormKind, SolverConfig,
                               UnitaryTuple, alpha_threshold, defect,
                               free_commutator_presentation,
                               irreducible_blocks, matrix_norm, perturb,
                               perturbation_solve,
                               quotient_transfer_experiment, random_unitary,
                               regular_representation, voiculescu_pair)
from stablab.words import Word

OP = NormKind.parse("operator")
HS = NormKind.parse("hs")


def _rand(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def test_norm_parse():
    assert str(NormKind.parse("schatten:1.5")) == "schatten:1.5"
    assert NormKind.parse("hilbert-schmidt").kind == "hs"
    with pytest.raises(ValueError):
        NormKind.parse("nuclear")
    with pytest.raises(ValueError):
        NormKind.parse("schatten:-1")


def test_norm_closed_forms():
    a = 2 * np.eye(3)
    assert matrix_norm(a, OP) == pytest.approx(2)
    assert matrix_norm(a, FROBENIUS) == pytest.approx(2 * np.sqrt(3))
    assert matrix_norm(a, HS) == pytest.approx(2)
    assert matrix_norm(a, NormKind.parse("schatten:4")) \
        == pytest.approx(2 * 3 ** 0.25)
    assert matrix_norm(np.zeros((4, 4)), OP) == 0


def test_norm_identities_random():
    rng = np.random.default_rng(0)
    s2 = NormKind.parse("schatten:2")
    s1 = NormKind.parse("schatten:1")
    for n in range(2, 9):
        for _ in range(20):
            a = _rand(rng, n)
            f = matrix_norm(a, FROBENIUS)
            assert abs(matrix_norm(a, s2) - f) < 1e-12 * max(1, f)
            assert abs(matrix_norm(a, HS) - f / np.sqrt(n)) < 1e-12
            op = matrix_norm(a, OP)
            assert op <= f + 1e-12 <= np.sqrt(n) * op + 1e-9
            assert matrix_norm(a, s1) >= op - 1e-12


def test_bi_invariance():
    rng = np.random.default_rng(1)
    kinds = [FROBENIUS, HS, OP, NormKind.parse("schatten:3")]
    for _ in range(10):
        a, b = _rand(rng, 5), _rand(rng, 5)
        u, v = random_unitary(5, rng), random_unitary(5, rng)
        for kind in kinds:
            assert abs(matrix_norm(u @ a @ v - u @ b @ v, kind)
                       - matrix_norm(a - b, kind)) < 1e-10


def test_nonsquare_rejected():
    with pytest.raises(DimensionMismatch):
        matrix_norm(np.zeros((2, 3)))


def test_unitary_tuple_validation():
    rng = np.random.default_rng(2)
    t = UnitaryTuple((random_unitary(4, rng),))
    t.validate()
    with pytest.raises(StablabError):
        UnitaryTuple((np.eye(4) * 1.5,)).validate()


def test_defect_genuine_rep():
    g = catalog_group("C3")
    mats = regular_representation(g)
    t = UnitaryTuple((np.asarray(mats[g.gen_images[0]], dtype=complex),))
    p = parse_presentation("group C3\ngens a\nrel a^3\n")
    assert defect(p, t).max_defect <= 1e-12


def test_defect_generator_count():
    p = free_commutator_presentation()
    with pytest.raises(DimensionMismatch):
        defect(p, UnitaryTuple((np.eye(2, dtype=complex),)))


def test_voiculescu_closed_form():
    p = free_commutator_presentation()
    for n in (2, 3, 8, 16, 64):
        t = voiculescu_pair(n)
        t.validate(tol=1e-14)
        want = 2 * np.sin(np.pi / n)
        assert abs(defect(p, t, OP).max_defect - want) < 1e-10
        assert abs(defect(p, t).max_defect - np.sqrt(n) * want) < 1e-9
        assert abs(defect(p, t, HS).max_defect - want) < 1e-10


def test_subrepresentation_monotonicity():
    # frobenius defect of a direct sum majorizes each block's defect
    p = free_commutator_presentation()
    t1 = voiculescu_pair(4)
    rng = np.random.default_rng(3)
    t2 = UnitaryTuple((random_unitary(3, rng), random_unitary(3, rng)))
    direct = UnitaryTuple(tuple(
        np.block([[a, np.zeros((4, 3))], [np.zeros((3, 4)), b]])
        for a, b in zip(t1.matrices, t2.matrices)))
    d = defect(p, direct).max_defect
    assert d >= defect(p, t1).max_defect - 1e-12
    assert d >= defect(p, t2).max_defect - 1e-12


def test_solver_fixed_point():
    g = catalog_group("C3")
    t = UnitaryTuple((np.asarray(regular_representation(g)[g.gen_images[0]],
                                 dtype=complex),))
    p = parse_presentation("group C3\ngens a\nrel a^3\n")
    r = perturbation_solve(p, t)
    assert r["converged"]
    assert max(r["distance_moved"]) == 0


def test_solver_recovers_small_perturbation():
    p = parse_presentation("group C3\ngens a\nrel a^3\n")
    rng = np.random.default_rng(4)
    w = np.exp(2j * np.pi / 3)
    u = np.diag([1, w, w.conjugate(), 1]).astype(complex)
    t = perturb(UnitaryTuple((u,)), 1e-3, rng)
    r = perturbation_solve(p, t, cfg=SolverConfig(seed=4))
    assert r["status"] == "converged"
    assert r["final_defect_frobenius"] <= 1e-8
    assert max(r["distance_moved"]) <= 1e-2
    # objective trace is monotone non-increasing
    tr = r["trace"]
    assert all(b <= a + 1e-15 for a, b in zip(tr, tr[1:]))


def test_voiculescu_16_not_recoverable_cheaply():
    # either the defect stays above tolerance or the pair moves > 0.1
    # in operator norm: there is no nearby commuting pair
    p = free_commutator_presentation()
    t = voiculescu_pair(16)
    r = perturbation_solve(p, t, OP, SolverConfig(max_iterations=400))
    assert (r["final_defect_frobenius"] > 1e-9
            or max(r["distance_moved"]) > 0.1)


def test_alpha_thresholds():
    assert alpha_threshold(catalog_group("C2")) == pytest.approx(2, abs=1e-8)
    assert alpha_threshold(catalog_group("C3")) \
        == pytest.approx(np.sqrt(3), abs=1e-8)
    assert alpha_threshold(catalog_group("V4")) == pytest.approx(2, abs=1e-8)


def test_irreducible_blocks_s3():
    blocks = irreducible_blocks(catalog_group("S3"))
    dims = sorted(b[0].shape[0] for b in blocks)
    assert dims == [1, 1, 2, 2]              # 1+1+2+2 = 6, dims 1,1,2,2


def _lifted_quotient_tuple(delta, seed):
    pres = parse_presentation("group C4\ngens a\nrel a^4\n")
    rng = np.random.default_rng(seed)
    u = np.diag([1, -1, 1, -1]).astype(complex)
    conj = random_unitary(4, rng)
    t0 = UnitaryTuple((conj @ u @ conj.conj().T,))
    t = perturb(t0, delta, rng) if delta else t0
    return pres, t


def test_quotient_transfer_c4():
    pres, t = _lifted_quotient_tuple(1e-3, 5)
    res = quotient_transfer_experiment(pres, [Word((1, 1))], t,
                                       cfg=SolverConfig(seed=5))
    assert res["ok"]
    assert res["alpha"] == pytest.approx(2, abs=1e-8)
    assert res["kills_kernel"]
    assert max(res["distance_to_input"]) <= 1e-2
    assert res["quotient_defect"]["max_defect"] <= 1e-8


def test_quotient_transfer_exact_input_unchanged():
    pres, t = _lifted_quotient_tuple(0, 6)
    res = quotient_transfer_experiment(pres, [Word((1, 1))], t,
                                       cfg=SolverConfig(seed=6))
    assert max(res["distance_to_input"]) == 0


def test_quotient_transfer_margin_violation():
    # a faithful rep of C4 has defect 2 on a^2, far above alpha/2
    pres = parse_presentation("group C4\ngens a\nrel a^4\n")
    t = UnitaryTuple((np.diag([1, 1j, -1, -1j]).astype(complex),))
    with pytest.raises(ThresholdViolation):
        quotient_transfer_experiment(pres, [Word((1, 1))], t)
