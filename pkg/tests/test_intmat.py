import numpy as np
import pytest

from stablab.intmat import (AbelianGroup, cokernel, ext_invariants,
                            hom_elements, hom_generators, hom_invariants,
                            identity_matrix, mat_mul, smith_normal_form)


def _check_smith(m):
    s = smith_normal_form(m)
    rows, cols = len(m), len(m[0]) if m else 0
    lhs = mat_mul(mat_mul(s.left, [list(r) for r in m]), s.right)
    for i in range(rows):
        for j in range(cols):
            want = s.diag[i] if i == j and i < len(s.diag) else 0
            assert lhs[i][j] == want
    for i in range(len(s.diag) - 1):
        if s.diag[i + 1]:
            assert s.diag[i + 1] % s.diag[i] == 0 or s.diag[i] == 0
    # transforms invert exactly
    assert mat_mul(s.left, s.left_inv) == identity_matrix(rows)
    assert mat_mul(s.right, s.right_inv) == identity_matrix(cols)


def test_smith_known():
    s = smith_normal_form([[2, 4], [6, 8]])
    assert [d for d in s.diag if d] == [2, 4]
    _check_smith([[2, 4], [6, 8]])


def test_smith_random():
    rng = np.random.default_rng(0)
    for _ in range(25):
        m = rng.integers(-6, 7, size=rng.integers(1, 5, size=2)).tolist()
        _check_smith(m)


def test_cokernel():
    a = cokernel([[2, 0], [0, 3]], 2)
    assert a.invariant_factors == (6,)       # Z/2 + Z/3 = Z/6
    b = cokernel([[2]], 3)                   # Z/2 + Z^2
    assert b.invariant_factors == (2, 0, 0)


def test_abelian_group_arithmetic():
    a = AbelianGroup((2, 4))
    assert a.order == 8
    assert a.add((1, 3), (1, 2)) == (0, 1)
    assert a.neg((1, 3)) == (1, 1)
    assert a.element_order((0, 1)) == 4
    assert len(list(a.elements())) == 8


def test_hom_and_ext():
    z2 = AbelianGroup((2,))
    z4 = AbelianGroup((4,))
    z6 = AbelianGroup((6,))
    assert hom_invariants(z4, z2).order == 2
    assert hom_invariants(z6, z4).order == 2
    assert ext_invariants(z4, z2).order == 2
    assert ext_invariants(AbelianGroup((0,)), z4).order == 1   # Z is free
    homs = hom_elements(z4, z2)
    assert len(homs) == 2
    gens = hom_generators(z4, z2)
    assert all(len(imgs) == z4.rank for _, imgs in gens)


def test_from_prime_powers():
    a = AbelianGroup.from_prime_powers([2, 3])
    assert a.invariant_factors == (6,)
    b = AbelianGroup.from_prime_powers([2, 2, 3])
    assert b.invariant_factors == (2, 6)
