import numpy as np

from stablab.zq import (fp_echelon, fp_rank, fp_solve, smith_mod_prime_power,
                        solve_mod_prime_power)


def _rank_oracle(a, p):
    """Fraction-free Gaussian elimination over F_p in pure python."""
    a = [[int(v) % p for v in row] for row in a]
    rank, col = 0, 0
    rows, cols = len(a), len(a[0]) if a else 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][col] % p), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], p - 2, p)
        a[rank] = [(v * inv) % p for v in a[rank]]
        for r in range(rows):
            if r != rank and a[r][col]:
                c = a[r][col]
                a[r] = [(v - c * w) % p for v, w in zip(a[r], a[rank])]
        rank += 1
    return rank


def test_fp_rank_random():
    rng = np.random.default_rng(1)
    for p in (2, 3, 5, 7):
        for _ in range(10):
            m = rng.integers(0, p, size=(rng.integers(1, 9),
                                         rng.integers(1, 9)))
            assert fp_rank(m, p) == _rank_oracle(m.tolist(), p)


def test_fp_echelon_nullspace():
    rng = np.random.default_rng(2)
    for p in (2, 5):
        m = rng.integers(0, p, size=(6, 10))
        ech = fp_echelon(m, p)
        ns = ech.nullspace()
        assert ns.shape == (10, 10 - ech.rank)
        assert not ((m @ ns) % p).any()


def test_fp_solve():
    rng = np.random.default_rng(3)
    p = 7
    a = rng.integers(0, p, size=(5, 5))
    x = rng.integers(0, p, size=5)
    b = (a @ x) % p
    sol = fp_solve(a, b, p)
    assert sol is not None
    assert not ((a @ sol - b) % p).any()


def test_smith_mod_prime_power():
    # diag(1, 2, 4) mod 8 up to units
    a = np.array([[1, 0, 0], [0, 2, 0], [0, 0, 4]])
    s = smith_mod_prime_power(a, 2, 3)
    assert [s.diag_val(i) for i in range(3)] == [0, 1, 2]


def test_solve_mod_prime_power():
    rng = np.random.default_rng(4)
    p, k = 3, 2
    q = p ** k
    a = rng.integers(0, q, size=(4, 4))
    x = rng.integers(0, q, size=4)
    b = (a @ x) % q
    sol = solve_mod_prime_power(a, b, p, k)
    assert sol is not None
    assert not ((a @ sol - b) % q).any()
    # unsolvable system: 3 x = 1 mod 9
    assert solve_mod_prime_power(np.array([[3]]), np.array([1]), 3, 2) is None
