"""Arithmetic and exact linear algebra over F_p and its dual extension."""

import pytest

from gaussfocal.fieldcore import (
    DegeneratePivot,
    DualFp,
    Dual2Fp,
    DualRing,
    DuplicateAbscissa,
    Fp,
    Infeasible,
    Rng,
    ZeroInverse,
    derive_seed,
    dual_rank_kernel,
    is_probable_prime,
    lagrange_interpolate,
    mat_rank,
    matvec,
    random_prime,
    rank_and_kernel,
    solve_affine,
)

F7 = Fp(7)
F101 = Fp(101)


def test_inverse_small_cases():
    assert F7.inv(2) == 4
    assert F7.inv(1) == 1
    assert F101.inv(10) == 91  # 10 * 91 = 910 = 9 * 101 + 1


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroInverse):
        F7.inv(0)


def test_inverse_law_randomized():
    fp = Fp(1000003)
    rng = Rng(0xF1E1D)
    for _ in range(1000):
        a = rng.nonzero(fp.p)
        assert fp.mul(a, fp.inv(a)) == 1


def test_field_ops_mod_p():
    assert F7.add(5, 4) == 2
    assert F7.sub(2, 5) == 4
    assert F7.mul(3, 5) == 1
    assert F7.neg(3) == 4
    assert F7.lift(-1) == 6


# --- matrices over F_p ----------------------------------------------------


def test_rank_and_kernel_rank_one():
    rank, ker = rank_and_kernel([[1, 1], [2, 2]], F7)
    assert rank == 1
    assert len(ker) == 1
    # kernel must be the line spanned by (1, 6); basis vector may be scaled
    v = ker[0]
    assert matvec([[1, 1], [2, 2]], v, F7) == [0, 0]
    assert v[0] == F7.neg(v[1])


def test_rank_and_kernel_identity():
    rank, ker = rank_and_kernel([[1, 0], [0, 1]], F7)
    assert rank == 2 and ker == []


def test_rank_zero_matrix():
    rank, ker = rank_and_kernel([[0, 0], [0, 0]], F7)
    assert rank == 0
    assert len(ker) == 2


def test_kernel_vectors_always_annihilate():
    fp = Fp(10007)
    rng = Rng(99)
    for _ in range(50):
        n, m = 2 + rng.below(5), 2 + rng.below(5)
        mat = [[rng.field(fp.p) for _ in range(m)] for _ in range(n)]
        rank, ker = rank_and_kernel(mat, fp)
        assert rank + len(ker) == m
        for v in ker:
            assert matvec(mat, v, fp) == [0] * n


def test_rank_invariant_under_row_shuffle():
    fp = Fp(10007)
    rng = Rng(12345)
    for _ in range(50):
        n = 2 + rng.below(6)
        mat = [[rng.field(fp.p) for _ in range(n)] for _ in range(n)]
        shuffled = list(mat)
        # Fisher-Yates with the deterministic stream
        for i in range(n - 1, 0, -1):
            j = rng.below(i + 1)
            shuffled[i], shuffled[j] = shuffled[j], shuffled[i]
        assert mat_rank(mat, fp) == mat_rank(shuffled, fp)


def test_solve_affine_particular_and_kernel():
    part, ker = solve_affine([[1, 0], [0, 0]], [3, 0], F7)
    assert part == [3, 0]
    assert len(ker) == 1


def test_solve_affine_infeasible():
    with pytest.raises(Infeasible):
        solve_affine([[1, 0], [0, 0]], [0, 1], F7)


def test_solve_affine_random_consistency():
    fp = Fp(10007)
    rng = Rng(777)
    for _ in range(50):
        n, m = 2 + rng.below(4), 2 + rng.below(4)
        mat = [[rng.field(fp.p) for _ in range(m)] for _ in range(n)]
        x = [rng.field(fp.p) for _ in range(m)]
        b = matvec(mat, x, fp)
        part, ker = solve_affine(mat, b, fp)
        assert matvec(mat, part, fp) == b
        for v in ker:
            assert matvec(mat, v, fp) == [0] * n


# --- dual numbers ----------------------------------------------------------


def test_dual_ring_laws_randomized():
    ring = DualFp(10007)
    rng = Rng(0xD0A1)
    rand = lambda: (rng.field(ring.p), rng.field(ring.p))
    for _ in range(1000):
        a, b, c = rand(), rand(), rand()
        lhs = ring.mul(a, ring.add(b, c))
        rhs = ring.add(ring.mul(a, b), ring.mul(a, c))
        assert lhs == rhs
        assert ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
    # eps * eps = 0
    assert ring.mul(ring.eps, ring.eps) == ring.zero


def test_dual_inverse():
    ring = DualFp(101)
    a = (3, 5)
    ai = ring.inv(a)
    assert ring.mul(a, ai) == ring.one
    with pytest.raises(ZeroInverse):
        ring.inv((0, 4))


def test_dual_kernel_full_rank():
    ring = DualFp(101)
    mat = [[ring.one_plus_eps(), ring.zero], [ring.zero, ring.one]]
    ker = dual_rank_kernel(mat, ring)
    assert ker == []


def test_dual_kernel_degenerate_pivot():
    ring = DualFp(101)
    with pytest.raises(DegeneratePivot):
        dual_rank_kernel([[ring.eps, ring.zero]], ring)


def test_dual_kernel_unit_lift():
    # row (1, 1+eps): kernel spanned by (-1-eps, 1); checked by direct product
    ring = DualFp(101)
    mat = [[ring.one, (1, 1)]]
    ker = dual_rank_kernel(mat, ring)
    assert len(ker) == 1
    v = ker[0]
    s = ring.add(ring.mul(mat[0][0], v[0]), ring.mul(mat[0][1], v[1]))
    assert s == ring.zero
    assert v[0] == (100, 100) and v[1] == ring.one


def test_dual2_matches_nested_dual():
    p = 10007
    flat = Dual2Fp(p)
    nested = DualRing(DualFp(p))
    rng = Rng(4242)
    unflat = lambda x: ((x[0], x[1]), (x[2], x[3]))
    for _ in range(300):
        a = tuple(rng.field(p) for _ in range(4))
        b = tuple(rng.field(p) for _ in range(4))
        got = flat.mul(a, b)
        want = nested.mul(unflat(a), unflat(b))
        assert unflat(got) == want
    a = (3, 5, 7, 9)
    assert flat.mul(a, flat.inv(a)) == flat.one


# --- interpolation ----------------------------------------------------------


def test_lagrange_small_parabola():
    # points (0,1), (1,2), (2,5) over F_101 -> t^2 + 1
    coeffs = lagrange_interpolate([(0, 1), (1, 2), (2, 5)], 2, F101)
    assert coeffs == [1, 0, 1]


def test_lagrange_duplicate_abscissa():
    with pytest.raises(DuplicateAbscissa):
        lagrange_interpolate([(1, 1), (1, 2)], 1, F101)


def test_lagrange_roundtrip_randomized():
    fp = Fp(1000003)
    rng = Rng(31337)
    for _ in range(100):
        d = rng.below(21)
        coeffs = [rng.field(fp.p) for _ in range(d + 1)]
        pts = []
        for t in range(d + 1):
            acc = 0
            for c in reversed(coeffs):
                acc = (acc * t + c) % fp.p
            pts.append((t, acc))
        back = lagrange_interpolate(pts, d, fp)
        back += [0] * (d + 1 - len(back))
        assert back == coeffs


# --- rng / primes -----------------------------------------------------------


def test_rng_determinism():
    a = Rng(123)
    b = Rng(123)
    assert [a.u64() for _ in range(10)] == [b.u64() for _ in range(10)]
    assert derive_seed(5, 1, 2) == derive_seed(5, 1, 2)
    assert derive_seed(5, 1, 2) != derive_seed(5, 2, 1)


def test_prime_generation():
    assert is_probable_prime(2**61 - 1)
    assert not is_probable_prime(2**61)
    rng = Rng(7)
    for _ in range(3):
        q = random_prime(rng, 1 << 60, 1 << 62)
        assert (1 << 60) <= q < (1 << 62)
        assert is_probable_prime(q)
