import numpy as np
import pytest

from modrep.config import CONFIG
from modrep.errors import DomainError, InputError
from modrep.ffield import (GF, Mat, Poly, echelonize, factor_poly, field_arith,
                           mat_inv, mat_mul, min_poly, nullspace, standard_modulus)
from modrep.prng import Prng


def test_gf3_scalar_arithmetic():
    F3 = GF(3)
    assert F3.add(2, 2) == 1
    assert F3.inv(2) == 2
    assert field_arith(F3, 2, 2, "add") == 1
    assert field_arith(F3, 2, None, "inv") == 2
    with pytest.raises(DomainError):
        F3.inv(0)


def test_gf9_standard_modulus_and_multiplication():
    assert standard_modulus(3, 2) == (2, 2, 1)  # x^2 + 2x + 2
    F9 = GF(3, 2)
    x = 3  # code of x
    assert F9.mul(x, x) == 4  # x^2 = x + 1
    for a in range(1, 9):
        assert F9.mul(a, F9.inv(a)) == 1


def test_inverse_antihomomorphism_and_frobenius():
    for (p, e) in [(2, 1), (3, 1), (2, 2), (3, 2), (5, 1), (2, 3), (7, 1),
                   (3, 3), (2, 4), (5, 2), (2, 5), (2, 6), (3, 4)]:
        f = GF(p, e)
        if f.q > 81:
            continue
        for a in range(1, f.q):
            for b in range(1, f.q):
                assert f.inv(f.mul(a, b)) == f.mul(f.inv(b), f.inv(a))
        for a in range(f.q):
            for b in range(f.q):
                assert f.pow(f.add(a, b), p) == f.add(f.pow(a, p), f.pow(b, p))


def test_echelonize_identity_and_zero():
    F3 = GF(3)
    e = echelonize(Mat.identity(F3, 5))
    assert e.rank == 5 and e.pivots == (0, 1, 2, 3, 4)
    z = echelonize(Mat.zeros(F3, 3, 4))
    assert z.rank == 0


def _schoolbook_rank(m):
    """Independent naive elimination over the field, for cross-checking."""
    f = m.field
    a = [list(map(int, row)) for row in m.A]
    rows, cols = len(a), len(a[0])
    rank, r = 0, 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = f.inv(a[r][c])
        a[r] = [f.mul(inv, v) for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                coef = a[i][c]
                a[i] = [f.sub(v, f.mul(coef, w)) for v, w in zip(a[i], a[r])]
        r += 1
        rank += 1
    return rank


def test_echelon_rank_against_schoolbook_oracle():
    F9 = GF(3, 2)
    m = Mat.random(F9, 50, 50, Prng(1))
    assert echelonize(m).rank == _schoolbook_rank(m)


def test_echelonize_idempotent_and_transform():
    F9 = GF(3, 2)
    m = Mat.random(F9, 20, 30, Prng(5))
    e = echelonize(m)
    assert mat_mul(e.transform, m) == e.rref
    again = echelonize(e.rref)
    assert again.rref == e.rref


def test_nullspace():
    F3 = GF(3)
    assert nullspace(Mat.identity(F3, 4)).nrows == 0
    assert nullspace(Mat.zeros(F3, 4, 4)).nrows == 4
    for seed in range(5):
        m = Mat.random(GF(3, 2), 9, 14, Prng(seed))
        ns = nullspace(m)
        assert echelonize(m).rank + ns.nrows == 14
        if ns.nrows:
            assert mat_mul(m, ns.transpose()).is_zero()


def _naive_product(a, b):
    f = a.field
    out = np.zeros((a.nrows, b.ncols), dtype=f.dtype)
    for i in range(a.nrows):
        for j in range(b.ncols):
            acc = 0
            for k in range(a.ncols):
                acc = f.add(acc, f.mul(int(a.A[i, k]), int(b.A[k, j])))
            out[i, j] = acc
    return Mat(f, out)


def test_mat_mul_against_naive_oracle():
    F3 = GF(3)
    a = Mat.random(F3, 23, 17, Prng(2))
    b = Mat.random(F3, 17, 29, Prng(3))
    assert mat_mul(a, b) == _naive_product(a, b)
    F9 = GF(3, 2)
    a9 = Mat.random(F9, 12, 9, Prng(4))
    b9 = Mat.random(F9, 9, 11, Prng(5))
    assert mat_mul(a9, b9) == _naive_product(a9, b9)


def test_mat_mul_identity_and_permutation_inverse():
    F9 = GF(3, 2)
    a = Mat.random(F9, 8, 8, Prng(7))
    assert mat_mul(a, Mat.identity(F9, 8)) == a
    perm = np.zeros((5, 5), dtype=F9.dtype)
    for i, j in enumerate([2, 0, 1, 4, 3]):
        perm[i, j] = 1
    pm = Mat(F9, perm)
    assert mat_inv(pm) == pm.transpose()


def test_mat_mul_associativity_seeded():
    F9 = GF(3, 2)
    for seed in range(5):
        pr = Prng(seed)
        a = Mat.random(F9, 7, 5, pr)
        b = Mat.random(F9, 5, 6, pr)
        c = Mat.random(F9, 6, 4, pr)
        assert mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c))


def test_mat_inv_singular_carries_rank():
    F3 = GF(3)
    m = Mat(F3, np.array([[1, 2], [2, 1]], dtype=np.uint8))  # rank 1 mod 3
    with pytest.raises(DomainError) as exc:
        mat_inv(m)
    assert exc.value.rank == 1


def test_kernel_equivalence_grease_vs_blas():
    for q, field in [(3, GF(3)), (9, GF(3, 2)), (2, GF(2)), (4, GF(2, 2))]:
        a = Mat.random(field, 33, 21, Prng(11))
        b = Mat.random(field, 21, 27, Prng(12))
        old = CONFIG.mul_kernel
        try:
            CONFIG.mul_kernel = "blas"
            via_blas = mat_mul(a, b)
            CONFIG.mul_kernel = "grease"
            via_grease = mat_mul(a, b)
        finally:
            CONFIG.mul_kernel = old
        assert via_blas == via_grease


def test_packed_storage_equivalence():
    F3 = GF(3)
    a = Mat.random(F3, 15, 18, Prng(21))
    b = Mat.random(F3, 18, 9, Prng(22))
    plain = mat_mul(a, b)
    old = CONFIG.packed_storage
    try:
        CONFIG.packed_storage = True
        ap = Mat(F3, a.A)
        bp = Mat(F3, b.A)
        packed = mat_mul(ap, bp)
        assert packed._packed is not None
        assert np.array_equal(packed.A, plain.A)
    finally:
        CONFIG.packed_storage = old


def test_min_poly_examples():
    F3 = GF(3)
    assert min_poly(Mat.identity(F3, 4)).coeffs == (2, 1)  # x - 1
    jordan = Mat(F3, np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=np.uint8))
    assert min_poly(jordan).coeffs == (0, 0, 0, 1)  # x^3
    # companion matrix of a random monic cubic
    pr = Prng(9)
    coeffs = [pr.below(3), pr.below(3), pr.below(3)]
    comp = np.zeros((3, 3), dtype=np.uint8)
    comp[0, 1] = comp[1, 2] = 1
    comp[2] = [(-c) % 3 for c in coeffs]
    got = min_poly(Mat(F3, comp))
    assert got.coeffs == tuple(coeffs) + (1,)


def test_factor_poly_examples():
    F3 = GF(3)
    f = Poly(F3, [2, 0, 0, 0, 1])  # x^4 - 1
    facs = factor_poly(f)
    assert {(g.coeffs, m) for g, m in facs} == {
        ((1, 1), 1), ((2, 1), 1), ((1, 0, 1), 1)}
    F9 = GF(3, 2)
    facs9 = factor_poly(Poly(F9, [2, 0, 0, 0, 1]))
    assert len(facs9) == 4 and all(g.degree == 1 and m == 1 for g, m in facs9)
    irr = Poly(F3, [2, 1, 1])  # x^2 + x + 2 (irreducible)
    assert factor_poly(irr) == [(irr, 1)]


def test_factor_poly_random_remultiplication():
    count = 0
    pr = Prng(1234)
    fields = [GF(3), GF(3, 2), GF(2), GF(5)]
    while count < 1000:
        f = fields[pr.below(len(fields))]
        deg = 1 + pr.below(12)
        coeffs = [pr.below(f.q) for _ in range(deg)] + [1 + pr.below(f.q - 1)]
        poly = Poly(f, coeffs)
        if poly.degree < 1:
            continue
        count += 1
        prod = Poly(f, [poly.coeffs[-1]])
        for g, mult in factor_poly(poly):
            for _ in range(mult):
                prod = prod * g
        assert prod == poly


def test_field_caps_and_validation():
    with pytest.raises(InputError):
        GF(4)          # not prime
    with pytest.raises(InputError):
        GF(2, 17)      # q > 2^16
    custom = GF(3, 2, modulus=(1, 0, 1))  # x^2 + 1 is irreducible: accepted
    assert custom.mul(3, 3) == 2          # x^2 = -1 under this modulus
    with pytest.raises(InputError):
        GF(3, 2, modulus=(2, 0, 1))       # x^2 - 1 = (x-1)(x+1) is rejected
