from fractions import Fraction

import pytest

from cmforge.fields import (AlgebraicIntegerZTheta, make_field,
                            ray_class_degree, ray_modulus)
from cmforge.reciprocity import (act_on_index, build_w_group, decompose_gl2,
                                 galois_orbit, kernel_matrices,
                                 mat_mul, principal_class_matrix,
                                 ray_class_order, sl2_lift, transform_sign)
from cmforge.siegel import IndexVector


def coset_of(field, mat, N):
    """Canonical (s, t) of the coset containing a matrix."""
    s, t = mat[1][0] % N, mat[1][1] % N
    units = [(us % N, ut % N) for us, ut in field.units()]
    return min(tuple(x % N for x in field.mul_st((s, t), u)) for u in units)


def test_w_group_d7_n9():
    f = make_field(7)
    w = build_w_group(f, 9)
    assert len(w.cosets) == 36
    mats = w.coset_matrices()
    # listed members of the level-9 coset table
    assert ((8, 7), (1, 0)) in mats
    assert ((2, 0), (0, 2)) in mats
    assert len(w.kernel) == 2


def test_w_group_gaussian_n9():
    f = make_field(1)
    w = build_w_group(f, 9)
    assert len(w.cosets) == 18
    assert len(w.kernel) == 4
    # [[1,8],[1,1]] appears in the published coset table
    assert coset_of(f, ((1, 8), (1, 1)), 9) in w.cosets


def test_w_group_d5_n4():
    f = make_field(5)
    w = build_w_group(f, 4)
    expected = {((1, 0), (0, 1)), ((1, 2), (2, 1)), ((0, 3), (1, 0)),
                ((2, 3), (1, 2))}
    assert set(w.coset_matrices()) == expected


def test_kernel_structure():
    # kernel = unit images: order 2 generically, 4 over Q(i), 6 over Q(sqrt(-3))
    assert len(kernel_matrices(make_field(7), 9)) == 2
    assert len(kernel_matrices(make_field(1), 9)) == 4
    assert len(kernel_matrices(make_field(3), 7)) == 6
    # closed under multiplication
    for d, N in ((1, 9), (3, 7), (7, 9)):
        f = make_field(d)
        ker = set(kernel_matrices(f, N))
        for a in ker:
            for b in ker:
                assert mat_mul(a, b, N) in ker


def test_principal_class_matrix_examples():
    f1 = make_field(1)
    assert principal_class_matrix(f1, AlgebraicIntegerZTheta(0, 4), 9) == \
        ((4, 0), (0, 4))
    f5 = make_field(5)
    assert principal_class_matrix(f5, AlgebraicIntegerZTheta(3, 2), 4) == \
        ((2, 1), (3, 2))
    f7 = make_field(7)
    assert principal_class_matrix(f7, AlgebraicIntegerZTheta(12, 13), 5) == \
        ((1, 1), (2, 3))
    with pytest.raises(ValueError):
        principal_class_matrix(f5, AlgebraicIntegerZTheta(1, 0), 5)


def test_ray_class_order_examples():
    assert ray_class_order(make_field(1), AlgebraicIntegerZTheta(0, 4), 9) == 3
    assert ray_class_order(make_field(5), AlgebraicIntegerZTheta(3, 2), 4) == 2
    assert ray_class_order(make_field(7), AlgebraicIntegerZTheta(12, 13), 5) == 3


def test_sl2_lift_exhaustive():
    # round-trip congruence for every SL2(Z/N) element, N <= 12
    for N in range(2, 13):
        for a in range(N):
            for b in range(N):
                for c in range(N):
                    for d in range(N):
                        if (a * d - b * c) % N != 1:
                            continue
                        L = sl2_lift(((a, b), (c, d)), N)
                        assert L[0][0] * L[1][1] - L[0][1] * L[1][0] == 1
                        assert all((L[i][j] - ((a, b), (c, d))[i][j]) % N == 0
                                   for i in range(2) for j in range(2))


def test_decompose_gl2():
    lift = decompose_gl2(((1, 0), (0, 1)), 7)
    assert lift.det_part == 1 and lift.matrix == ((1, 0), (0, 1))
    # defining congruence diag(1, det) * lifted = target holds exhaustively
    for N in (4, 5, 9):
        for a in range(N):
            for b in range(N):
                for c in range(N):
                    for d in range(N):
                        det = (a * d - b * c) % N
                        from math import gcd

                        if gcd(det, N) != 1:
                            continue
                        lift = decompose_gl2(((a, b), (c, d)), N)
                        diag = ((1, 0), (0, lift.det_part))
                        recomposed = mat_mul(diag, tuple(
                            tuple(x % N for x in row) for row in lift.matrix), N)
                        assert recomposed == ((a, b), (c, d))
    # level-9 example with determinant 2
    f = make_field(7)
    alpha = ((8, 7), (1, 0))
    lift = decompose_gl2(alpha, 9)
    assert lift.det_part == (8 * 0 - 7 * 1) % 9 == 2


def test_transform_sign_rule():
    # odd determinant never flips
    assert transform_sign(Fraction(1, 2), Fraction(1, 4), 2, 4, 3) == 1
    # the worked parity case: 2*4*(1/4)*(1/2 - 1) = -1 odd, even det
    assert transform_sign(Fraction(1, 2), Fraction(1, 4), 2, 4, 2) == -1
    # even product keeps the sign even for even det
    assert transform_sign(Fraction(0), Fraction(1, 4), 2, 4, 2) == 1
    # non-integer parity value means no flip
    assert transform_sign(Fraction(1, 3), Fraction(1, 9), 1, 9, 2) == 1


def test_act_on_index_identity():
    r = IndexVector(Fraction(1, 3), Fraction(7, 9))
    out, sign = act_on_index(r, ((1, 0), (0, 1)), 3, 9)
    assert (out.r1, out.r2) == (r.r1, r.r2) and sign == 1
    with pytest.raises(ValueError):
        act_on_index(IndexVector(Fraction(1, 7), Fraction(0)),
                     ((1, 0), (0, 1)), 1, 9)


def test_orbit_sizes_match_degree():
    cases = [(5, 8, 32), (7, 9, 36), (5, 25, 500), (1, 9, 18)]
    for d, M, size in cases:
        f = make_field(d)
        orbit = galois_orbit(f, M)
        assert len(orbit) == size
        assert len(orbit) == ray_class_degree(ray_modulus(f, M))


def test_orbit_size_equals_degree_formula_grid():
    for d in (1, 2, 5, 7, 11):
        f = make_field(d)
        for M in range(3, 11):
            orbit = galois_orbit(f, M)
            assert len(orbit) == ray_class_degree(ray_modulus(f, M)), (d, M)


def test_orbit_is_deterministic():
    f = make_field(5)
    a = galois_orbit(f, 8)
    b = galois_orbit(f, 8)
    assert a == b
