"""Concrete Galois action on level-N modular function values.

Builds the matrix group W_{N,theta} with its kernel, pairs its cosets with
reduced forms to enumerate Gal(K_(N)/K), and transports Siegel-function
indices along each element: factor the acting matrix as diag(1, det) times
an SL2 part, lift the SL2 part exactly to SL2(Z), then move the index by
the transpose.  A quotient of Siegel powers picks up an explicit sign when
the determinant representative is even.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .fields import AlgebraicIntegerZTheta, ImagQuadField
from .forms import FormClassGroup, Mat2, QuadForm, beta_q_matrix, enumerate_reduced_forms


def mat_mul(A: Mat2, B: Mat2, N: int) -> Mat2:
    return (
        ((A[0][0] * B[0][0] + A[0][1] * B[1][0]) % N,
         (A[0][0] * B[0][1] + A[0][1] * B[1][1]) % N),
        ((A[1][0] * B[0][0] + A[1][1] * B[1][0]) % N,
         (A[1][0] * B[0][1] + A[1][1] * B[1][1]) % N),
    )


def mat_det(A: Mat2, N: int) -> int:
    return (A[0][0] * A[1][1] - A[0][1] * A[1][0]) % N


def mat_mod(A, N: int) -> Mat2:
    return ((A[0][0] % N, A[0][1] % N), (A[1][0] % N, A[1][1] % N))


def principal_class_matrix(field: ImagQuadField,
                           omega: AlgebraicIntegerZTheta, N: int) -> Mat2:
    """Matrix of the ray class [(omega)] acting on level-N values."""
    if not omega.prime_to(field, N):
        raise ValueError(f"omega = {omega} is not prime to N = {N}")
    s, t = omega.s, omega.t
    return mat_mod(((t - field.B_theta * s, -field.C_theta * s), (s, t)), N)


def _st_matrix(field: ImagQuadField, s: int, t: int, N: int) -> Mat2:
    return mat_mod(((t - field.B_theta * s, -field.C_theta * s), (s, t)), N)


def kernel_matrices(field: ImagQuadField, N: int) -> tuple[Mat2, ...]:
    """Images of the roots of unity; exactly the kernel acting on values."""
    out = []
    for (s, t) in field.units():
        mat = _st_matrix(field, s, t, N)
        if mat not in out:
            out.append(mat)
    return tuple(out)


@dataclass(frozen=True)
class WGroup:
    field: ImagQuadField
    N: int
    elements: tuple[tuple[int, int], ...]  # all invertible (s, t)
    kernel: tuple[Mat2, ...]
    cosets: tuple[tuple[int, int], ...]  # lex-least (s, t) per unit orbit

    def coset_matrices(self) -> tuple[Mat2, ...]:
        return tuple(_st_matrix(self.field, s, t, self.N) for s, t in self.cosets)


def build_w_group(field: ImagQuadField, N: int) -> WGroup:
    """All invertible matrices [[t - B*s, -C*s], [s, t]] mod N, with cosets.

    The coset partition is by unit multiplication (s, t) -> u * (s*theta + t);
    the representative is the lexicographically least pair of the orbit.
    """
    if N < 2:
        raise ValueError(f"N = {N} must be >= 2")
    units = [(us % N, ut % N) for us, ut in field.units()]
    elements = []
    seen: set[tuple[int, int]] = set()
    reps = []
    for s in range(N):
        for t in range(N):
            if gcd(field.norm_st(s, t), N) != 1:
                continue
            elements.append((s, t))
            if (s, t) in seen:
                continue
            orbit = {tuple(x % N for x in field.mul_st((s, t), u)) for u in units}
            seen |= orbit
            reps.append(min(orbit))
    return WGroup(field=field, N=N, elements=tuple(elements),
                  kernel=kernel_matrices(field, N), cosets=tuple(sorted(reps)))


def ray_class_order(field: ImagQuadField,
                    omega: AlgebraicIntegerZTheta, N: int) -> int:
    """Least k >= 1 with matrix(omega)^k in the kernel."""
    mat = principal_class_matrix(field, omega, N)
    kernel = set(kernel_matrices(field, N))
    power = mat
    for k in range(1, 12 * N * N + 1):
        if power in kernel:
            return k
        power = mat_mul(power, mat, N)
    raise ArithmeticError("order exceeded the group bound")  # unreachable


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def sl2_lift(A: Mat2, N: int) -> Mat2:
    """Exact integer matrix with determinant 1 congruent to A mod N.

    Bottom row made coprime by shifting d within its residue class (a
    coprime value exists since gcd(c, d, N) = 1), completed by Bezout,
    then the top row corrected by a multiple of the bottom row.
    """
    if mat_det(A, N) != 1:
        raise ValueError("matrix is not in SL2(Z/NZ)")
    a, b = A[0]
    c, d = A[1]
    if c % N == 0 and d % N in (1, N - 1):
        c0, d0 = 0, (1 if d % N == 1 else -1)
    else:
        c0 = c if c else N
        d0 = d
        k = 0
        while gcd(c0, d0) != 1:
            k += 1
            if gcd(c0, d + k * N) == 1:
                d0 = d + k * N
                break
            if gcd(c0, d - k * N) == 1:
                d0 = d - k * N
                break
    g, x, y = _ext_gcd(d0, c0)
    a0, b0 = x, -y  # a0*d0 - b0*c0 = 1
    # top row correction: find t with (a0, b0) + t*(c0, d0) = (a, b) mod N
    u, v = (a - a0) % N, (b - b0) % N
    _, al, be = _ext_gcd(c0, d0)
    t = (al * u + be * v) % N
    a1, b1 = a0 + t * c0, b0 + t * d0
    out = ((a1, b1), (c0, d0))
    assert a1 * d0 - b1 * c0 == 1
    assert all((out[i][j] - A[i][j]) % N == 0 for i in range(2) for j in range(2))
    return out


@dataclass(frozen=True)
class SL2Lift:
    """diag(1, det_part) * matrix = target (mod N), det(matrix) = 1 exactly."""

    matrix: Mat2
    det_part: int
    target: Mat2
    N: int


def decompose_gl2(alpha: Mat2, N: int) -> SL2Lift:
    """Split alpha mod N into diag(1, det) times an exact SL2(Z) matrix."""
    alpha = mat_mod(alpha, N)
    det = mat_det(alpha, N)
    if gcd(det, N) != 1:
        raise ValueError(f"matrix {alpha} is singular mod {N}")
    inv = pow(det, -1, N)
    part = ((alpha[0][0], alpha[0][1]),
            ((inv * alpha[1][0]) % N, (inv * alpha[1][1]) % N))
    return SL2Lift(matrix=sl2_lift(part, N), det_part=det, target=alpha, N=N)


def transform_sign(r1: Fraction, r2: Fraction, exponent: int,
                   level: int, det: int) -> int:
    """Sign picked up by a Siegel power block under the decomposed action.

    -1 exactly when exponent*level*r2*(r1 - 1) is an odd integer and the
    determinant representative in [0, level) is even.
    """
    if det % 2:
        return 1
    v = exponent * level * r2 * (r1 - 1)
    return -1 if (v.denominator == 1 and v.numerator % 2) else 1


def transform_index(r1: Fraction, r2: Fraction, lift: SL2Lift) -> tuple[Fraction, Fraction]:
    """transpose(lifted SL2 matrix) * diag(1, det) * r, exact rationals."""
    L, d = lift.matrix, lift.det_part
    return (L[0][0] * r1 + L[1][0] * d * r2,
            L[0][1] * r1 + L[1][1] * d * r2)


def act_on_index(r, alpha: Mat2, exponent: int, level: int):
    """Transport one index vector along alpha; returns (index, sign).

    The returned index is exact (not reduced mod 1); evaluation applies the
    exact reduction phase, so no information is lost for sub-12N powers.
    """
    from .siegel import IndexVector

    if level % r.level:
        raise ValueError(f"index denominator {r.level} does not divide level {level}")
    lift = decompose_gl2(alpha, level)
    sign = transform_sign(r.r1, r.r2, exponent, level, lift.det_part)
    n1, n2 = transform_index(r.r1, r.r2, lift)
    return IndexVector(n1, n2), sign


@dataclass(frozen=True)
class GaloisElement:
    """One element of Gal(K_(M)/K): a W-coset paired with a reduced form."""

    w_coset: tuple[int, int]
    form: QuadForm
    matrix: Mat2  # alpha * beta_Q mod M
    lift: SL2Lift

    @property
    def det_part(self) -> int:
        return self.lift.det_part

    def transform_index(self, r1: Fraction, r2: Fraction,
                        exponent: int) -> tuple[Fraction, Fraction, int]:
        s = transform_sign(r1, r2, exponent, self.lift.N, self.det_part)
        n1, n2 = transform_index(r1, r2, self.lift)
        return n1, n2, s

    def transform_phase(self, phase: Fraction) -> Fraction:
        # rational multiples of pi*i move by the determinant character
        return phase * self.det_part % 2


def galois_orbit(field: ImagQuadField, level: int,
                 fcg: FormClassGroup | None = None) -> tuple[GaloisElement, ...]:
    """All (coset, form) pairs with their decomposed acting matrices.

    Deterministic order: cosets sorted lexicographically, forms by (a, b);
    the orbit size equals the level-M ray class degree.
    """
    if fcg is None:
        fcg = enumerate_reduced_forms(field.d_K)
    w = build_w_group(field, level)
    betas = {q: beta_q_matrix(q, level) for q in fcg.forms}
    out = []
    for (s, t) in w.cosets:
        alpha = _st_matrix(field, s, t, level)
        for q in fcg.forms:
            target = mat_mul(alpha, betas[q], level)
            out.append(GaloisElement(w_coset=(s, t), form=q, matrix=target,
                                     lift=decompose_gl2(target, level)))
    return tuple(out)
