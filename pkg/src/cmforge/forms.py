"""Reduced binary quadratic forms of discriminant d_K.

The set of reduced forms realizes the form class group; each form carries
the CM point theta_Q and an idele-component matrix beta_Q reduced mod N.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

Mat2 = tuple[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True)
class QuadForm:
    """Primitive reduced form a*X^2 + b*X*Y + c*Y^2."""

    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        return (-a < b <= a < c) or (0 <= b <= a == c)

    def theta_q(self) -> tuple[Fraction, Fraction]:
        """theta_Q = (-b + sqrt(d_K)) / (2a) as (rational, sqrt coefficient)."""
        return Fraction(-self.b, 2 * self.a), Fraction(1, 2 * self.a)


@dataclass(frozen=True)
class FormClassGroup:
    d_K: int
    forms: tuple[QuadForm, ...]


def enumerate_reduced_forms(d_K: int) -> FormClassGroup:
    """All reduced primitive forms of discriminant d_K, lex-ordered by (a, b)."""
    if d_K >= 0 or d_K % 4 not in (0, 1):
        raise ValueError(f"d_K = {d_K} is not a negative quadratic discriminant")
    forms = []
    a_max = isqrt(-d_K // 3)
    for a in range(1, a_max + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - d_K
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if gcd(gcd(a, b), c) != 1:
                continue
            q = QuadForm(a, b, c)
            if q.is_reduced():
                forms.append(q)
    forms.sort(key=lambda q: (q.a, q.b))
    # principal form has a = 1 and minimal b >= 0, so it sorts first
    return FormClassGroup(d_K=d_K, forms=tuple(forms))


theta_of_form = QuadForm.theta_q


def _crt(residues: dict[int, int], N: int) -> int:
    x = 0
    for q, r in residues.items():
        Nq = N // q
        x += r * Nq * pow(Nq, -1, q)
    return x % N


def _case_matrix(q: QuadForm, p: int) -> Mat2:
    a, b, c = q.a, q.b, q.c
    if q.disc % 4 == 0:
        if a % p:
            return ((a, b // 2), (0, 1))
        if c % p:
            return ((-b // 2, -c), (1, 0))
        return ((-a - b // 2, -c - b // 2), (1, -1))
    if a % p:
        return ((a, (b - 1) // 2), (0, 1))
    if c % p:
        return ((-(b + 1) // 2, -c), (1, 0))
    return ((-a - (b + 1) // 2, -c + (1 - b) // 2), (1, -1))


def beta_q_matrix(q: QuadForm, N: int) -> Mat2:
    """beta_Q mod N: per-prime case matrices glued entrywise by CRT.

    gcd(a, b, c) = 1 guarantees one case applies at every prime; the
    determinant is then a unit mod N.  Entries normalized to [0, N).
    """
    if N < 2:
        raise ValueError(f"N = {N} must be >= 2")
    from .fields import factorize

    fac = factorize(N)
    per_prime = {p ** e: _case_matrix(q, p) for p, e in fac.items()}
    rows = []
    for i in range(2):
        row = []
        for j in range(2):
            row.append(_crt({pe: mat[i][j] % pe for pe, mat in per_prime.items()}, N))
        rows.append(tuple(row))
    out = (rows[0], rows[1])
    det = (out[0][0] * out[1][1] - out[0][1] * out[1][0]) % N
    if gcd(det, N) != 1:
        raise ArithmeticError(f"beta_Q for {q} is singular mod {N}")
    return out
