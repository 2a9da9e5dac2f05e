"""From a Galois orbit of floating invariant values to an exact polynomial.

The orbit values are deduplicated to a multiplicity-one root set, expanded
through a balanced product tree, and the coefficients rounded to integers
under a tolerance that fails loudly when the sign convention or precision
is wrong.  Discriminants are computed exactly over Z by subresultants.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath as mp

from .fields import ray_modulus, ray_class_degree
from .reciprocity import GaloisElement, galois_orbit
from .siegel import (InvariantSpec, PrecisionContext, mpq, reduction_phase,
                     truncation_terms, tau_of_form, _siegel_reduced)


class IntegralityFailure(ArithmeticError):
    """A reconstructed coefficient was not close to an integer."""


class MultiplicityMismatch(ArithmeticError):
    """Orbit values did not split into equal-size clusters."""


@dataclass(frozen=True)
class PolyZ:
    """Monic integer polynomial; coefficients descending by degree."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        if len(self.coefficients) < 2:
            raise ValueError("degree must be at least 1")
        if self.coefficients[0] != 1:
            raise ValueError("polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def constant(self) -> int:
        return self.coefficients[-1]

    def __call__(self, x):
        acc = x - x  # zero of the argument's type
        for c in self.coefficients:
            acc = acc * x + c
        return acc

    def derivative(self) -> tuple[int, ...]:
        n = self.degree
        return tuple(c * (n - i) for i, c in enumerate(self.coefficients[:-1]))

    def coefficient_strings(self) -> list[str]:
        return [str(c) for c in self.coefficients]


@dataclass(frozen=True)
class OrbitValues:
    values: tuple
    include_conjugates: bool
    declared_field_degree: int


def _block_value(r1: Fraction, r2: Fraction, exponent: int, sign: int,
                 tau, n_max: int, cache: dict):
    """sign * g_(r1,r2)(tau)^exponent via the reduced index and exact phase."""
    red_sign, red_phase, f1, f2 = reduction_phase(r1, r2)
    key = (f1, f2)
    core = cache.get(key)
    if core is None:
        core = _siegel_reduced(f1, f2, tau, n_max)
        cache[key] = core
    val = core ** exponent
    total_phase = (red_phase * exponent) % 2
    if total_phase:
        val *= mp.exp(1j * mp.pi * mpq(total_phase))
    if (sign < 0) ^ (red_sign < 0 and exponent % 2 == 1):
        val = -val
    return val


def _conjugate_value(spec: InvariantSpec, el: GaloisElement, tau, n_max: int,
                     cache: dict):
    val = mp.mpc(1)
    if spec.phase is not None:
        val = mp.exp(1j * mp.pi * mpq(el.transform_phase(spec.phase)))
    for r, mult in spec.numerator:
        e = spec.exponent * mult
        n1, n2, sign = el.transform_index(r.r1, r.r2, e)
        val *= _block_value(n1, n2, e, sign, tau, n_max, cache)
    for r, mult in spec.denominator:
        e = spec.exponent * mult
        n1, n2, sign = el.transform_index(r.r1, r.r2, e)
        val /= _block_value(n1, n2, e, sign, tau, n_max, cache)
    return val


def _evaluate_chunk(spec: InvariantSpec, elements, ctx: PrecisionContext):
    with mp.workdps(ctx.dps):
        taus: dict = {}
        caches: dict = {}
        out = []
        for el in elements:
            q = el.form
            if q not in taus:
                taus[q] = tau_of_form(q)
                caches[q] = {}
            n_max = truncation_terms(taus[q].imag, ctx)
            out.append(_conjugate_value(spec, el, taus[q], n_max, caches[q]))
        return out


def evaluate_orbit(spec: InvariantSpec, ctx: PrecisionContext,
                   level: int | None = None, threads: int = 1) -> OrbitValues:
    """Every Galois conjugate of the invariant, at the working precision.

    Enumeration order is deterministic; the thread count partitions the
    element list without reordering the returned values.
    """
    M = level if level is not None else spec.level
    elements = galois_orbit(spec.field, M)
    if threads > 1 and len(elements) > 8:
        chunks = [elements[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_evaluate_chunk,
                                    [spec] * len(chunks), chunks,
                                    [ctx] * len(chunks)))
        values: list = [None] * len(elements)
        for i, chunk_vals in enumerate(results):
            values[i::threads] = chunk_vals
    else:
        values = _evaluate_chunk(spec, elements, ctx)
    degree = ray_class_degree(ray_modulus(spec.field, spec.N))
    return OrbitValues(values=tuple(values),
                       include_conjugates=spec.conjugates,
                       declared_field_degree=degree)


def dedup_values(values, tol):
    """Cluster values closer than tol; returns (representatives, counts)."""
    reps: list = []
    counts: list[int] = []
    for v in values:
        for i, w in enumerate(reps):
            if abs(v - w) < tol:
                counts[i] += 1
                break
        else:
            reps.append(v)
            counts.append(1)
    return reps, counts


def _product_tree(roots):
    """Coefficients (descending) of prod (X - r), balanced for error growth."""
    polys = [[mp.mpc(1), -mp.mpc(r)] for r in roots]
    while len(polys) > 1:
        nxt = []
        for i in range(0, len(polys) - 1, 2):
            a, b = polys[i], polys[i + 1]
            prod = [mp.mpc(0)] * (len(a) + len(b) - 1)
            for j, aj in enumerate(a):
                for k, bk in enumerate(b):
                    prod[j + k] += aj * bk
            nxt.append(prod)
        if len(polys) % 2:
            nxt.append(polys[-1])
        polys = nxt
    return polys[0]


def reconstruct_polynomial(orbit: OrbitValues, ctx: PrecisionContext) -> PolyZ:
    """Exact integer minimal polynomial from the orbit values.

    Conjugates are appended when the orbit is flagged for a minimum over Q;
    clusters must share one multiplicity, and every expanded coefficient
    must round to an integer within the context tolerance.
    """
    poly, _, _ = reconstruction_report(orbit, ctx)
    return poly


def reconstruction_report(orbit: OrbitValues,
                          ctx: PrecisionContext) -> tuple[PolyZ, int, int]:
    """(polynomial, distinct root count, shared multiplicity)."""
    if not orbit.values:
        raise ValueError("empty orbit")
    with mp.workdps(ctx.dps):
        values = list(orbit.values)
        if orbit.include_conjugates:
            values += [mp.conj(v) for v in values]
        reps, counts = dedup_values(values, ctx.dedup_tol)
        if len(set(counts)) != 1:
            raise MultiplicityMismatch(
                f"cluster sizes {sorted(set(counts))} are not uniform")
        coeffs = _product_tree(reps)
        out = []
        for c in coeffs:
            n = int(mp.nint(c.real))
            if abs(c - n) >= ctx.integer_tol:
                raise IntegralityFailure(
                    f"coefficient {mp.nstr(c, 12)} is off by "
                    f"{mp.nstr(abs(c - n), 3)} (tolerance "
                    f"{mp.nstr(ctx.integer_tol, 3)})")
            out.append(n)
        return PolyZ(coefficients=tuple(out)), len(reps), counts[0]


def approx_polynomial(orbit: OrbitValues,
                      ctx: PrecisionContext | None = None) -> list[str]:
    """Monic product over the orbit values, 5 significant digits each."""
    dps = ctx.dps if ctx is not None else mp.mp.dps
    with mp.workdps(dps):
        coeffs = _product_tree(list(orbit.values))
        return [mp.nstr(c.real, 5) for c in coeffs]


def _content(poly) -> int:
    g = 0
    for c in poly:
        g = gcd(g, abs(c))
    return g or 1


def _pseudo_rem(A, B):
    """lc(B)^(deg A - deg B + 1) * A reduced mod B, over Z."""
    dB = len(B) - 1
    lb = B[0]
    R = list(A)
    for _ in range(len(A) - len(B) + 1):
        if len(R) - 1 >= dB and R:
            lead = R[0]
            R = [lb * c for c in R]
            for j in range(dB + 1):
                R[j] -= lead * B[j]
            R = R[1:]
        else:
            R = [lb * c for c in R]
    while R and R[0] == 0:
        R = R[1:]
    return R


def resultant(A, B) -> int:
    """Resultant of two integer polynomials (descending coefficients).

    Subresultant polynomial remainder sequence; all divisions are exact.
    """
    A, B = [int(c) for c in A], [int(c) for c in B]
    while A and A[0] == 0:
        A = A[1:]
    while B and B[0] == 0:
        B = B[1:]
    if not A or not B:
        return 0
    s = 1
    if len(A) < len(B):
        if ((len(A) - 1) * (len(B) - 1)) % 2:
            s = -1
        A, B = B, A
    if len(B) == 1:
        return s * B[0] ** (len(A) - 1)
    ca, cb = _content(A), _content(B)
    A = [c // ca for c in A]
    B = [c // cb for c in B]
    t = s * ca ** (len(B) - 1) * cb ** (len(A) - 1)
    g = h = 1
    while True:
        dA, dB = len(A) - 1, len(B) - 1
        delta = dA - dB
        if dA % 2 and dB % 2:
            t = -t
        R = _pseudo_rem(A, B)
        if not R:
            return 0
        A, B = B, [c // (g * h ** delta) for c in R]
        g = A[0]
        if delta == 1:
            h = g
        elif delta > 1:
            h = g ** delta // h ** (delta - 1)
        if len(B) == 1:
            break
    dA = len(A) - 1
    return t * (B[0] ** dA // h ** (dA - 1) if dA >= 1 else B[0])


def discriminant(p: PolyZ) -> int:
    """(-1)^(n(n-1)/2) * Res(p, p') for monic p, exactly over Z."""
    n = p.degree
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(list(p.coefficients), list(p.derivative()))


def factor_trial(value: int, bound: int = 10 ** 6) -> tuple[dict[int, int], int]:
    """Best-effort factorization: trial division then perfect-power descent.

    Returns (prime factors found, remaining unfactored cofactor >= 1).
    The sign is dropped; callers needing it take it from the input.
    """
    n = abs(value)
    out: dict[int, int] = {}
    if n <= 1:
        return out, n
    for p in range(2, bound + 1):
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        from .fields import is_prime

        base, exp = _perfect_power(n)
        if is_prime(base):
            out[base] = out.get(base, 0) + exp
            n = 1
    return out, n


def _iroot(n: int, k: int) -> int:
    """floor(n^(1/k)) by Newton iteration on integers."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _perfect_power(n: int) -> tuple[int, int]:
    """Largest k with n = b^k; returns (b, k), k = 1 when n is not a power."""
    for k in range(n.bit_length(), 1, -1):
        b = _iroot(n, k)
        if b >= 2 and b ** k == n:
            base, e = _perfect_power(b)
            return base, e * k
    return n, 1


def unit_check(p: PolyZ) -> bool:
    """Algebraic-integer units have monic minimal polynomial with constant +-1."""
    return p.constant in (1, -1)
