"""Arbitrary-precision Siegel functions and invariant quotient specs.

The q-product is evaluated at exactly reduced indices: an index shift by
integers only multiplies the function by an explicit root of unity, and
that phase is carried as an exact rational multiple of pi*i.  Fractional
powers of q are always exp(2*pi*i*tau*x) with exact rational x -- never a
principal-branch power of the numeric q, whose branch flips with rounding
when q is a negative real (d_K odd discriminants).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath as mp

from .fields import ImagQuadField, RayModulus, AlgebraicIntegerZTheta, ray_modulus
from .forms import QuadForm


@dataclass(frozen=True)
class PrecisionContext:
    """Target decimal digits P plus guard digits for intermediate error."""

    P: int = 120
    guard: int = 20

    def __post_init__(self):
        if self.P < 50:
            raise ValueError(f"P = {self.P} must be >= 50")
        if self.guard < 0:
            raise ValueError("guard digits must be nonnegative")

    @property
    def dps(self) -> int:
        return self.P + self.guard

    @property
    def dedup_tol(self):
        return mp.mpf(10) ** -(self.P // 3)

    @property
    def integer_tol(self):
        return mp.mpf(10) ** -(self.P // 4)

    @property
    def real_tol(self):
        return mp.mpf(10) ** -(self.P - self.guard)


def mpq(x: Fraction):
    """Fraction -> mpf at the current working precision."""
    return mp.mpf(x.numerator) / x.denominator


@dataclass(frozen=True)
class IndexVector:
    """Rational index (r1, r2) of a Siegel function; never integral."""

    r1: Fraction
    r2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r1", Fraction(self.r1))
        object.__setattr__(self, "r2", Fraction(self.r2))
        if self.r1.denominator == 1 and self.r2.denominator == 1:
            raise ValueError(f"index {(self.r1, self.r2)} is integral")

    @property
    def level(self) -> int:
        return self.r1.denominator * self.r2.denominator \
            // gcd(self.r1.denominator, self.r2.denominator)


def bernoulli2(x: Fraction) -> Fraction:
    """Second Bernoulli polynomial X^2 - X + 1/6, exactly."""
    x = Fraction(x)
    return x * x - x + Fraction(1, 6)


def fractional_reduce(r: IndexVector) -> IndexVector:
    """Componentwise fractional part, in [0, 1)."""
    return IndexVector(r.r1 - (r.r1.numerator // r.r1.denominator),
                       r.r2 - (r.r2.numerator // r.r2.denominator))


def reduction_phase(r1: Fraction, r2: Fraction) -> tuple[int, Fraction, Fraction, Fraction]:
    """Exact relation between g at (r1, r2) and g at the reduced index.

    g_(r1, r2) = sign * exp(pi*i*phase) * g_(<r1>, <r2>) where the shift
    identities are g_(r1+1, r2) = -exp(-pi*i*r2) g and
    g_(r1, r2+1) = -exp(pi*i*r1) g.  Returns (sign, phase mod 2, <r1>, <r2>).
    """
    p = r1.numerator // r1.denominator
    q = r2.numerator // r2.denominator
    f1, f2 = r1 - p, r2 - q
    sign = -1 if (p + q) % 2 else 1
    phase = (q * r1 - p * f2) % 2
    return sign, phase, f1, f2


def truncation_terms(im_tau, ctx: PrecisionContext) -> int:
    """Least n with |q_tau|^(n-1) below the guarded target accuracy."""
    digits_per_term = 2 * math.pi * float(im_tau) / math.log(10)
    return max(4, int((ctx.P + ctx.guard) / digits_per_term) + 3)


@dataclass(frozen=True)
class SiegelValue:
    value: object  # mpc
    context: PrecisionContext
    truncation_terms: int


def _siegel_reduced(f1: Fraction, f2: Fraction, tau, n_max: int):
    """q-product at an index already in [0,1)^2; tau in the upper half-plane."""
    two_pi_i = 2j * mp.pi
    q = mp.exp(two_pi_i * tau)
    qz = mp.exp(two_pi_i * (mpq(f1) * tau + mpq(f2)))
    lead = -mp.exp(two_pi_i * tau * mpq(bernoulli2(f1) / 2)) \
        * mp.exp(1j * mp.pi * mpq((f2 * (f1 - 1)) % 2))
    prod = 1 - qz
    qn = q
    for _ in range(n_max):
        prod *= (1 - qn * qz) * (1 - qn / qz)
        qn *= q
    return lead * prod


def siegel_eval(r: IndexVector, tau, ctx: PrecisionContext) -> SiegelValue:
    """g_r(tau) for any rational non-integral index, exact phase included."""
    with mp.workdps(ctx.dps):
        tau = mp.mpc(tau)
        if not tau.imag > 0:
            raise ValueError("tau must lie in the upper half-plane")
        sign, phase, f1, f2 = reduction_phase(r.r1, r.r2)
        n_max = truncation_terms(tau.imag, ctx)
        val = _siegel_reduced(f1, f2, tau, n_max)
        if phase:
            val *= mp.exp(1j * mp.pi * mpq(phase))
        if sign < 0:
            val = -val
        assert abs(val) > mp.mpf(10) ** (-2 * ctx.P), "Siegel value vanished"
        return SiegelValue(value=val, context=ctx, truncation_terms=n_max)


def tau_of_field(field: ImagQuadField):
    """theta as a complex number at the current working precision."""
    return (mp.mpf(-field.B_theta) + mp.sqrt(mp.mpf(-field.d_K)) * 1j) / 2


def tau_of_form(q: QuadForm):
    """theta_Q = (-b + sqrt(d_K)) / (2a) at the current working precision."""
    return (mp.mpf(-q.b) + mp.sqrt(mp.mpf(-q.disc)) * 1j) / (2 * q.a)


def modularity_check(family, N: int) -> bool:
    """Level-N membership congruences for a weighted family of indices.

    family: iterable of (IndexVector, multiplicity).  All index denominators
    must divide N.
    """
    s11 = s22 = s12 = wt = 0
    for r, mult in family:
        if N % r.level:
            raise ValueError(f"index level {r.level} does not divide N = {N}")
        k1 = int(r.r1 * N)
        k2 = int(r.r2 * N)
        s11 += mult * k1 * k1
        s22 += mult * k2 * k2
        s12 += mult * k1 * k2
        wt += mult
    mod2N = gcd(2, N) * N
    return (s11 % mod2N == 0 and s22 % mod2N == 0 and s12 % N == 0
            and (wt * gcd(12, N)) % 12 == 0)


def modular_level(family, N: int) -> int:
    """Smallest multiple M of N at which the family passes the level check."""
    for k in range(1, 2 * N + 1):
        M = k * N
        if all(M % r.level == 0 for r, _ in family) and modularity_check(family, M):
            return M
    raise ArithmeticError(f"no admissible level found below {2 * N * N}")


def m_exponent_theorem51(N: int) -> int:
    """Exponent attached to the unit-quotient generator at modulus N."""
    return gcd(N, 3) if N % 2 else 4 * gcd(N // 2, 3)


def m_exponent_theorem62(N: int, s: int) -> int:
    """Smallest m | N with m*(s^2-1) = 0 mod gcd(2,N)*N and m = N mod 2."""
    if gcd(s, N) != 1:
        raise ValueError(f"s = {s} is not prime to N = {N}")
    mod2N = gcd(2, N) * N
    for m in range(1, N + 1):
        if N % m == 0 and (m * (s * s - 1)) % mod2N == 0 and (m - N) % 2 == 0:
            return m
    return N  # m = N always satisfies both conditions


KINDS = ("sr_invariant", "thm51_quotient", "cor52", "thm62_real", "cor63")


@dataclass(frozen=True)
class InvariantSpec:
    """A phase times a quotient of Siegel power blocks, evaluated at theta."""

    field: ImagQuadField
    N: int
    kind: str
    numerator: tuple[tuple[IndexVector, int], ...]
    denominator: tuple[tuple[IndexVector, int], ...]
    exponent: int
    phase: Fraction | None  # exponent of pi*i, or None
    level: int
    conjugates: bool  # min over Q needs complex conjugates appended

    def family(self):
        """Signed multiplicity family with total block exponents."""
        out = [(r, self.exponent * m) for r, m in self.numerator]
        out += [(r, -self.exponent * m) for r, m in self.denominator]
        return out


def _require_hypotheses(m: RayModulus, min_gi: int) -> None:
    from .fields import degree_drop_test, g_i_order

    if not degree_drop_test(m):
        raise ValueError(f"a prime ideal power of {m.N}*O_K can be dropped "
                         "without shrinking the ray class field")
    for pl in m.primes:
        order = g_i_order(m, pl.p)
        if order <= min_gi:
            raise ValueError(f"local unit-class order {order} at p = {pl.p} "
                             f"must exceed {min_gi}")


def _order_mod_pm1(s: int, N: int) -> int:
    """Order of [s] in (Z/NZ)^x / {+-1}."""
    if gcd(s, N) != 1:
        raise ValueError(f"s = {s} is not prime to N = {N}")
    x = s % N
    for k in range(1, N + 1):
        if x == 1 % N or x == (-1) % N:
            return k
        x = x * s % N
    raise ArithmeticError("order computation exceeded N")  # unreachable


def build_invariant(field: ImagQuadField, N: int, kind: str,
                    s: int | None = None, t: int | None = None,
                    p: int | None = None, level: int | None = None) -> InvariantSpec:
    """Assemble the index family, exponent and phase for one invariant kind.

    sr_invariant     g_(s/N, t/N)(theta)^(12N), default (s, t) = (0, 1)
    thm51_quotient   g_(s/N, t/N)^m / g_(0, 1/N)^m for a principal class
                     s*theta + t of norm 1 mod N'
    cor52            unit quotient attached to an odd prime p with
                     p^2 | N*d_K, indices fixed by d_K mod 4
    thm62_real       real generator: -s gives g_(0,s/N)^m / g_(0,1/N)^m,
                     -t gives the phased g_(1/2,t/N) quotient for even N
    cor63            real generator for p^2 | N via s = 1 + N/p
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    m = ray_modulus(field, N)
    one_over_N = IndexVector(Fraction(0), Fraction(1, N))
    num: tuple[tuple[IndexVector, int], ...]
    phase: Fraction | None = None
    conjugates = True

    if kind == "sr_invariant":
        if s is None and t is None:
            s, t = 0, 1
        if s is None or t is None:
            raise ValueError("sr_invariant needs both s and t (or neither)")
        omega = AlgebraicIntegerZTheta(s=s, t=t)
        if not omega.prime_to(field, N):
            raise ValueError(f"{omega} is not prime to N = {N}")
        num = ((IndexVector(Fraction(s % N, N), Fraction(t % N, N)), 1),)
        den: tuple[tuple[IndexVector, int], ...] = ()
        exponent = 12 * N
        conjugates = False

    elif kind == "thm51_quotient":
        if s is None or t is None:
            raise ValueError("thm51_quotient needs s and t")
        omega = AlgebraicIntegerZTheta(s=s, t=t)
        norm = omega.norm(field)
        n_prime = 4 * N if N % 3 == 0 else 12 * N
        if gcd(norm, 6 * N) != 1:
            raise ValueError(f"norm {norm} is not prime to 6N")
        if norm % n_prime != 1 % n_prime:
            raise ValueError(f"norm {norm} is not 1 mod {n_prime}")
        _require_hypotheses(m, 2)
        num = ((IndexVector(Fraction(s, N), Fraction(t, N)), 1),)
        den = ((one_over_N, 1),)
        exponent = m_exponent_theorem51(N)

    elif kind == "cor52":
        if p is None:
            raise ValueError("cor52 needs the odd prime p")
        from .fields import beta_of_lemma

        beta_of_lemma(m, p)  # validates p | N, p^2 | N*d_K, norm conditions
        _require_hypotheses(m, 3 if p == 3 else 2)
        if p == 3:
            exponent = 3
            if field.d_K % 4 == 0:
                top = IndexVector(Fraction(2, 3), Fraction(1, N))
            else:
                top = IndexVector(Fraction(4, 3), Fraction(2, 3) + Fraction(1, N))
        else:
            exponent = 1
            if field.d_K % 4 == 0:
                top = IndexVector(Fraction(6, p), Fraction(1, N))
            else:
                top = IndexVector(Fraction(12, p), Fraction(6, p) + Fraction(1, N))
        num = ((top, 1),)
        den = ((one_over_N, 1),)

    elif kind == "thm62_real":
        if (s is None) == (t is None):
            raise ValueError("thm62_real needs exactly one of s (odd case) "
                             "or t (even case)")
        _require_hypotheses(m, 2)
        if s is not None:
            order = _order_mod_pm1(s, N)
            from .fields import is_prime

            if order == 1 or order % 2 == 0 or not is_prime(order):
                raise ValueError(f"[s] has order {order}, not an odd prime")
            if order == 3:
                _require_hypotheses(m, 3)
            exponent = m_exponent_theorem62(N, s)
            num = ((IndexVector(Fraction(0), Fraction(s % N, N)), 1),)
        else:
            if N % 2:
                raise ValueError("the even-case generator needs 2 | N")
            if (t * t - 1) % N:
                raise ValueError(f"t = {t} must satisfy t^2 = 1 mod N")
            if (N * field.d) % 4:
                raise ValueError("the even-case generator needs 4 | N*d")
            if N % 4 == 0:
                exponent = 2
                phase = Fraction(t, N) % 2
            else:
                exponent = 4
                phase = Fraction(2 * t, N) % 2
            num = ((IndexVector(Fraction(1, 2), Fraction(t % N, N)), 1),)
        den = ((one_over_N, 1),)
        conjugates = False

    else:  # cor63
        if p is None:
            raise ValueError("cor63 needs the odd prime p")
        from .fields import is_prime

        if p % 2 == 0 or not is_prime(p):
            raise ValueError(f"p = {p} must be an odd prime")
        if N % (p * p):
            raise ValueError(f"p^2 = {p*p} must divide N = {N}")
        _require_hypotheses(m, 3 if p == 3 else 2)
        exponent = p if N % 2 else 2 * p
        s_val = 1 + N // p
        num = ((IndexVector(Fraction(0), Fraction(s_val, N)), 1),)
        den = ((one_over_N, 1),)
        conjugates = False

    spec_level = level if level is not None else modular_level(
        [(r, exponent * mult) for r, mult in num]
        + [(r, -exponent * mult) for r, mult in den], N)
    if spec_level % N:
        raise ValueError(f"level {spec_level} is not a multiple of N = {N}")
    return InvariantSpec(field=field, N=N, kind=kind, numerator=num,
                         denominator=den, exponent=exponent, phase=phase,
                         level=spec_level, conjugates=conjugates)


def invariant_value(spec: InvariantSpec, ctx: PrecisionContext) -> SiegelValue:
    """The invariant evaluated at theta (the identity Galois element)."""
    with mp.workdps(ctx.dps):
        tau = tau_of_field(spec.field)
        val = mp.mpc(1)
        nterms = 0
        for r, mult in spec.numerator:
            sv = siegel_eval(r, tau, ctx)
            val *= sv.value ** (spec.exponent * mult)
            nterms = max(nterms, sv.truncation_terms)
        for r, mult in spec.denominator:
            sv = siegel_eval(r, tau, ctx)
            val /= sv.value ** (spec.exponent * mult)
            nterms = max(nterms, sv.truncation_terms)
        if spec.phase is not None:
            val *= mp.exp(1j * mp.pi * mpq(spec.phase))
        return SiegelValue(value=val, context=ctx, truncation_terms=nterms)


def sr_invariant(m: RayModulus, omega: AlgebraicIntegerZTheta,
                 ctx: PrecisionContext) -> SiegelValue:
    """g_(s/N, t/N)(theta)^(12N) for the principal ray class of omega."""
    if not omega.prime_to(m.field, m.N):
        raise ValueError(f"{omega} is not prime to N = {m.N}")
    N = m.N
    r = IndexVector(Fraction(omega.s % N, N), Fraction(omega.t % N, N))
    with mp.workdps(ctx.dps):
        tau = tau_of_field(m.field)
        g = siegel_eval(r, tau, ctx)
        return SiegelValue(value=g.value ** (12 * N), context=ctx,
                           truncation_terms=g.truncation_terms)
