"""Exact arithmetic of imaginary quadratic fields K = Q(sqrt(-d)).

Ground-field data (discriminant, CM point, units, class number), counting
functions for moduli N*O_K, and the hypothesis predicates used by the
invariant constructions.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

INF = 10**9  # stand-in valuation for u - 1 = 0


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for every n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_square_free(n: int) -> bool:
    if n <= 0:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        while n % p == 0:
            n //= p
        p += 1
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; inputs here are desk-scale."""
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def kronecker(a: int, p: int) -> int:
    """Kronecker symbol (a/p) for prime p; 0 iff p | a."""
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if p == 2:
        if a % 2 == 0:
            return 0
        return 1 if a % 8 in (1, 7) else -1
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


@dataclass(frozen=True)
class ImagQuadField:
    """K = Q(sqrt(-d)) with O_K = Z[theta], min(theta,Q) = X^2 + B*X + C."""

    d: int
    d_K: int
    B_theta: int
    C_theta: int
    omega_K: int
    h_K: int

    def norm_st(self, s: int, t: int) -> int:
        """Field norm of s*theta + t."""
        return t * t - self.B_theta * s * t + self.C_theta * s * s

    def units(self) -> tuple[tuple[int, int], ...]:
        """Roots of unity as (s, t) pairs in the theta basis."""
        if self.d_K == -4:
            return ((0, 1), (0, -1), (1, 0), (-1, 0))
        if self.d_K == -3:
            return ((0, 1), (0, -1), (1, 0), (-1, 0), (1, 1), (-1, -1))
        return ((0, 1), (0, -1))

    def mul_st(self, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
        """(s1*theta+t1)(s2*theta+t2) in the theta basis."""
        s1, t1 = a
        s2, t2 = b
        return (s1 * t2 + s2 * t1 - self.B_theta * s1 * s2,
                t1 * t2 - self.C_theta * s1 * s2)


@dataclass(frozen=True)
class AlgebraicIntegerZTheta:
    """omega = s*theta + t."""

    s: int
    t: int

    def norm(self, field: ImagQuadField) -> int:
        return field.norm_st(self.s, self.t)

    def prime_to(self, field: ImagQuadField, N: int) -> bool:
        return gcd(self.norm(field), N) == 1


def make_field(d: int) -> ImagQuadField:
    """Construct K = Q(sqrt(-d)) for square-free d > 0."""
    if d <= 0:
        raise ValueError(f"d = {d} must be positive")
    if not is_square_free(d):
        raise ValueError(f"d = {d} is not square-free")
    d_K = -d if (-d) % 4 == 1 else -4 * d
    if d_K % 4 == 0:
        B, C = 0, -d_K // 4
    else:
        B, C = 1, (1 - d_K) // 4
    if d_K == -4:
        omega_K = 4
    elif d_K == -3:
        omega_K = 6
    else:
        omega_K = 2
    from .forms import enumerate_reduced_forms

    h_K = len(enumerate_reduced_forms(d_K).forms)
    return ImagQuadField(d=d, d_K=d_K, B_theta=B, C_theta=C,
                         omega_K=omega_K, h_K=h_K)


@dataclass(frozen=True)
class PrimeLocal:
    """Splitting data of a rational prime in the modulus N*O_K."""

    p: int
    splitting: str  # "split" | "inert" | "ramified"
    n_p: int  # ord_p(N)

    @property
    def ideal_exponent(self) -> int:
        # N*O_K contains the prime ideal over p with exponent 2*n_p when ramified
        return 2 * self.n_p if self.splitting == "ramified" else self.n_p

    @property
    def residue_degree(self) -> int:
        return 2 if self.splitting == "inert" else 1


@dataclass(frozen=True)
class RayModulus:
    """The modulus f = N*O_K together with per-prime local data."""

    field: ImagQuadField
    N: int
    primes: tuple[PrimeLocal, ...]


def ray_modulus(field: ImagQuadField, N: int) -> RayModulus:
    if N < 2:
        raise ValueError(f"N = {N} must be >= 2")
    locals_ = []
    for p, e in sorted(factorize(N).items()):
        k = kronecker(field.d_K, p)
        splitting = {1: "split", -1: "inert", 0: "ramified"}[k]
        locals_.append(PrimeLocal(p=p, splitting=splitting, n_p=e))
    return RayModulus(field=field, N=N, primes=tuple(locals_))


def _phi_prime_ideal(pl: PrimeLocal, e: int) -> int:
    """|(O_K / P^e)^x| for the prime ideal P of pl (ideal exponent e)."""
    p = pl.p
    if pl.splitting == "inert":
        return p ** (2 * e) - p ** (2 * e - 2)
    return p ** e - p ** (e - 1)


def euler_phi_ideal(m: RayModulus) -> int:
    """|(O_K / N*O_K)^x|, multiplicative over the prime ideal powers."""
    out = 1
    for pl in m.primes:
        if pl.splitting == "split":
            out *= _phi_prime_ideal(pl, pl.n_p) ** 2
        else:
            out *= _phi_prime_ideal(pl, pl.ideal_exponent)
    return out


def _unit_valuation(field: ImagQuadField, u: tuple[int, int], pl: PrimeLocal) -> int:
    """P-adic valuation of u - 1 for a root of unity u = (s, t).

    Only finitely many cases exist: u - 1 is 0, -2, a generator of the
    ramified prime over 2 (K = Q(i)), a generator of the ramified prime
    over 3 (K = Q(sqrt(-3))), or a unit.  Conjugate split primes give
    equal valuations for every u, so the pair need not be distinguished.
    """
    if u == (0, 1):
        return INF
    p = pl.p
    if u == (0, -1):  # u - 1 = -2
        if p != 2:
            return 0
        return 2 if pl.splitting == "ramified" else 1
    if field.d_K == -4:  # u = +-i, norm(u - 1) = 2, and 2 ramifies
        return 1 if p == 2 else 0
    # K = Q(sqrt(-3)): theta generates the order-3 part; theta - 1 and
    # theta^2 - 1 sit in the ramified prime over 3, the rest are units
    if u in ((1, 0), (-1, -1)):
        return 1 if p == 3 else 0
    return 0


def _omega_constraints(field: ImagQuadField,
                       constraints: list[tuple[PrimeLocal, int]]) -> int:
    """Count roots of unity u with v_P(u - 1) >= e for every (P, e) given."""
    count = 0
    for u in field.units():
        if all(_unit_valuation(field, u, pl) >= e for pl, e in constraints):
            count += 1
    return count


def omega_f(m: RayModulus) -> int:
    """Number of roots of unity congruent to 1 mod N*O_K.

    Computed by direct enumeration: u = s*theta + t is 1 mod N*O_K iff
    s = 0 and t = 1 coordinatewise mod N.
    """
    N = m.N
    return sum(1 for (s, t) in m.field.units()
               if s % N == 0 and (t - 1) % N == 0)


def ray_class_degree(m: RayModulus) -> int:
    """[K_(N) : K] = h_K * phi(f) * omega(f) / omega_K."""
    num = m.field.h_K * euler_phi_ideal(m) * omega_f(m)
    if num % m.field.omega_K:
        raise ArithmeticError("degree formula did not divide exactly")
    return num // m.field.omega_K


def omega_prime_power(field: ImagQuadField, pl: PrimeLocal, e: int) -> int:
    """Number of roots of unity congruent to 1 mod P^e."""
    return _omega_constraints(field, [(pl, e)])


def g_i_order(m: RayModulus, p: int) -> int:
    """Order of (O_K/P^e)^x modulo unit classes, for the prime ideal over p."""
    pl = next((q for q in m.primes if q.p == p), None)
    if pl is None:
        raise ValueError(f"p = {p} does not divide N = {m.N}")
    e = pl.ideal_exponent
    num = _phi_prime_ideal(pl, e) * omega_prime_power(m.field, pl, e)
    if num % m.field.omega_K:
        raise ArithmeticError("unit-class order did not divide exactly")
    return num // m.field.omega_K


def _small_order_predicted(field: ImagQuadField, pl: PrimeLocal) -> int | None:
    """Case table: 1 or 2 when the local factor collapses, 3 for the next rung.

    Returns 2, 3 or None meaning "predicted <= 2", "predicted == 3",
    "predicted > 3"; used as a self-test against the computed order.
    """
    p, e = pl.p, pl.ideal_exponent
    inert = pl.splitting == "inert"
    if field.d_K == -4:
        if (p == 2 and e <= 4) or (p in (3, 5) and e == 1):
            return 2
        if p == 13 and e == 1:
            return 3
        return None
    if field.d_K == -3:
        if (p == 2 and e <= 2) or (p == 3 and e <= 2) or (p in (7, 13) and e == 1):
            return 2
        if (p == 3 and e == 3) or (p == 19 and e == 1):
            return 3
        return None
    if (p == 2 and not inert and e <= 3) or (p in (3, 5) and not inert and e == 1):
        return 2
    if (p == 2 and inert and e == 1) or (p == 3 and not inert and e == 2) \
            or (p == 7 and not inert and e == 1):
        return 3
    return None


def check_small_gi_table(m: RayModulus) -> list[tuple[int, int, bool]]:
    """Compare each computed local order against the small-order case table."""
    out = []
    for pl in m.primes:
        order = g_i_order(m, pl.p)
        predicted = _small_order_predicted(m.field, pl)
        if predicted == 2:
            ok = order <= 2
        elif predicted == 3:
            ok = order == 3
        else:
            ok = order > 3
        out.append((pl.p, order, ok))
    return out


def _degree_without(m: RayModulus, drop: PrimeLocal) -> int:
    """[K_f' : K] where f' removes one prime ideal power of f = N*O_K.

    For split p one of the two conjugate ideals is removed; both choices
    give the same degree because conjugation fixes every unit valuation.
    """
    phi = euler_phi_ideal(m) // _phi_prime_ideal(drop, drop.ideal_exponent)
    constraints = []
    for pl in m.primes:
        if pl.splitting == "split":
            constraints.append((pl, pl.n_p))  # the surviving conjugate ideal
            if pl.p != drop.p:
                constraints.append((pl, pl.n_p))
        elif pl.p != drop.p:
            constraints.append((pl, pl.ideal_exponent))
    omega = _omega_constraints(m.field, constraints)
    num = m.field.h_K * phi * omega
    if num % m.field.omega_K:
        raise ArithmeticError("degree formula did not divide exactly")
    return num // m.field.omega_K


def degree_drop_test(m: RayModulus) -> bool:
    """True iff removing any prime ideal power strictly drops the degree.

    Degree equality is field equality here: both fields are abelian over K
    and one conductor divides the other.
    """
    full = ray_class_degree(m)
    return all(_degree_without(m, pl) < full for pl in m.primes)


def k_p(m: RayModulus, p: int) -> int:
    """Order of the distinguished principal ray class attached to p | N."""
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"p = {p} must be an odd prime")
    pl = next((q for q in m.primes if q.p == p), None)
    if pl is None:
        raise ValueError(f"p = {p} does not divide N = {m.N}")
    d_K = m.field.d_K
    if d_K % p != 0 and pl.n_p == 1:
        if m.N == p:
            val = p - kronecker(d_K, p)
            if val % m.field.omega_K:
                raise ArithmeticError("k_p division failed")
            return val // m.field.omega_K
        return (p - kronecker(d_K, p)) // 2
    return p


def beta_of_lemma(m: RayModulus, p: int) -> AlgebraicIntegerZTheta:
    """The explicit generator beta = 1 + (2N/p or 6N/p)*sqrt(-d), theta basis.

    Requires p odd, p | N and p^2 | N*d_K (the ramified-or-repeated case);
    its ray class has order exactly p and norm(beta) = 1 mod N'.
    """
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"p = {p} must be an odd prime")
    if m.N % p:
        raise ValueError(f"p = {p} does not divide N = {m.N}")
    if (m.N * m.field.d_K) % (p * p):
        raise ValueError(f"p^2 = {p*p} does not divide N*d_K")
    N = m.N
    c = 2 * N // p if p == 3 else 6 * N // p
    if m.field.d_K % 4 == 0:
        beta = AlgebraicIntegerZTheta(s=c, t=1)
    else:
        beta = AlgebraicIntegerZTheta(s=2 * c, t=c + 1)
    n_prime = 4 * N if N % 3 == 0 else 12 * N
    norm = beta.norm(m.field)
    if norm % n_prime != 1 % n_prime:
        raise ArithmeticError(f"norm(beta) = {norm} is not 1 mod {n_prime}")
    if gcd(norm, 6 * N) != 1:
        raise ArithmeticError(f"beta is not prime to 6N = {6*N}")
    return beta


def brute_force_residue_count(field: ImagQuadField, N: int) -> int:
    """Oracle: count invertible residues of Z[theta]/N by exhaustion."""
    count = 0
    for s in range(N):
        for t in range(N):
            if gcd(field.norm_st(s, t), N) == 1:
                count += 1
    return count
