"""Representability criterion for p = x^2 + n*y^2 with congruence conditions.

The criterion (Kronecker symbol plus a root of the ray class polynomial
mod p) is cross-validated against a brute-force search over every
admissible prime in a range; any mismatch is a reported failure, and
excluded primes are listed rather than silently skipped.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ._kernels import primes_up_to, representation_search, root_scan
from .fields import is_prime, kronecker
from .minpoly import PolyZ, discriminant

_SCAN_LIMIT = 10 ** 6


class PreconditionExcluded(ValueError):
    """p divides n*N or the discriminant; the criterion does not apply."""


@dataclass(frozen=True)
class DiophQuery:
    n: int
    N: int
    f_N: PolyZ
    p: int

    def __post_init__(self):
        if (-self.n) % 4 not in (2, 3):
            raise ValueError(f"-n = {-self.n} must be 2 or 3 mod 4")


@lru_cache(maxsize=64)
def _disc_cached(coefficients: tuple[int, ...]) -> int:
    return discriminant(PolyZ(coefficients))


def _strip(f: list[int]) -> list[int]:
    while len(f) > 1 and f[0] == 0:
        f = f[1:]
    return f


def _poly_mul_mod(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _poly_rem_mod(a, f, p):
    """a mod (f, p) for monic f; coefficients descending."""
    a = [c % p for c in a]
    df = len(f) - 1
    while len(a) - 1 >= df:
        lead = a[0]
        if lead:
            for j in range(df + 1):
                a[j] = (a[j] - lead * f[j]) % p
        a = a[1:]
    return _strip(a)


def _monic_mod(f, p):
    inv = pow(f[0], -1, p)
    return [c * inv % p for c in f]


def _poly_gcd_mod(a, b, p):
    a = _strip([c % p for c in a])
    b = _strip([c % p for c in b])
    while any(b):
        bm = _monic_mod(b, p)
        a, b = bm, _poly_rem_mod(a, bm, p)
    return a


def _pow_shifted_mod(f, a, e, p):
    """(X + a)^e mod (f, p), by repeated squaring."""
    result = [1]
    base = _poly_rem_mod([1, a % p], f, p)
    while e:
        if e & 1:
            result = _poly_rem_mod(_poly_mul_mod(result, base, p), f, p)
        base = _poly_rem_mod(_poly_mul_mod(base, base, p), f, p)
        e >>= 1
    return result


def _split_linear(g, p):
    """A root of a monic polynomial splitting into distinct linears mod p.

    Probe sequence is fixed, so the returned root is deterministic.
    """
    seed = 1
    while len(g) - 1 > 1:
        a = seed % p
        seed = (seed * 1103515245 + 12345) % (1 << 31)
        probe = list(_pow_shifted_mod(g, a, (p - 1) // 2, p))
        probe[-1] = (probe[-1] - 1) % p
        h = _poly_gcd_mod(g, probe, p)
        if 1 <= len(h) - 1 < len(g) - 1:
            g = h
    return (-g[1]) % p


def root_mod_p(f: PolyZ, p: int) -> int | None:
    """A root of f mod p in [0, p), or None.

    Kernel scan below 10^6; above that, gcd(X^p - X, f) finds the split
    part and a deterministic gcd descent extracts one root.
    """
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    coeffs = [c % p for c in f.coefficients]
    if p < _SCAN_LIMIT:
        r = root_scan(coeffs, p)
        return None if r < 0 else r
    coeffs = _strip(coeffs)
    xp = _pow_shifted_mod(coeffs, 0, p, p)
    xp_minus_x = [0, 0] + list(xp) if len(xp) < 2 else list(xp)
    xp_minus_x[-2] = (xp_minus_x[-2] - 1) % p
    g = _poly_gcd_mod(coeffs, xp_minus_x, p)
    if len(g) - 1 < 1:
        return None
    if len(g) - 1 == 1:
        return (-g[1]) % p
    return _split_linear(g, p)


def has_root_mod_p(f: PolyZ, p: int) -> bool:
    return root_mod_p(f, p) is not None


def criterion(q: DiophQuery) -> bool:
    """True iff p is x^2 + n*y^2 with x = 1 and y = 0 mod N.

    Decided by (-n/p) = 1 together with a root of f_N mod p; only valid
    when p is an odd prime dividing neither n*N nor disc(f_N).
    """
    p = q.p
    if p == 2 or not is_prime(p):
        raise ValueError(f"p = {p} must be an odd prime")
    if (q.n * q.N) % p == 0:
        raise PreconditionExcluded(f"p = {p} divides n*N")
    if _disc_cached(q.f_N.coefficients) % p == 0:
        raise PreconditionExcluded(f"p = {p} divides disc(f_N)")
    if kronecker(-q.n, p) != 1:
        return False
    return has_root_mod_p(q.f_N, p)


def brute_force_representation(n: int, N: int, p: int) -> tuple[int, int] | None:
    """Exhaustive solution of x^2 + n*y^2 = p with the side conditions.

    x ranges over both signs (x = 1 mod N constrains the integer, not its
    absolute value); the first hit in (|y|, |x|) order is returned.
    """
    if p < 2:
        raise ValueError(f"p = {p} must be >= 2")
    return representation_search(n, N, p)


def cross_validate(n: int, N: int, f_N: PolyZ, prime_bound: int) -> dict:
    """Criterion vs brute force for every admissible odd prime <= bound.

    Returns a report dict; `mismatches` must stay empty for the criterion
    to be validated on the range.
    """
    disc = _disc_cached(f_N.coefficients)
    checked = 0
    representable = 0
    excluded = []
    mismatches = []
    for p in primes_up_to(prime_bound):
        p = int(p)
        if p == 2:
            continue
        if (n * N) % p == 0 or disc % p == 0:
            excluded.append(p)
            continue
        predicted = criterion(DiophQuery(n=n, N=N, f_N=f_N, p=p))
        witness = brute_force_representation(n, N, p)
        checked += 1
        if witness is not None:
            representable += 1
        if predicted != (witness is not None):
            mismatches.append({"p": p, "criterion": predicted,
                               "witness": witness})
    return {
        "n": n,
        "N": N,
        "prime_bound": prime_bound,
        "disc_excluded_primes": excluded,
        "checked": checked,
        "representable": representable,
        "mismatches": mismatches,
    }
