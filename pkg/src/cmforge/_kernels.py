"""Machine-integer hot loops: root scans mod p and representation search.

Two interchangeable backends: numba @njit kernels (default) and pure-numpy
vectorized equivalents.  Set CMFORGE_PURE_NUMPY=1 to force the numpy path;
it is also taken automatically when numba is unavailable.  Both paths are
exact for p below 2^26 (intermediate products stay inside int64).
"""

from __future__ import annotations

import os

import numpy as np

_FORCE_NUMPY = os.environ.get("CMFORGE_PURE_NUMPY", "") not in ("", "0")

USING_NUMBA = False
if not _FORCE_NUMPY:
    try:
        import numba

        USING_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USING_NUMBA = False


def primes_up_to(bound: int) -> np.ndarray:
    """Odd-step sieve of Eratosthenes; includes 2 when bound >= 2."""
    if bound < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(bound ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def _root_scan_numpy(coeffs: np.ndarray, p: int) -> int:
    """Least root of the polynomial mod p, or -1; vectorized Horner."""
    xs = np.arange(p, dtype=np.int64)
    acc = np.full(p, coeffs[0] % p, dtype=np.int64)
    for c in coeffs[1:]:
        acc = (acc * xs + c) % p
    roots = np.nonzero(acc == 0)[0]
    return int(roots[0]) if roots.size else -1


def _repr_search_numpy(n: int, N: int, p: int) -> tuple[int, int]:
    """Least (|y|, |x|) with x^2 + n*y^2 = p, x = 1 (N), y = 0 (N); or (-1, 0)."""
    y_max = int(np.sqrt(p // n)) + 1 if n else 0
    ys = np.arange(0, y_max + 1, N, dtype=np.int64)
    rem = p - n * ys * ys
    ys = ys[rem >= 0]
    rem = rem[rem >= 0]
    xs = np.sqrt(rem.astype(np.float64)).astype(np.int64)
    xs = np.where((xs + 1) * (xs + 1) <= rem, xs + 1, xs)
    xs = np.where(xs * xs > rem, xs - 1, xs)  # exact isqrt after float seed
    for i in np.nonzero(xs * xs == rem)[0]:  # ys ascending: (|y|, |x|) order
        x, y = int(xs[i]), int(ys[i])
        if x % N == 1 % N:
            return x, y
        if (-x) % N == 1 % N:
            return -x, y
    return -1, 0


if USING_NUMBA:

    @numba.njit(cache=True)
    def _root_scan_numba(coeffs, p):  # pragma: no cover - exercised via wrapper
        for x in range(p):
            acc = 0
            for c in coeffs:
                acc = (acc * x + c) % p
            if acc == 0:
                return x
        return -1

    @numba.njit(cache=True)
    def _repr_search_numba(n, N, p):  # pragma: no cover - exercised via wrapper
        y = 0
        while n * y * y <= p:
            rem = p - n * y * y
            x = int(np.sqrt(rem))
            while x * x > rem:
                x -= 1
            while (x + 1) * (x + 1) <= rem:
                x += 1
            if x * x == rem:
                if x % N == 1 % N:
                    return x, y
                if (-x) % N == 1 % N:
                    return -x, y
            y += N
        return -1, 0


def root_scan(coeffs, p: int) -> int:
    """Backend dispatch; coeffs descending, any integer size (reduced mod p)."""
    arr = np.array([int(c) % p for c in coeffs], dtype=np.int64)
    if USING_NUMBA:
        return int(_root_scan_numba(arr, p))
    return _root_scan_numpy(arr, p)


def representation_search(n: int, N: int, p: int) -> tuple[int, int] | None:
    """First solution of x^2 + n*y^2 = p with the congruence side conditions.

    Ordered by (|y|, |x|); x may be negative, y is reported nonnegative.
    """
    if USING_NUMBA:
        x, y = _repr_search_numba(n, N, p)
    else:
        x, y = _repr_search_numpy(n, N, p)
    return None if x == -1 and y == 0 else (int(x), int(y))
