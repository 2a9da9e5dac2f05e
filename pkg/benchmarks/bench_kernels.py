"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the two Diophantine hot loops (polynomial root scan mod p and the
representation search) over every odd prime below a bound, once per
backend, and prints a timing table.  The numpy path is selected in a
subprocess via CMFORGE_PURE_NUMPY=1 so both are measured from a cold
import of the dispatch module.

Usage: python benchmarks/bench_kernels.py [bound]
"""

import json
import os
import subprocess
import sys
import time

F9 = (1, -36, 234, 1086, 2547, 12294, 32415, 41976, 45459, 55748, 51480,
      22914, -1092, -5310, -1719, 6, 99, 18, 1)


def workload(bound: int) -> dict:
    from cmforge._kernels import (USING_NUMBA, primes_up_to,
                                  representation_search, root_scan)

    primes = [int(p) for p in primes_up_to(bound) if p % 2]
    # warm-up so jit compilation is not billed to the timed loop
    root_scan(F9, 11)
    representation_search(1, 9, 13)

    t0 = time.perf_counter()
    roots = sum(1 for p in primes if root_scan(F9, p) >= 0)
    t_root = time.perf_counter() - t0

    t0 = time.perf_counter()
    hits = sum(1 for p in primes if representation_search(1, 9, p) is not None)
    t_repr = time.perf_counter() - t0

    return {"backend": "numba" if USING_NUMBA else "numpy",
            "primes": len(primes), "root_scan_s": t_root,
            "roots_found": roots, "repr_search_s": t_repr,
            "representable": hits}


def main():
    bound = int(sys.argv[1]) if len(sys.argv) > 1 else 20000
    if os.environ.get("_CMFORGE_BENCH_CHILD"):
        print(json.dumps(workload(bound)))
        return
    results = []
    for pure_numpy in ("0", "1"):
        env = dict(os.environ, _CMFORGE_BENCH_CHILD="1",
                   CMFORGE_PURE_NUMPY=pure_numpy)
        out = subprocess.run([sys.executable, __file__, str(bound)],
                             env=env, capture_output=True, text=True,
                             check=True)
        results.append(json.loads(out.stdout.strip().splitlines()[-1]))
    a, b = results
    assert a["roots_found"] == b["roots_found"], "backends disagree"
    assert a["representable"] == b["representable"], "backends disagree"
    print(f"odd primes below {bound}: {a['primes']}  "
          f"(roots found {a['roots_found']}, representable {a['representable']})")
    print(f"{'backend':<8} {'root_scan':>12} {'repr_search':>12}")
    for r in results:
        print(f"{r['backend']:<8} {r['root_scan_s']:>11.3f}s "
              f"{r['repr_search_s']:>11.3f}s")
    ratio = b["root_scan_s"] / max(a["root_scan_s"], 1e-9)
    print(f"root_scan speedup (numba vs numpy): {ratio:.1f}x")


if __name__ == "__main__":
    main()
