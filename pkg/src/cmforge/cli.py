"""Command-line surface: field data, Galois orbits, minimal polynomials,
and the Diophantine cross-validation, with deterministic JSON output.

Big integers are serialized as decimal strings; identical inputs produce
byte-identical output regardless of thread count.
"""

from __future__ import annotations

import json
import os

import click
import mpmath as mp

from . import __version__
from .dioph import cross_validate
from .fields import make_field, ray_modulus, ray_class_degree
from .forms import enumerate_reduced_forms
from .minpoly import (PolyZ, approx_polynomial, discriminant,
                      evaluate_orbit, factor_trial, reconstruction_report,
                      unit_check)
from .reciprocity import build_w_group
from .siegel import KINDS, PrecisionContext, build_invariant

SCHEMA = 1


def _default_precision() -> int:
    env = os.environ.get("CMFORGE_PRECISION", "")
    return int(env) if env else 120


def _emit(payload: dict, fmt: str, out: str | None, text_lines) -> None:
    if fmt == "json":
        rendered = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        rendered = "\n".join(text_lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(rendered)
    else:
        click.echo(rendered, nl=False)


@click.group()
@click.version_option(__version__)
def main():
    """Ray class field invariants over imaginary quadratic fields."""


@main.command("field")
@click.argument("d", type=int)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]),
              default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_field(d, fmt, out):
    """Ground field summary for K = Q(sqrt(-d)): discriminant, CM point,
    unit count, class number, and the reduced forms."""
    field = make_field(d)
    fcg = enumerate_reduced_forms(field.d_K)
    payload = {
        "schema": SCHEMA,
        "command": "field",
        "d": field.d,
        "d_K": field.d_K,
        "theta_min_poly": {"B": field.B_theta, "C": field.C_theta},
        "omega_K": field.omega_K,
        "h_K": field.h_K,
        "reduced_forms": [[q.a, q.b, q.c] for q in fcg.forms],
    }
    lines = [
        f"K = Q(sqrt(-{field.d}))   d_K = {field.d_K}",
        f"min(theta, Q) = X^2 + {field.B_theta}*X + {field.C_theta}",
        f"omega_K = {field.omega_K}   h_K = {field.h_K}",
        "reduced forms: " + ", ".join(f"[{q.a},{q.b},{q.c}]" for q in fcg.forms),
    ]
    _emit(payload, fmt, out, lines)


@main.command("orbit")
@click.argument("d", type=int)
@click.argument("n", type=int)
@click.option("--level", type=int, default=None,
              help="Group level M (defaults to N).")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]),
              default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_orbit(d, n, level, fmt, out):
    """Coset representatives of the level-N matrix group W/ker, whose
    pairing with the reduced forms enumerates Gal(K_(N)/K)."""
    field = make_field(d)
    M = level if level is not None else n
    w = build_w_group(field, M)
    mats = w.coset_matrices()
    degree = ray_class_degree(ray_modulus(field, M))
    payload = {
        "schema": SCHEMA,
        "command": "orbit",
        "d": d,
        "N": n,
        "level": M,
        "coset_count": len(mats),
        "h_K": field.h_K,
        "galois_degree": degree,
        "cosets": [[[m[0][0], m[0][1]], [m[1][0], m[1][1]]] for m in mats],
    }
    lines = [f"W_{{{M}}}/ker cosets: {len(mats)}   "
             f"[K_({M}):K] = {degree} = {len(mats)} * h_K({field.h_K})"]
    lines += [f"  [[{m[0][0]},{m[0][1]}],[{m[1][0]},{m[1][1]}]]" for m in mats]
    _emit(payload, fmt, out, lines)


@main.command("minpoly")
@click.option("-d", "d", type=int, required=True)
@click.option("-N", "n", type=int, required=True)
@click.option("--kind", type=click.Choice(list(KINDS)), required=True)
@click.option("-s", "s", type=int, default=None)
@click.option("-t", "t", type=int, default=None)
@click.option("-p", "p", type=int, default=None)
@click.option("-P", "--precision", "precision", type=int, default=None,
              help="Decimal digits (default CMFORGE_PRECISION or 120).")
@click.option("--level", type=int, default=None,
              help="Override the computed orbit level.")
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--approx", is_flag=True,
              help="Also report 5-digit approximate coefficients.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]),
              default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_minpoly(d, n, kind, s, t, p, precision, level, threads, approx,
                fmt, out):
    """Exact integer minimal polynomial of the selected invariant."""
    field = make_field(d)
    ctx = PrecisionContext(P=precision if precision else _default_precision())
    spec = build_invariant(field, n, kind, s=s, t=t, p=p, level=level)
    orbit = evaluate_orbit(spec, ctx, threads=threads)
    poly, distinct, multiplicity = reconstruction_report(orbit, ctx)
    disc = discriminant(poly)
    factors, cofactor = factor_trial(disc)
    payload = {
        "schema": SCHEMA,
        "command": "minpoly",
        "d": d,
        "N": n,
        "kind": kind,
        "s": s,
        "t": t,
        "p": p,
        "precision": ctx.P,
        "level": spec.level,
        "exponent": spec.exponent,
        "orbit_size": len(orbit.values),
        "distinct_roots": distinct,
        "multiplicity": multiplicity,
        "degree": poly.degree,
        "coefficients": poly.coefficient_strings(),
        "discriminant": str(disc),
        "disc_sign": -1 if disc < 0 else 1,
        "disc_factors": {str(k): v for k, v in sorted(factors.items())},
        "disc_cofactor": str(cofactor),
        "unit": unit_check(poly),
    }
    if approx:
        with mp.workdps(ctx.dps):
            payload["approx_coefficients"] = approx_polynomial(orbit, ctx)
    lines = [
        f"kind = {kind}   level = {spec.level}   orbit = {len(orbit.values)}"
        f" = {distinct} distinct x {multiplicity}",
        f"degree {poly.degree} polynomial, coefficients (degree descending):",
        "  " + " ".join(poly.coefficient_strings()),
        f"disc = {disc}",
        f"unit: {unit_check(poly)}",
    ]
    if approx:
        lines.append("approx: " + " ".join(payload["approx_coefficients"]))
    _emit(payload, fmt, out, lines)


@main.command("dioph")
@click.argument("n", type=int)
@click.argument("modulus", type=int)
@click.argument("bound", type=int)
@click.option("--minpoly-file", type=click.Path(exists=True, dir_okay=False),
              default=None,
              help="JSON file with a previously computed polynomial "
                   "(minpoly output); computed fresh when omitted.")
@click.option("--kind", type=click.Choice(list(KINDS)), default=None,
              help="Invariant kind when computing the polynomial here.")
@click.option("-s", "s", type=int, default=None)
@click.option("-t", "t", type=int, default=None)
@click.option("-p", "p", type=int, default=None)
@click.option("-P", "--precision", "precision", type=int, default=None)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]),
              default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def cmd_dioph(ctx_, n, modulus, bound, minpoly_file, kind, s, t, p,
              precision, threads, fmt, out):
    """Cross-validate the representability criterion for x^2 + n*y^2
    against brute force over all admissible odd primes below BOUND."""
    if minpoly_file:
        with open(minpoly_file) as fh:
            data = json.load(fh)
        poly = PolyZ(tuple(int(c) for c in data["coefficients"]))
    else:
        field = make_field(n)
        ctx = PrecisionContext(P=precision if precision else _default_precision())
        if kind is None:
            kind, s, t, p = _default_dioph_kind(field, modulus, s, t, p)
        spec = build_invariant(field, modulus, kind, s=s, t=t, p=p)
        orbit = evaluate_orbit(spec, ctx, threads=threads)
        poly, _, _ = reconstruction_report(orbit, ctx)
    report = cross_validate(n, modulus, poly, bound)
    payload = {
        "schema": SCHEMA,
        "command": "dioph",
        "polynomial": [str(c) for c in poly.coefficients],
        **{k: (v if not isinstance(v, list) else v)
           for k, v in report.items()},
    }
    lines = [
        f"x^2 + {n}y^2, x=1 y=0 mod {modulus}, primes < {bound}",
        f"checked {report['checked']} primes, "
        f"{report['representable']} representable",
        f"excluded (divide n*N*disc): {report['disc_excluded_primes']}",
        f"mismatches: {report['mismatches']}",
    ]
    _emit(payload, fmt, out, lines)
    if report["mismatches"]:
        ctx_.exit(1)


def _default_dioph_kind(field, N, s, t, p):
    """Pick the real-generator construction matching the worked cases."""
    from .fields import factorize

    if t is not None or (N % 4 == 0 and (N * field.d) % 4 == 0 and p is None
                         and s is None):
        return "thm62_real", s, t if t is not None else 1, p
    for q, e in factorize(N).items():
        if q % 2 and e >= 2:
            return "cor63", s, t, q
    if s is not None:
        return "thm62_real", s, t, p
    raise click.UsageError("give --kind (and -s/-t/-p) for this modulus")


if __name__ == "__main__":
    main()
