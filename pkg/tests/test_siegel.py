import random
from fractions import Fraction

import mpmath as mp
import pytest

from cmforge.fields import AlgebraicIntegerZTheta, make_field, ray_modulus
from cmforge.siegel import (IndexVector, PrecisionContext, bernoulli2,
                            build_invariant, fractional_reduce,
                            invariant_value, m_exponent_theorem51,
                            m_exponent_theorem62, modular_level,
                            modularity_check, mpq, reduction_phase,
                            siegel_eval, sr_invariant, tau_of_field)

CTX = PrecisionContext(P=60)


def test_bernoulli2():
    assert bernoulli2(Fraction(0)) == Fraction(1, 6)
    assert bernoulli2(Fraction(1, 2)) == Fraction(-1, 12)
    assert bernoulli2(Fraction(2, 3)) == Fraction(-1, 18)


def test_fractional_reduce():
    r = fractional_reduce(IndexVector(Fraction(4, 3), Fraction(7, 9)))
    assert (r.r1, r.r2) == (Fraction(1, 3), Fraction(7, 9))
    r = fractional_reduce(IndexVector(Fraction(-1, 4), Fraction(5, 4)))
    assert (r.r1, r.r2) == (Fraction(3, 4), Fraction(1, 4))
    r = fractional_reduce(IndexVector(Fraction(0), Fraction(1, 9)))
    assert (r.r1, r.r2) == (Fraction(0), Fraction(1, 9))


def test_index_vector_rejects_integral():
    with pytest.raises(ValueError):
        IndexVector(Fraction(2), Fraction(-1))


def test_leading_factor_asymptotics():
    # for tau = i*T with T large, g_(0,1/2)(tau) -> 2i * q^(1/12):
    # q_z = -1 makes the (1 - q_z) factor 2 and the prefactor -e^{-pi i/2}
    ctx = PrecisionContext(P=60)
    with mp.workdps(ctx.dps):
        tau = mp.mpc(0, 10)
        g = siegel_eval(IndexVector(Fraction(0), Fraction(1, 2)), tau, ctx).value
        lead = 2j * mp.exp(2j * mp.pi * tau / 12)
        assert abs(g / lead - 1) < mp.mpf(10) ** -25


def test_shift_identities_match_direct_product():
    # the exact reduction phase against a literal unreduced product
    ctx = PrecisionContext(P=60)
    with mp.workdps(ctx.dps):
        tau = tau_of_field(make_field(7))
        for (a, b) in [(Fraction(12, 5), Fraction(13, 5)),
                       (Fraction(-3, 4), Fraction(9, 4)),
                       (Fraction(7, 3), Fraction(-5, 9))]:
            via_reduction = siegel_eval(IndexVector(a, b), tau, ctx).value
            direct = _unreduced_product(a, b, tau, 150)
            assert abs(via_reduction / direct - 1) < mp.mpf(10) ** -40, (a, b)


def _unreduced_product(r1, r2, tau, terms):
    # oracle: the defining product evaluated at the raw index
    q = mp.exp(2j * mp.pi * tau)
    qz = mp.exp(2j * mp.pi * (mpq(r1) * tau + mpq(r2)))
    val = -mp.exp(2j * mp.pi * tau * mpq(bernoulli2(r1) / 2)) \
        * mp.exp(1j * mp.pi * mpq(r2 * (r1 - 1))) * (1 - qz)
    qn = q
    for _ in range(terms):
        val *= (1 - qn * qz) * (1 - qn / qz)
        qn *= q
    return val


def test_double_precision_agreement():
    rng = random.Random(1)
    lo = PrecisionContext(P=60)
    hi = PrecisionContext(P=120)
    for d in (5, 7):
        field = make_field(d)
        for _ in range(10):
            r = IndexVector(Fraction(rng.randrange(0, 12), 12),
                            Fraction(rng.randrange(1, 12), 12))
            with mp.workdps(hi.dps):
                tau_hi = tau_of_field(field)
                v_hi = siegel_eval(r, tau_hi, hi).value
            with mp.workdps(lo.dps):
                tau_lo = tau_of_field(field)
                v_lo = siegel_eval(r, tau_lo, lo).value
                assert abs(mp.mpc(v_lo) / v_hi - 1) < mp.mpf(10) ** -lo.P


def test_power_identities_12N():
    # g^(12N) is invariant under index negation and fractional reduction
    rng = random.Random(2)
    ctx = PrecisionContext(P=60)
    N = 12
    for d in (5, 7):
        field = make_field(d)
        with mp.workdps(ctx.dps):
            tau = tau_of_field(field)
            for _ in range(25):
                r1 = Fraction(rng.randrange(-11, 12), 12)
                r2 = Fraction(rng.randrange(-11, 12), 12)
                if r1.denominator == 1 and r2.denominator == 1:
                    continue
                base = siegel_eval(IndexVector(r1, r2), tau, ctx).value ** (12 * N)
                neg = siegel_eval(IndexVector(-r1, -r2), tau, ctx).value ** (12 * N)
                red = fractional_reduce(IndexVector(r1, r2))
                frac = siegel_eval(red, tau, ctx).value ** (12 * N)
                assert abs(neg / base - 1) < mp.mpf(10) ** -(ctx.P - 20)
                assert abs(frac / base - 1) < mp.mpf(10) ** -(ctx.P - 20)


def test_realness_quotients():
    # for even discriminants: i*e^(t*pi*i/2N) g_(1/2,t/N)/g_(0,1/N) is real,
    # and g_(0,s/N)/g_(0,1/N) is real
    ctx = PrecisionContext(P=60)
    for d, N in ((5, 4), (1, 9), (2, 8)):
        field = make_field(d)
        if field.d_K % 4:
            continue
        with mp.workdps(ctx.dps):
            tau = tau_of_field(field)
            den = siegel_eval(IndexVector(Fraction(0), Fraction(1, N)), tau, ctx).value
            for t in range(N):
                num = siegel_eval(IndexVector(Fraction(1, 2), Fraction(t, N)),
                                  tau, ctx).value
                val = 1j * mp.exp(1j * mp.pi * mpq(Fraction(t, 2 * N))) * num / den
                assert abs(val.imag) < mp.mpf(10) ** -(ctx.P - 20), (d, N, t)
            for s in range(1, N):
                num = siegel_eval(IndexVector(Fraction(0), Fraction(s, N)),
                                  tau, ctx).value
                assert abs((num / den).imag) < mp.mpf(10) ** -(ctx.P - 20)


def test_no_zero_values():
    ctx = PrecisionContext(P=60)
    with mp.workdps(ctx.dps):
        tau = tau_of_field(make_field(7))
        for k in range(1, 9):
            v = siegel_eval(IndexVector(Fraction(0), Fraction(k, 9)), tau, ctx)
            assert abs(v.value) > mp.mpf(10) ** (-2 * ctx.P)


def test_modularity_check_examples():
    # the exponent-3 quotient family at an odd level divisible by 3
    for N in (9, 21):
        family = [(IndexVector(Fraction(2, 3), Fraction(1, N)), 3),
                  (IndexVector(Fraction(0), Fraction(1, N)), -3)]
        assert modularity_check(family, N) is True
    assert modularity_check([], 5) is True
    assert modularity_check([(IndexVector(Fraction(0), Fraction(1, 5)), 1)], 5) \
        is False
    with pytest.raises(ValueError):
        modularity_check([(IndexVector(Fraction(0), Fraction(1, 7)), 1)], 5)


def test_modularity_check_against_direct_congruences():
    rng = random.Random(3)
    for _ in range(1000):
        N = rng.randrange(2, 13)
        fam = []
        for _ in range(rng.randrange(1, 5)):
            k1, k2 = rng.randrange(0, N), rng.randrange(0, N)
            if k1 == 0 and k2 == 0:
                k2 = 1
            fam.append(((k1, k2), rng.randrange(-6, 7)))
        family = [(IndexVector(Fraction(k1, N), Fraction(k2, N)), m)
                  for (k1, k2), m in fam]
        s11 = sum(m * k1 * k1 for (k1, k2), m in fam)
        s22 = sum(m * k2 * k2 for (k1, k2), m in fam)
        s12 = sum(m * k1 * k2 for (k1, k2), m in fam)
        wt = sum(m for _, m in fam)
        from math import gcd

        expected = (s11 % (gcd(2, N) * N) == 0 and s22 % (gcd(2, N) * N) == 0
                    and s12 % N == 0 and (wt * gcd(12, N)) % 12 == 0)
        assert modularity_check(family, N) == expected


def test_modular_level_search():
    f5 = make_field(5)
    spec = build_invariant(f5, 4, "thm51_quotient", s=3, t=2)
    assert spec.level == 8
    spec = build_invariant(make_field(7), 5, "thm51_quotient", s=12, t=13)
    assert spec.level == 25
    spec = build_invariant(make_field(7), 9, "cor52", p=3)
    assert spec.level == 9
    spec = build_invariant(f5, 4, "thm62_real", t=1)
    assert spec.level == 4


def test_m_exponents():
    assert m_exponent_theorem51(9) == 3
    assert m_exponent_theorem51(4) == 4
    assert m_exponent_theorem51(6) == 12
    assert m_exponent_theorem62(9, 4) == 3
    # odd prime square: s = 1 + N/p needs m = p
    assert m_exponent_theorem62(9, 1 + 9 // 3) == 3
    assert m_exponent_theorem62(25, 1 + 25 // 5) == 5
    # even case needs m even: 2p
    assert m_exponent_theorem62(18, 1 + 18 // 3) == 6


def test_invariant_value_real_cases():
    ctx = PrecisionContext(P=60)
    f5 = make_field(5)
    spec = build_invariant(f5, 4, "thm62_real", t=1)
    v = invariant_value(spec, ctx).value
    assert abs(v.imag) < float(ctx.real_tol)
    f1 = make_field(1)
    spec = build_invariant(f1, 9, "cor63", p=3)
    v = invariant_value(spec, ctx).value
    assert abs(v.imag) < float(ctx.real_tol)


def test_invariant_trivial_quotient():
    # equal numerator and denominator blocks collapse to the phase alone
    f5 = make_field(5)
    spec = build_invariant(f5, 4, "thm62_real", t=1)
    trivial = spec.__class__(field=spec.field, N=spec.N, kind=spec.kind,
                             numerator=spec.denominator,
                             denominator=spec.denominator,
                             exponent=spec.exponent, phase=None,
                             level=spec.level, conjugates=False)
    v = invariant_value(trivial, CTX).value
    assert abs(v - 1) < mp.mpf(10) ** -50


def test_sr_invariant_periodicity():
    ctx = PrecisionContext(P=60)
    f7 = make_field(7)
    m = ray_modulus(f7, 9)
    a = sr_invariant(m, AlgebraicIntegerZTheta(2, 7), ctx).value
    b = sr_invariant(m, AlgebraicIntegerZTheta(2 + 9, 7 - 18), ctx).value
    assert abs(a / b - 1) < mp.mpf(10) ** -(ctx.P - 10)


def test_build_invariant_validation():
    f5 = make_field(5)
    with pytest.raises(ValueError):
        build_invariant(f5, 4, "nonsense")
    with pytest.raises(ValueError):
        build_invariant(f5, 4, "thm51_quotient", s=1, t=0)  # norm 5 not prime to 6N
    with pytest.raises(ValueError):
        build_invariant(f5, 4, "thm62_real")  # needs s or t
    with pytest.raises(ValueError):
        build_invariant(f5, 4, "thm62_real", t=2)  # t^2 != 1 mod 4
    with pytest.raises(ValueError):
        build_invariant(f5, 4, "cor63", p=3)  # 9 does not divide 4
    with pytest.raises(ValueError):
        build_invariant(make_field(7), 2, "thm51_quotient", s=0, t=1)  # drop test


def test_reduction_phase_consistency():
    sign, phase, f1, f2 = reduction_phase(Fraction(12, 5), Fraction(13, 5))
    assert (f1, f2) == (Fraction(2, 5), Fraction(3, 5))
    assert sign == 1 and phase == Fraction(18, 5) % 2
