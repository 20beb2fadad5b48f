import random

import pytest
from sympy import primerange

from kloverify.cyclotomic import (
    CycInt,
    cyc_add,
    cyc_mul,
    kloosterman_cyc,
    kloosterman_exponents,
    mixed_moment_oracle,
    moment_oracle,
    moment_oracle_range,
)
from kloverify.elliptic import closed_moments
from kloverify.exceptions import DomainError, NotRationalInteger
from kloverify.kloosterman import float_moment, kloosterman_float, kloosterman_vector
from kloverify.modp import PrimeContext


def test_zeta_has_order_p():
    assert CycInt.zeta_power(7, 1) ** 7 == CycInt.from_int(7, 1)


def test_full_sum_of_roots_vanishes():
    assert CycInt.from_exponents(5, range(5)) == CycInt.from_int(5, 0)


def test_non_rational_element_is_rejected():
    with pytest.raises(NotRationalInteger):
        CycInt.zeta_power(5, 2).to_int()


def test_mixing_primes_is_rejected():
    with pytest.raises(DomainError):
        CycInt.from_int(5, 1) + CycInt.from_int(7, 1)


def test_integer_coercion():
    x = CycInt.zeta_power(7, 3)
    assert (x + 2) - 2 == x
    assert (3 * x).coeffs[3] == 3


def random_cyc(rng, p):
    return CycInt(p, tuple(rng.randint(-5, 5) for _ in range(p - 1)))


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_ring_laws(p):
    rng = random.Random(p)
    for _ in range(20):
        x, y, z = (random_cyc(rng, p) for _ in range(3))

        assert cyc_add(x, y) == cyc_add(y, x)
        assert cyc_mul(x, y) == cyc_mul(y, x)
        assert cyc_add(cyc_add(x, y), z) == cyc_add(x, cyc_add(y, z))
        assert cyc_mul(cyc_mul(x, y), z) == cyc_mul(x, cyc_mul(y, z))
        assert cyc_mul(x, cyc_add(y, z)) == cyc_add(cyc_mul(x, y), cyc_mul(x, z))
        assert cyc_mul(x, CycInt.from_int(p, 1)) == x

        assert (x + y).conjugate() == x.conjugate() + y.conjugate()
        assert (x * y).conjugate() == x.conjugate() * y.conjugate()
        assert x.conjugate().conjugate() == x


def test_kloosterman_sums_are_real(ctx):
    for u in range(1, ctx.p):
        k_u = kloosterman_cyc(ctx, u)
        assert k_u.conjugate() == k_u
        assert k_u.embed().real == pytest.approx(kloosterman_float(ctx, u), abs=1e-9)


def test_kloosterman_cyc_rejects_zero(ctx7):
    with pytest.raises(DomainError):
        kloosterman_cyc(ctx7, 0)


def test_moments_at_p5(ctx5):
    assert moment_oracle_range(ctx5, 4) == {1: 1, 2: 19, 3: -14, 4: 159}


def test_moments_at_p7(ctx7):
    assert moment_oracle(ctx7, 2) == 41
    assert moment_oracle(ctx7, 3) == 64
    assert moment_oracle(ctx7, 4) == 517


def test_completed_mixed_moment(ctx7):
    assert mixed_moment_oracle(ctx7, [2, 3], include_zero=True) == -35


def test_completed_second_mixed_moment_is_minus_p(ctx11):
    for a in range(2, 11):
        assert mixed_moment_oracle(ctx11, [a], include_zero=True) == -11


def test_mixed_oracle_rejects_zero_multiplier(ctx7):
    with pytest.raises(DomainError):
        mixed_moment_oracle(ctx7, [2, 14])


def test_two_parameter_sum_depends_on_product(ctx7):
    for a in range(1, 7):
        for b in range(1, 7):
            assert kloosterman_exponents(ctx7, a, b) == kloosterman_exponents(ctx7, 1, a * b)


@pytest.mark.slow
@pytest.mark.parametrize("p", list(primerange(5, 102)))
def test_oracle_matches_closed_forms_and_float_sums(p):
    ctx = PrimeContext(p)
    exact = moment_oracle_range(ctx, 6)
    closed = closed_moments(ctx)

    assert {n: exact[n] for n in range(1, 5)} == closed

    vector = kloosterman_vector(ctx)
    for n in range(1, 7):
        assert float_moment(vector, n) == pytest.approx(exact[n], abs=1e-8 * p ** (n / 2 + 1))
