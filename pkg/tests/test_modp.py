import numpy as np
import pytest
from sympy import primerange

from kloverify.exceptions import DomainError
from kloverify.modp import (
    PrimeContext,
    f_poly,
    f_values,
    g_poly,
    g_values,
    inv,
    legendre,
    legendre_char_sums,
    legendre_euler,
    legendre_vector,
    poly_character_sum,
)


@pytest.mark.parametrize("p", [0, 1, 2, 3, 4, 9, 25, -7])
def test_prime_context_rejects_small_or_composite(p):
    with pytest.raises(DomainError):
        PrimeContext(p)


@pytest.mark.parametrize("p, ell", [(5, -1), (7, 1), (11, -1), (13, 1), (17, -1), (19, 1)])
def test_ell_p_is_legendre_of_p_over_3(p, ell):
    assert PrimeContext(p).ell_p == ell


def test_quadratic_residue_table(ctx):
    assert ctx.qr_table.sum() == (ctx.p - 1) // 2
    assert not ctx.qr_table[0]
    assert ctx.chi[0] == 0


def test_inverse_and_legendre_at_p7(ctx7):
    assert inv(ctx7, 3) == 5
    assert inv(ctx7, 10) == 5
    assert legendre(ctx7, 3) == -1
    assert legendre(ctx7, 2) == 1
    assert legendre(ctx7, 14) == 0


def test_inverse_of_zero_is_rejected(ctx7):
    with pytest.raises(DomainError):
        inv(ctx7, 7)


def test_table_agrees_with_euler_criterion(ctx):
    for a in range(-ctx.p, 2 * ctx.p):
        assert legendre(ctx, a) == legendre_euler(a, ctx.p)


def test_legendre_vector_handles_negative_values(ctx7):
    values = np.array([-1, -3, 0, 9])
    assert legendre_vector(ctx7, values).tolist() == [legendre(ctx7, v) for v in values]


def test_f9_vanishes_at_4_for_p13(ctx13):
    assert f_poly(9, 4, ctx13) == 0


def test_vectorized_polynomials_match_scalar_forms(ctx):
    for j in (1, 2, ctx.p - 1):
        assert f_values(ctx, j).tolist() == [f_poly(j, x, ctx) for x in range(ctx.p)]
        assert g_values(ctx, j).tolist() == [g_poly(j, x, ctx) for x in range(ctx.p)]


def test_character_sums_of_f_k(ctx):
    for k in range(1, ctx.p):
        assert legendre_char_sums(ctx, k) == (-1, ctx.p - 1 - legendre(ctx, k))


def test_poly_character_sum_of_linear_polynomial_is_zero(ctx):
    assert poly_character_sum(ctx, (3, 1)) == 0


def test_legendre_is_multiplicative(ctx):
    for a in range(1, ctx.p):
        for b in range(1, ctx.p):
            assert legendre(ctx, a * b) == legendre(ctx, a) * legendre(ctx, b)


def test_f_is_symmetric_and_shifts_to_a_pure_square(ctx):
    p = ctx.p
    for j in range(1, p):
        for x in range(p):
            assert f_poly(j, x, ctx) == f_poly(x, j, ctx)
            assert f_poly(j, x + j + 1, ctx) == (x * x - 4 * j) % p


@pytest.mark.slow
@pytest.mark.parametrize("p", list(primerange(5, 102)))
def test_character_sums_up_to_101(p):
    ctx = PrimeContext(p)
    for k in range(1, p):
        assert legendre_char_sums(ctx, k) == (-1, p - 1 - legendre(ctx, k))
