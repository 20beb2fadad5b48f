import pytest
from sympy import primerange

from kloverify.cyclotomic import mixed_moment_oracle, moment_oracle_range
from kloverify.exact import (
    QuadInt,
    QuadMatrix,
    growth_bits,
    mixed_moment_via_matrix,
    moment_via_matrix,
    moments_via_matrix,
    row_power,
    row_powers,
    t2_closed_form,
    t2_row,
    t4_entry,
)
from kloverify.elliptic import closed_moments, epsilon_vector
from kloverify.exceptions import CostGuardExceeded, DomainError
from kloverify.modp import PrimeContext, f_poly, legendre
from kloverify.supercharacter import SuperTheory


class TestQuadInt:
    def test_conjugate_product_is_rational(self):
        x = QuadInt(1, 1, 6)
        y = QuadInt(1, -1, 6)
        assert x * y == QuadInt(-5, 0, 6)
        assert (x * y).is_integer()

    def test_integer_coercion(self):
        x = QuadInt(2, 3, 6)
        assert x + 1 == QuadInt(3, 3, 6)
        assert 2 * x == QuadInt(4, 6, 6)
        assert x - x == QuadInt(0, 0, 6)

    def test_perfect_square_radicand_stays_symbolic(self):
        assert QuadInt(2, 0, 4) != QuadInt(0, 1, 4)
        assert float(QuadInt(2, 0, 4)) == float(QuadInt(0, 1, 4))

    def test_mismatched_radicands_are_rejected(self):
        with pytest.raises(DomainError):
            QuadInt(1, 1, 6) + QuadInt(1, 1, 10)

    @pytest.mark.parametrize(
        "value, text",
        [
            (QuadInt(7, 0, 6), "7"),
            (QuadInt(0, 1, 6), "sqrt(6)"),
            (QuadInt(0, -1, 6), "-sqrt(6)"),
            (QuadInt(0, -2, 6), "-2*sqrt(6)"),
            (QuadInt(3, 1, 6), "3+sqrt(6)"),
            (QuadInt(3, -4, 6), "3-4*sqrt(6)"),
        ],
    )
    def test_str(self, value, text):
        assert str(value) == text


class TestQuadMatrix:
    def test_identity_is_neutral(self, theory7):
        t1 = theory7.transfer(1)
        identity = QuadMatrix.identity(theory7.N, 6)
        assert identity @ t1 == t1
        assert t1 @ identity == t1

    def test_t1_is_symmetric_and_normal(self, theory):
        t1 = theory.transfer(1)
        assert t1 == t1.T
        assert t1.is_normal()

    def test_transfer_matrices_commute(self, theory7):
        assert theory7.transfer(2).commutes_with(theory7.transfer(3))
        assert theory7.transfer(1).commutes_with(theory7.transfer(7))


def test_exact_moments_at_p7(theory7):
    assert moments_via_matrix(theory7, 4) == {2: 41, 3: 64, 4: 517}


def test_single_moment_at_p5(theory5):
    assert moment_via_matrix(theory5, 4) == 159


def test_moment_order_below_two_is_rejected(theory5):
    with pytest.raises(DomainError):
        moment_via_matrix(theory5, 1)
    with pytest.raises(DomainError):
        moments_via_matrix(theory5, 1)


def test_matrix_moments_match_oracle(ctx, theory):
    oracle = moment_oracle_range(ctx, 7)
    for n, value in moments_via_matrix(theory, 7).items():
        assert value == oracle[n]


def test_matrix_moments_match_closed_forms(ctx, theory):
    values = moments_via_matrix(theory, 4)
    closed = closed_moments(ctx)
    for n in (2, 3, 4):
        assert values[n] == closed[n]


def test_row_powers_start_at_identity(theory7):
    states = list(row_powers(theory7, 3))
    assert [state.m for state in states] == [0, 1, 2, 3]
    assert states[0].row == (QuadInt(1, 0, 6),) + (QuadInt(0, 0, 6),) * 8
    assert states[1].row == theory7.transfer(1).row(0)
    assert row_power(theory7, 3) == states[3]


def test_large_exponents_switch_to_arbitrary_precision():
    theory = SuperTheory(PrimeContext(101))
    assert growth_bits(101, 10) >= 62
    state = row_power(theory, 10)
    assert state.corner.b == 0
    assert moment_via_matrix(theory, 12) == 101**2 * state.corner.a + 2 * (-1) ** 11 - 100**11


def test_t2_row_at_p7(theory7):
    row = t2_row(theory7)
    assert row[0] == QuadInt(15, 0, 6)
    assert row[6] == QuadInt(3, 0, 6)
    assert len(row) == 9


def test_t2_corner_entry_at_p5_vanishes(theory5):
    assert t2_row(theory5)[-1] == QuadInt(0, 0, 4)


def test_t2_row_matches_closed_form(ctx, theory):
    eps = epsilon_vector(ctx).eps
    assert t2_row(theory, eps) == t2_closed_form(theory, eps)


def test_t4_entry_reproduces_sixth_moment(ctx, theory):
    p = ctx.p
    v6 = moments_via_matrix(theory, 6)[6]
    assert v6 == p * p * t4_entry(theory) - 2 - (p - 1) ** 5


class TestMixedMoment:
    def test_completed_mixed_moment_at_p7(self, ctx7, theory7):
        value = mixed_moment_via_matrix(theory7, [2, 3], include_zero=True)
        assert value == legendre(ctx7, 9 - 18 + 1) * 49 + 14
        assert value == -35

    def test_single_multiplier_one_is_second_moment(self, ctx, theory):
        p = ctx.p
        assert mixed_moment_via_matrix(theory, [1]) == p * p - p - 1
        assert mixed_moment_via_matrix(theory, [1, 1]) == closed_moments(ctx)[3]

    def test_matches_oracle(self, ctx7, theory7):
        for multipliers in ([3], [2, 5], [2, 3, 6], [1, 4, 4]):
            assert mixed_moment_via_matrix(theory7, multipliers) == mixed_moment_oracle(
                ctx7, multipliers
            )

    def test_rejects_empty_or_zero_multipliers(self, theory7):
        with pytest.raises(DomainError):
            mixed_moment_via_matrix(theory7, [])
        with pytest.raises(DomainError):
            mixed_moment_via_matrix(theory7, [2, 7])

    def test_cost_guard(self):
        theory = SuperTheory(PrimeContext(67))
        with pytest.raises(CostGuardExceeded):
            mixed_moment_via_matrix(theory, [2, 3, 5])


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_completed_two_and_three_factor_formulas(p):
    ctx = PrimeContext(p)
    theory = SuperTheory(ctx)
    for a in range(1, p):
        single = mixed_moment_via_matrix(theory, [a], include_zero=True)
        assert single == mixed_moment_oracle(ctx, [a], include_zero=True)
        if a != 1:
            assert single == -p
        for b in range(1, p):
            expected = legendre(ctx, f_poly(a, b, ctx)) * p * p + 2 * p
            assert mixed_moment_via_matrix(theory, [a, b], include_zero=True) == expected
            assert mixed_moment_oracle(ctx, [a, b], include_zero=True) == expected


@pytest.mark.slow
@pytest.mark.parametrize("p", list(primerange(5, 62)))
def test_matrix_moments_match_oracle_up_to_61(p):
    ctx = PrimeContext(p)
    assert moments_via_matrix(SuperTheory(ctx), 8) == {
        n: value for n, value in moment_oracle_range(ctx, 8).items() if n >= 2
    }
