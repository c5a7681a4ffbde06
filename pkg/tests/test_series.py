from fractions import Fraction

import pytest

from hahnaut.errors import (
    DescriptorMismatch,
    DivisionByZero,
    InsufficientPrecision,
    ZeroSeries,
)
from hahnaut.groups import RATIONALS, embed_rational, lex_power, surreal_depth
from hahnaut.sampling import Sampler
from hahnaut.series import (
    Series,
    coefficient_at,
    leading_term,
    series_compare,
    series_invert,
)

Q = RATIONALS


def S(*terms, precision=None):
    return Series.make(Q, [(Fraction(e), Fraction(c)) for e, c in terms], precision)


ONE = Series.one(Q)
T = Series.monomial(Q, 1)


class TestConstruction:
    def test_terms_are_sorted_and_merged(self):
        s = Series.make(Q, [(1, 2), (-1, 3), (1, 5)])
        assert [(e.value, c) for e, c in s.terms] == [(-1, 3), (1, 7)]

    def test_zero_coefficients_dropped(self):
        assert Series.make(Q, [(1, 2), (1, -2)]).terms == ()

    def test_terms_at_or_above_precision_cut(self):
        s = Series.make(Q, [(0, 1), (2, 5)], precision=2)
        assert [(e.value, c) for e, c in s.terms] == [(0, 1)]
        assert s.precision.value == 2


class TestAddition:
    def test_componentwise_sum(self):
        assert (S((0, 1), (1, 1)) + S((0, -1), (2, 1))).terms == S((1, 1), (2, 1)).terms

    def test_cancellation(self):
        assert (T + (-T)).is_exact_zero()

    def test_precision_is_min(self):
        a = S((0, 1), (1, 1), precision=2)
        b = S((2, 1))
        total = a + b
        assert [(e.value, c) for e, c in total.terms] == [(0, 1), (1, 1)]
        assert total.precision.value == 2

    def test_descriptor_mismatch(self):
        with pytest.raises(DescriptorMismatch):
            T + Series.one(lex_power(2))


class TestMultiplication:
    def test_convolution(self):
        assert ((ONE + T) * (ONE - T)).terms == (ONE - T * T).terms

    def test_exponent_addition(self):
        product = Series.monomial(Q, -1) * Series.monomial(Q, Fraction(1, 2), 2)
        assert [(e.value, c) for e, c in product.terms] == [(Fraction(-1, 2), 2)]

    def test_precision_shifts_by_valuation(self):
        a = S((0, 1), (1, 1), precision=2)
        b = Series.monomial(Q, -1)
        product = a * b
        assert product.precision.value == 1
        assert [(e.value, c) for e, c in product.terms] == [(-1, 1), (0, 1)]

    def test_exact_zero_absorbs(self):
        assert (Series.zero(Q) * S((0, 1), precision=3)).is_exact_zero()


class TestInversion:
    def test_monomial_inverse_is_exact(self):
        inv = series_invert(Series.monomial(Q, -1, 2), embed_rational(Q, 8))
        assert inv.precision is None
        assert [(e.value, c) for e, c in inv.terms] == [(1, Fraction(1, 2))]

    def test_geometric_example(self):
        inv = (ONE + T).invert(embed_rational(Q, 4))
        assert [(e.value, c) for e, c in inv.terms] == [(0, 1), (1, -1), (2, 1), (3, -1)]

    def test_product_certifies_one_below_target(self):
        sampler = Sampler(7)
        target = embed_rational(Q, 8)
        for _ in range(40):
            s = sampler.invertible_series(Q)
            assert (s * s.invert(target)).agrees(ONE)

    def test_zero_is_rejected(self):
        with pytest.raises(DivisionByZero):
            Series.zero(Q).invert(embed_rational(Q, 4))

    def test_insufficient_precision_rejected(self):
        s = S((0, 1), (1, 1), precision=3)
        with pytest.raises(InsufficientPrecision):
            s.invert(embed_rational(Q, 5))


class TestLeadingTermAndOrder:
    def test_leading_term(self):
        lt = leading_term(S((-2, 3), (1, 5)))
        assert (lt.valuation.value, lt.coefficient) == (-2, 3)

    def test_constant_leading_term(self):
        lt = leading_term(Series.constant(Q, 7))
        assert (lt.valuation.value, lt.coefficient) == (0, 7)

    def test_empty_with_finite_precision_errs(self):
        with pytest.raises(InsufficientPrecision):
            leading_term(Series(Q, (), embed_rational(Q, 5)))

    def test_exact_zero_errs(self):
        with pytest.raises(ZeroSeries):
            leading_term(Series.zero(Q))

    def test_infinitesimal_comparison(self):
        assert series_compare(T, Series.constant(Q, Fraction(1, 2))) == "<"

    def test_positive_by_leading_coefficient(self):
        assert series_compare(S((-2, 3), (1, 5)), Series.zero(Q)) == ">"

    def test_tail_decides_between_close_series(self):
        a = Series.monomial(Q, -1)
        assert series_compare(a, a + Series.monomial(Q, 3)) == "<"

    def test_inexact_tie_is_an_error(self):
        a = S((0, 1), precision=3)
        with pytest.raises(InsufficientPrecision):
            series_compare(a, S((0, 1)))


class TestCoefficientAndTruncate:
    def test_coefficient_lookup(self):
        s = S((-2, 3), (1, 5))
        assert coefficient_at(s, embed_rational(Q, 1)) == 5
        assert coefficient_at(s, embed_rational(Q, 0)) == 0

    def test_coefficient_beyond_precision_errs(self):
        with pytest.raises(InsufficientPrecision):
            coefficient_at(S((0, 1), precision=2), embed_rational(Q, 3))

    def test_truncate_drops_and_tightens(self):
        s = S((0, 1), (1, 1), (2, 1)).truncate_to(embed_rational(Q, 2))
        assert [(e.value, c) for e, c in s.terms] == [(0, 1), (1, 1)]
        assert s.precision.value == 2

    def test_truncate_never_loosens(self):
        s = S((0, 1), precision=1).truncate_to(embed_rational(Q, 3))
        assert s.precision.value == 1


class TestOtherGroups:
    @pytest.mark.parametrize("group", [lex_power(2), surreal_depth(1)])
    def test_ring_laws_on_samples(self, group):
        sampler = Sampler(13)
        for _ in range(25):
            a = sampler.series(group)
            b = sampler.series(group)
            c = sampler.series(group)
            assert ((a + b) * c).agrees(a * c + b * c)
            assert (a * b).agrees(b * a)
            assert ((a * b) * c).agrees(a * (b * c))

    @pytest.mark.parametrize("group", [lex_power(2), surreal_depth(1)])
    def test_inversion_on_samples(self, group):
        sampler = Sampler(17)
        target = embed_rational(group, 8)
        for _ in range(20):
            s = sampler.invertible_series(group)
            assert (s * s.invert(target)).agrees(Series.one(group))
