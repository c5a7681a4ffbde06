"""Exact arithmetic for truncated generalized power series.

A series is a finite, strictly ascending list of (exponent, nonzero
rational coefficient) pairs over one of the value groups, together with a
precision bound: every term with exponent below the bound is present and
correct, and an infinite bound (``None``) marks an exact series.

Precision propagates through arithmetic with the tightest sound rules
under unknown tails at or above the bound:

* addition takes the minimum of the two bounds,
* multiplication takes ``min(P_a + v(b), P_b + v(a))``,
* inversion of ``s`` at target ``p`` yields a result certified so that
  ``s * result`` is 1 below ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DescriptorMismatch,
    DivisionByZero,
    InsufficientPrecision,
    NonTerminating,
    ZeroSeries,
)
from .groups import GroupDescriptor, GroupElement, element


def _pmin(a: GroupElement | None, b: GroupElement | None) -> GroupElement | None:
    if a is None:
        return b
    if b is None:
        return a
    return a if a.compare(b) <= 0 else b


@dataclass(frozen=True)
class LeadingTerm:
    valuation: GroupElement
    coefficient: Fraction


@dataclass(frozen=True)
class Series:
    group: GroupDescriptor
    terms: tuple[tuple[GroupElement, Fraction], ...] = ()
    precision: GroupElement | None = None

    # -- construction ------------------------------------------------------

    @classmethod
    def make(cls, group, terms, precision=None) -> "Series":
        """Normalize: merge like exponents, sort, drop zeros and cut tails."""
        if precision is not None:
            precision = element(group, precision)
        merged: dict[GroupElement, Fraction] = {}
        for ex, c in terms:
            ex = element(group, ex)
            merged[ex] = merged.get(ex, Fraction(0)) + Fraction(c)
        kept = [
            (ex, c)
            for ex, c in merged.items()
            if c != 0 and (precision is None or ex.compare(precision) < 0)
        ]
        kept.sort(key=lambda t: t[0])
        return cls(group, tuple(kept), precision)

    @classmethod
    def zero(cls, group) -> "Series":
        return cls(group, (), None)

    @classmethod
    def constant(cls, group, q) -> "Series":
        return cls.make(group, [(element(group, 0), Fraction(q))])

    @classmethod
    def one(cls, group) -> "Series":
        return cls.constant(group, 1)

    @classmethod
    def monomial(cls, group, exponent, coefficient=1) -> "Series":
        return cls.make(group, [(element(group, exponent), Fraction(coefficient))])

    # -- structure ---------------------------------------------------------

    def _check(self, other: "Series"):
        if self.group != other.group:
            raise DescriptorMismatch(
                f"series over {self.group} and {other.group} cannot be combined"
            )

    def is_exact_zero(self) -> bool:
        return not self.terms and self.precision is None

    def _v_lower(self) -> GroupElement:
        """A certified lower bound for the valuation (undefined on exact 0)."""
        if self.terms:
            return self.terms[0][0]
        return self.precision

    def leading_term(self) -> LeadingTerm:
        if self.terms:
            ex, c = self.terms[0]
            return LeadingTerm(ex, c)
        if self.precision is None:
            raise ZeroSeries("the zero series has no leading term")
        raise InsufficientPrecision(
            f"no terms known below the precision bound {self.precision}"
        )

    def v(self) -> GroupElement:
        return self.leading_term().valuation

    def coefficient_at(self, g) -> Fraction:
        g = element(self.group, g)
        if self.precision is not None and g.compare(self.precision) >= 0:
            raise InsufficientPrecision(
                f"coefficient at {g} is beyond the precision bound {self.precision}"
            )
        for ex, c in self.terms:
            if ex == g:
                return c
        return Fraction(0)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        return Series.make(
            self.group,
            self.terms + other.terms,
            _pmin(self.precision, other.precision),
        )

    def __neg__(self) -> "Series":
        return Series(
            self.group, tuple((ex, -c) for ex, c in self.terms), self.precision
        )

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def scale(self, q) -> "Series":
        q = Fraction(q)
        if q == 0:
            return Series.zero(self.group)
        return Series(
            self.group, tuple((ex, q * c) for ex, c in self.terms), self.precision
        )

    def shift(self, g) -> "Series":
        """Multiply by the monomial t^g."""
        g = element(self.group, g)
        return Series(
            self.group,
            tuple((ex + g, c) for ex, c in self.terms),
            None if self.precision is None else self.precision + g,
        )

    def __mul__(self, other: "Series") -> "Series":
        self._check(other)
        if self.is_exact_zero() or other.is_exact_zero():
            return Series.zero(self.group)
        precision = None
        if self.precision is not None:
            precision = _pmin(precision, self.precision + other._v_lower())
        if other.precision is not None:
            precision = _pmin(precision, other.precision + self._v_lower())
        products = [
            (ea + eb, ca * cb) for ea, ca in self.terms for eb, cb in other.terms
        ]
        return Series.make(self.group, products, precision)

    def truncate_to(self, p) -> "Series":
        p = element(self.group, p)
        return Series.make(self.group, self.terms, _pmin(self.precision, p))

    def invert(self, target) -> "Series":
        """Inverse certified so that self * result is 1 below ``target``."""
        target = element(self.group, target)
        if not self.terms:
            if self.precision is None:
                raise DivisionByZero("cannot invert the zero series")
            raise InsufficientPrecision(
                "leading term unknown: no terms below the precision bound"
            )
        g, r = self.terms[0]
        if self.precision is not None and self.precision.compare(target + g) < 0:
            raise InsufficientPrecision(
                f"precision {self.precision} cannot certify an inverse to {target}"
            )
        unit = self.shift(-g).scale(1 / r)
        eps = unit - Series.one(self.group)
        if not eps.terms:
            inverse = Series.monomial(self.group, -g, 1 / r)
            if self.precision is None:
                return inverse
            return inverse.truncate_to(target - g)
        total = Series.one(self.group)
        power = (-eps).truncate_to(target)
        rounds = 0
        while power.terms:
            total = total + power
            power = (power * -eps).truncate_to(target)
            rounds += 1
            if rounds > 10000:
                # v(eps) is infinitesimal relative to the target class, so
                # the inverse has infinite support below the target.
                raise NonTerminating(
                    "geometric expansion does not reach the target precision"
                )
        result = total.scale(1 / r).shift(-g)
        return Series.make(self.group, result.terms, target - g)

    # -- order -------------------------------------------------------------

    def compare(self, other: "Series") -> int:
        """Sign of self - other; raises when truncation hides the answer."""
        diff = self - other
        if diff.terms:
            return 1 if diff.terms[0][1] > 0 else -1
        if diff.precision is None:
            return 0
        raise InsufficientPrecision(
            f"difference vanishes below {diff.precision} but the inputs are inexact"
        )

    def sign(self) -> int:
        return self.compare(Series.zero(self.group))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def agrees(self, other: "Series") -> bool:
        """True when the two series coincide below their joint precision."""
        return not (self - other).terms

    def __str__(self):
        from .parsing import format_series  # lazy: avoids an import cycle

        return format_series(self)


# -- operation-style aliases ------------------------------------------------

_ORDER_SYMBOL = {-1: "<", 0: "=", 1: ">"}


def series_add(a: Series, b: Series) -> Series:
    return a + b


def series_mul(a: Series, b: Series) -> Series:
    return a * b


def series_invert(s: Series, target_precision) -> Series:
    return s.invert(target_precision)


def leading_term(s: Series) -> LeadingTerm:
    return s.leading_term()


def series_compare(a: Series, b: Series) -> str:
    return _ORDER_SYMBOL[a.compare(b)]


def coefficient_at(s: Series, g) -> Fraction:
    return s.coefficient_at(g)


def truncate_to(s: Series, p) -> Series:
    return s.truncate_to(p)
