"""Seeded, deterministic sample generation for property certificates.

All classification and checking in this package is certificate-based:
universally quantified laws are evaluated exactly on a reproducible
sample drawn from a seed, and the first counterexample is reported as a
witness.  The sampler keeps exponents on the integer lattice of the
standard generators so that partial characters and finitely generated
functionals stay applicable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import groups
from .groups import GroupDescriptor, GroupElement
from .series import Series


@dataclass(frozen=True)
class SampleSpec:
    """Reproducible sample description: a seed and a sample count."""

    seed: int = 7
    count: int = 50


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one sampled law: pass, fail with witness, or n/a."""

    status: str  # "pass" | "fail" | "n/a"
    witness: tuple = ()
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def describe(self) -> str:
        if self.status == "n/a" and self.note:
            return f"n/a ({self.note})"
        return self.status


class Sampler:
    """Deterministic random values driven by one ``random.Random`` stream."""

    def __init__(self, seed: int = 7):
        self.rng = random.Random(seed)

    def rational(self, lo: int = -9, hi: int = 9, max_den: int = 4) -> Fraction:
        return Fraction(self.rng.randint(lo, hi), self.rng.randint(1, max_den))

    def nonzero_rational(self, lo: int = -9, hi: int = 9, max_den: int = 4) -> Fraction:
        while True:
            q = self.rational(lo, hi, max_den)
            if q != 0:
                return q

    def positive_rational(self, hi: int = 9, max_den: int = 4) -> Fraction:
        return Fraction(self.rng.randint(1, hi), self.rng.randint(1, max_den))

    def exponent(self, group: GroupDescriptor, lo: int = -3, hi: int = 4) -> GroupElement:
        """A group element on the integer lattice of the standard generators."""
        kind = group.kind
        if kind in ("Integers", "Rationals"):
            return groups.embed_rational(group, self.rng.randint(lo, hi))
        if kind == "LexPower":
            return groups.element(
                group, tuple(self.rng.randint(lo, hi) for _ in range(group.param))
            )
        if group.param == 0:
            return groups.zero(group)
        inner = group.exponent_group
        terms = [
            (self.exponent(inner, lo, hi), self.nonzero_rational())
            for _ in range(self.rng.randint(0, 2))
        ]
        return groups.element(group, Series.make(inner, terms))

    def nonzero_exponent(self, group, lo: int = -3, hi: int = 4) -> GroupElement:
        while True:
            g = self.exponent(group, lo, hi)
            if not g.is_zero():
                return g

    def series(
        self,
        group: GroupDescriptor,
        max_terms: int = 4,
        precision: GroupElement | None = None,
    ) -> Series:
        terms = [
            (self.exponent(group), self.rational())
            for _ in range(self.rng.randint(0, max_terms))
        ]
        return Series.make(group, terms, precision)

    def nonzero_series(self, group, max_terms: int = 4, precision=None) -> Series:
        while True:
            s = self.series(group, max_terms, precision)
            if s.terms:
                return s

    def invertible_series(self, group: GroupDescriptor, max_terms: int = 3) -> Series:
        """Nonzero exact series whose inverse has finite support below any
        target commensurate with the dominant coordinate.

        Exponents are kept strictly increasing in the dominant direction so
        that every tail-to-leading exponent gap is non-infinitesimal.
        """
        n_extra = self.rng.randint(0, max_terms - 1)
        offsets = sorted(self.rng.sample(range(-3, 9), n_extra + 1))
        terms = []
        for off in offsets:
            base = groups.embed_rational(group, off)
            if group.kind == "LexPower":
                tail = tuple(
                    self.rng.randint(-2, 2) for _ in range(group.param - 1)
                )
                ex = groups.element(group, (Fraction(off),) + tuple(map(Fraction, tail)))
            elif group.kind == "SurrealDepth" and group.param >= 1:
                ex = base
            else:
                ex = base
            terms.append((ex, self.nonzero_rational()))
        return Series.make(group, terms)


def canonical_series(group: GroupDescriptor) -> list[Series]:
    """Small fixed series prepended to every sample list, so documented
    witnesses show up deterministically before the random tail."""
    one = groups.embed_rational(group, 1)
    minus_one = groups.embed_rational(group, -1)
    t = Series.monomial(group, one)
    t_inv = Series.monomial(group, minus_one)
    return [t, t_inv, Series.one(group) + t, t_inv + Series.one(group)]
