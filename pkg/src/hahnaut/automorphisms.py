"""Constructors, application, classification and factorization of
automorphisms of the series field and its ordered additive group.

An automorphism is a tree of primitive nodes:

* ``ExternalField(tau)`` -- relabel exponents by an additive
  order-preserving automorphism of the value group (a field automorphism),
* ``CharacterLift(chi)`` -- scale each coefficient by a multiplicative
  character of the value group (internal field automorphism),
* ``InternalMult(u)`` -- multiply by a unit ``1 + eps`` with ``v(eps) > 0``
  (internal group automorphism, not multiplicative),
* ``ExternalGroup(zeta, c)`` -- relabel exponents by an order-preserving
  bijection and rescale coefficients exponent-by-exponent (group
  automorphism),
* ``ExpDerivation(D, p)`` -- exponential of a contracting derivation,
  truncated below ``p`` (leading-term-fixing field automorphism),
* ``Compose`` / ``Inverse`` combinators (composition is right-to-left).

Classification is certificate-based: each predicate is evaluated exactly
on a seeded sample below propagated precision, and failures carry a
witness.  Factorization extracts the induced exponent map and leading
coefficient factor on sampled monomials, rebuilds the external part from
those tables and certifies that the residual fixes leading terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import derivations as deriv_mod
from . import groups
from .errors import (
    DescriptorMismatch,
    DomainError,
    HahnError,
    InsufficientPrecision,
    NotInfinitesimal,
    NotInternal,
    NotOneAut,
    SampleInsufficiency,
)
from .groups import GroupDescriptor, GroupElement
from .sampling import CheckResult, SampleSpec, Sampler, canonical_series
from .series import LeadingTerm, Series, _pmin


# -- coefficient-side factor data ------------------------------------------


@dataclass(frozen=True)
class PartialCharacter:
    """Multiplicative character on the integer span of a finite lattice.

    Values are positive rationals (order preservation); evaluation at
    ``sum n_i g_i`` is ``prod values_i ** n_i`` and is exact there.
    """

    descriptor: GroupDescriptor
    lattice: tuple[GroupElement, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        lattice = tuple(groups.element(self.descriptor, g) for g in self.lattice)
        values = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "lattice", lattice)
        object.__setattr__(self, "values", values)
        if len(lattice) != len(values):
            raise DomainError("lattice and value lists differ in length")
        if any(v <= 0 for v in values):
            raise DomainError("character values must be positive")
        if lattice and not groups._independent(groups._coordinates(list(lattice))):
            raise DomainError("character lattice must be Q-linearly independent")

    def __call__(self, g: GroupElement) -> Fraction:
        g = groups.element(self.descriptor, g)
        if g.is_zero():
            return Fraction(1)
        if not self.lattice:
            return Fraction(1)  # the trivial character is identically 1
        vectors = groups._coordinates(list(self.lattice) + [g])
        coeffs = groups._solve_linear(vectors[:-1], vectors[-1])
        if coeffs is None or any(q.denominator != 1 for q in coeffs):
            raise DomainError(f"{g} is not in the integer span of the lattice")
        out = Fraction(1)
        for q, v in zip(coeffs, self.values):
            out *= v ** int(q)
        return out

    def reciprocal(self) -> "PartialCharacter":
        return PartialCharacter(
            self.descriptor, self.lattice, tuple(1 / v for v in self.values)
        )


@dataclass(frozen=True)
class ScalingFamily:
    """A positive rescaling per exponent: a default plus finite exceptions.

    No homomorphism law is imposed; the family represents an arbitrary
    coefficient-wise order-preserving scaling.
    """

    descriptor: GroupDescriptor
    default: Fraction = Fraction(1)
    exceptions: tuple[tuple[GroupElement, Fraction], ...] = ()

    def __post_init__(self):
        default = Fraction(self.default)
        exceptions = tuple(
            (groups.element(self.descriptor, g), Fraction(v))
            for g, v in self.exceptions
        )
        object.__setattr__(self, "default", default)
        object.__setattr__(self, "exceptions", exceptions)
        if default <= 0 or any(v <= 0 for _, v in exceptions):
            raise DomainError("scaling factors must be positive")

    def __call__(self, g: GroupElement) -> Fraction:
        for key, v in self.exceptions:
            if key == g:
                return v
        return self.default


# -- node types -------------------------------------------------------------


class Node:
    """Marker base class for automorphism tree nodes."""


@dataclass(frozen=True)
class Identity(Node):
    pass


@dataclass(frozen=True)
class ExternalField(Node):
    tau: groups.AdditiveAutomorphism


@dataclass(frozen=True)
class CharacterLift(Node):
    chi: PartialCharacter


@dataclass(frozen=True)
class InternalMult(Node):
    unit: Series  # 1 + eps with v(eps) > 0


@dataclass(frozen=True)
class ExternalGroup(Node):
    zeta: object  # anything with forward/backward on the value group
    scaling: ScalingFamily


@dataclass(frozen=True)
class ExpDerivation(Node):
    derivation: deriv_mod.MonomialDerivation
    target: GroupElement


@dataclass(frozen=True)
class Theta(Node):
    """Direct-formula field automorphism built from a leading-term-fixing
    automorphism, a character and a group automorphism."""

    sigma: "Automorphism"
    chi: PartialCharacter
    tau: groups.AdditiveAutomorphism


@dataclass(frozen=True)
class TauBuild(Node):
    """Direct-formula group automorphism built from an internal group
    automorphism, an order bijection and a scaling family."""

    nu: "Automorphism"
    zeta: object
    scaling: ScalingFamily


@dataclass(frozen=True)
class TableMonomial(Node):
    """Monomial action given by a finite table (factorization scaffolding)."""

    entries: tuple[tuple[GroupElement, GroupElement, Fraction], ...]


@dataclass(frozen=True)
class Compose(Node):
    parts: tuple[Node, ...]


@dataclass(frozen=True)
class Inverse(Node):
    inner: Node


@dataclass(frozen=True)
class Automorphism:
    group: GroupDescriptor
    node: Node

    @property
    def class_tag(self) -> str:
        return "field-aut" if _is_field_node(self.node) else "group-aut"


_FIELD_NODES = (Identity, ExternalField, CharacterLift, ExpDerivation)


def _is_field_node(node: Node) -> bool:
    if isinstance(node, _FIELD_NODES):
        return True
    if isinstance(node, Theta):
        return _is_field_node(node.sigma.node)
    if isinstance(node, Compose):
        return all(_is_field_node(p) for p in node.parts)
    if isinstance(node, Inverse):
        return _is_field_node(node.inner)
    return False


# -- constructors -----------------------------------------------------------


def identity_aut(group: GroupDescriptor) -> Automorphism:
    return Automorphism(group, Identity())


def make_external_field(tau: groups.AdditiveAutomorphism) -> Automorphism:
    return Automorphism(tau.descriptor, ExternalField(tau))


def make_character_lift(chi: PartialCharacter) -> Automorphism:
    return Automorphism(chi.descriptor, CharacterLift(chi))


def make_internal_mult(eps: Series) -> Automorphism:
    if eps.terms:
        zero = groups.zero(eps.group)
        if eps.v().compare(zero) <= 0:
            raise NotInfinitesimal(f"v(eps) = {eps.v()} is not positive")
    unit = Series.one(eps.group) + eps
    return Automorphism(eps.group, InternalMult(unit))


def make_external_group(zeta, scaling: ScalingFamily) -> Automorphism:
    if scaling.descriptor != zeta.descriptor:
        raise DescriptorMismatch("scaling family and exponent map disagree")
    return Automorphism(zeta.descriptor, ExternalGroup(zeta, scaling))


def compose_aut(auts) -> Automorphism:
    auts = list(auts)
    if not auts:
        raise DomainError("cannot compose an empty list")
    group = auts[0].group
    parts = []
    for a in auts:
        if a.group != group:
            raise DescriptorMismatch("composed automorphisms on different groups")
        if isinstance(a.node, Compose):
            parts.extend(a.node.parts)
        else:
            parts.append(a.node)
    return Automorphism(group, Compose(tuple(parts)))


def _inverse_node(node: Node) -> Node:
    if isinstance(node, Identity):
        return node
    if isinstance(node, Inverse):
        return node.inner
    if isinstance(node, Compose):
        return Compose(tuple(_inverse_node(p) for p in reversed(node.parts)))
    if isinstance(node, ExpDerivation):
        return ExpDerivation(
            deriv_mod.negate_derivation(node.derivation), node.target
        )
    return Inverse(node)


def invert_aut(a: Automorphism) -> Automorphism:
    return Automorphism(a.group, _inverse_node(a.node))


# -- application ------------------------------------------------------------


def _map_precision(precision, mapper):
    return None if precision is None else mapper(precision)


def _apply_node(node, s, inverted, precision, path):
    try:
        return _dispatch(node, s, inverted, precision, path)
    except HahnError as e:
        if getattr(e, "_aut_path", None) is None:
            e._aut_path = ".".join(path) or type(node).__name__
            e.args = (f"at node {e._aut_path}: {e.args[0] if e.args else e}",)
        raise


def _dispatch(node, s, inverted, precision, path):
    group = s.group
    if isinstance(node, Identity):
        return s
    if isinstance(node, Inverse):
        return _apply_node(node.inner, s, not inverted, precision, path + ["inverse"])
    if isinstance(node, Compose):
        order = reversed(node.parts) if not inverted else node.parts
        for i, part in enumerate(order):
            s = _apply_node(part, s, inverted, precision, path + [f"compose[{i}]"])
        return s
    if isinstance(node, ExternalField):
        direction = "inverse" if inverted else "forward"
        terms = [(node.tau.apply(ex, direction), c) for ex, c in s.terms]
        prec = _map_precision(s.precision, lambda p: node.tau.apply(p, direction))
        return Series.make(group, terms, prec)
    if isinstance(node, CharacterLift):
        chi = node.chi.reciprocal() if inverted else node.chi
        terms = [(ex, c * chi(ex)) for ex, c in s.terms]
        return Series.make(group, terms, s.precision)
    if isinstance(node, InternalMult):
        if not inverted:
            return s * node.unit
        return _internal_mult_inverse(node.unit, s, precision)
    if isinstance(node, ExternalGroup):
        direction = "inverse" if inverted else "forward"
        terms = []
        for ex, c in s.terms:
            target = node.zeta.apply(ex, direction)
            factor = node.scaling(ex) if not inverted else 1 / node.scaling(target)
            terms.append((target, c * factor))
        prec = _map_precision(s.precision, lambda p: node.zeta.apply(p, direction))
        return Series.make(group, terms, prec)
    if isinstance(node, ExpDerivation):
        d = node.derivation if not inverted else deriv_mod.negate_derivation(
            node.derivation
        )
        return deriv_mod.exp_apply(d, s, node.target)
    if isinstance(node, Theta):
        equivalent = Compose(
            (node.sigma.node, CharacterLift(node.chi), ExternalField(node.tau))
        )
        if inverted:
            return _apply_node(equivalent, s, True, precision, path + ["theta"])
        staged = []
        for ex, c in s.terms:
            image = node.tau.forward(ex)
            staged.append((image, c * node.chi(image)))
        prec = _map_precision(s.precision, node.tau.forward)
        inner = Series.make(group, staged, prec)
        return _apply_node(node.sigma.node, inner, False, precision, path + ["theta"])
    if isinstance(node, TauBuild):
        equivalent = Compose(
            (node.nu.node, ExternalGroup(node.zeta, node.scaling))
        )
        if inverted:
            return _apply_node(equivalent, s, True, precision, path + ["tau"])
        staged = [
            (node.zeta.apply(ex, "forward"), c * node.scaling(ex))
            for ex, c in s.terms
        ]
        prec = _map_precision(s.precision, lambda p: node.zeta.apply(p, "forward"))
        inner = Series.make(group, staged, prec)
        return _apply_node(node.nu.node, inner, False, precision, path + ["tau"])
    if isinstance(node, TableMonomial):
        if s.precision is not None:
            raise SampleInsufficiency(
                "table reconstructions only apply to exact series"
            )
        forward = {g: (e, c) for g, e, c in node.entries}
        backward = {e: (g, c) for g, e, c in node.entries}
        table = backward if inverted else forward
        terms = []
        for ex, c in s.terms:
            if ex not in table:
                raise SampleInsufficiency(f"exponent {ex} is outside the table")
            image, factor = table[ex]
            terms.append((image, c / factor if inverted else c * factor))
        return Series.make(group, terms)
    raise DomainError(f"unknown node type {type(node).__name__}")


def _internal_mult_inverse(unit, s, precision):
    bound = _pmin(s.precision, precision)
    eps_free = len(unit.terms) == 1 and unit.precision is None
    if eps_free:
        return s  # unit is exactly 1
    if bound is None:
        raise InsufficientPrecision(
            "inverting an internal multiplication needs a finite precision"
        )
    if s.is_exact_zero():
        return s
    if not s.terms:
        return Series(s.group, (), bound)
    inverse_unit = unit.invert(bound - s.v())
    return (s * inverse_unit).truncate_to(bound)


def apply_aut(a: Automorphism, s: Series, precision=None) -> Series:
    if a.group != s.group:
        raise DescriptorMismatch(
            f"automorphism on {a.group} applied to series over {s.group}"
        )
    if precision is not None:
        precision = groups.element(a.group, precision)
    return _apply_node(a.node, s, False, precision, [])


# -- the decomposition constructions ---------------------------------------


def _structurally_one_aut(node: Node) -> bool:
    if isinstance(node, (Identity, ExpDerivation)):
        return True
    if isinstance(node, (Compose,)):
        return all(_structurally_one_aut(p) for p in node.parts)
    if isinstance(node, Inverse):
        return _structurally_one_aut(node.inner)
    return False


def _structurally_internal(node: Node) -> bool:
    if isinstance(node, (Identity, ExpDerivation, InternalMult)):
        return True
    if isinstance(node, Compose):
        return all(_structurally_internal(p) for p in node.parts)
    if isinstance(node, Inverse):
        return _structurally_internal(node.inner)
    return False


def is_one_aut(
    a: Automorphism, spec: SampleSpec = SampleSpec(), precision=None
) -> CheckResult:
    """Sample certificate that ``a`` fixes the leading term of every series."""
    sampler = Sampler(spec.seed)
    samples = canonical_series(a.group)
    while len(samples) < spec.count:
        samples.append(sampler.series(a.group))
    for s in samples[: spec.count]:
        if not s.terms:
            continue
        image = apply_aut(a, s, precision)
        if not image.terms or image.leading_term() != s.leading_term():
            return CheckResult("fail", (s,))
    return CheckResult("pass")


def construct_theta(
    sigma: Automorphism,
    chi: PartialCharacter,
    tau: groups.AdditiveAutomorphism,
    spec: SampleSpec = SampleSpec(),
    precision=None,
) -> Automorphism:
    if not _structurally_one_aut(sigma.node):
        gate = is_one_aut(sigma, spec, precision)
        if not gate.ok:
            raise NotOneAut(
                f"sigma moves the leading term of {gate.witness[0]}"
            )
    return Automorphism(sigma.group, Theta(sigma, chi, tau))


def construct_tau(
    nu: Automorphism,
    zeta,
    scaling: ScalingFamily,
    spec: SampleSpec = SampleSpec(),
    precision=None,
) -> Automorphism:
    if not _structurally_internal(nu.node):
        gate = is_one_aut(nu, spec, precision)
        if not gate.ok:
            raise NotInternal(
                f"nu moves the leading term of {gate.witness[0]}"
            )
    return Automorphism(nu.group, TauBuild(nu, zeta, scaling))


# -- induced maps, classification, factorization ---------------------------


def induced_maps(a: Automorphism, samples, precision=None):
    """For each sample g: the induced exponent image v(a(t^g)) and the
    leading coefficient factor of a(t^g)."""
    rows = []
    for g in samples:
        g = groups.element(a.group, g)
        image = apply_aut(a, Series.monomial(a.group, g), precision)
        lt = image.leading_term()
        rows.append((g, lt.valuation, lt.coefficient))
    return rows


@dataclass(frozen=True)
class ClassifyReport:
    additive: CheckResult
    multiplicative: CheckResult
    order_preserving: CheckResult
    valuation_preserving: CheckResult
    internal: CheckResult
    one_aut: CheckResult

    _NAMES = (
        "additive",
        "multiplicative",
        "order_preserving",
        "valuation_preserving",
        "internal",
        "one_aut",
    )

    def failures(self) -> list[str]:
        return [n for n in self._NAMES if getattr(self, n).status == "fail"]

    def as_items(self):
        return [(n, getattr(self, n)) for n in self._NAMES]


def classify_aut(
    a: Automorphism, spec: SampleSpec = SampleSpec(), precision=None
) -> ClassifyReport:
    """Evaluate the classification predicates on a seeded sample.

    Results are sample-relative certificates, not proofs; each failure
    carries the first witness found.
    """
    sampler = Sampler(spec.seed)
    group = a.group
    samples = canonical_series(group)
    while len(samples) < max(spec.count, 8):
        samples.append(sampler.series(group))
    samples = samples[: max(spec.count, 8)]
    base = canonical_series(group)
    pairs = [(a1, a2) for a1 in base for a2 in base]
    while len(pairs) < spec.count:
        pairs.append((sampler.series(group), sampler.series(group)))
    pairs = pairs[: spec.count]

    def image(s):
        return apply_aut(a, s, precision)

    additive = CheckResult("pass")
    for x, y in pairs:
        if not image(x + y).agrees(image(x) + image(y)):
            additive = CheckResult("fail", (x, y))
            break

    multiplicative = CheckResult("pass")
    for x, y in pairs:
        if not image(x * y).agrees(image(x) * image(y)):
            multiplicative = CheckResult("fail", (x, y))
            break

    order_preserving = CheckResult("pass")
    for x in samples:
        if not x.terms:
            continue
        positive = x if x.terms[0][1] > 0 else -x
        img = image(positive)
        if not img.terms or img.terms[0][1] <= 0:
            order_preserving = CheckResult("fail", (positive,))
            break

    valuation_preserving = CheckResult("pass")
    for x, y in pairs:
        if not x.terms or not y.terms:
            continue
        ix, iy = image(x), image(y)
        if not ix.terms or not iy.terms:
            valuation_preserving = CheckResult("fail", (x, y))
            break
        if ix.v().compare(iy.v()) != x.v().compare(y.v()):
            valuation_preserving = CheckResult("fail", (x, y))
            break

    internal = CheckResult("pass")
    zero = groups.zero(group)
    for x in samples:
        if not x.terms:
            continue
        img = image(x)
        if not img.terms or img.v() != x.v():
            internal = CheckResult("fail", (x,))
            break
        if x.v() == zero and img.terms[0][1] != x.terms[0][1]:
            internal = CheckResult("fail", (x,))
            break

    if multiplicative.status == "fail":
        one_aut = CheckResult("n/a", note="not multiplicative")
    else:
        one_aut = CheckResult("pass")
        for x in samples:
            if not x.terms:
                continue
            img = image(x)
            if not img.terms or img.leading_term() != x.leading_term():
                one_aut = CheckResult("fail", (x,))
                break

    return ClassifyReport(
        additive,
        multiplicative,
        order_preserving,
        valuation_preserving,
        internal,
        one_aut,
    )


@dataclass(frozen=True)
class FactorizationResult:
    mode: str
    exponent_map: tuple[tuple[GroupElement, GroupElement], ...]
    coefficients: tuple[tuple[GroupElement, Fraction], ...]
    residual: Automorphism
    certificates: tuple[tuple[str, CheckResult], ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for _, r in self.certificates)


def factorize_aut(
    a: Automorphism, mode: str, samples, precision=None
) -> FactorizationResult:
    """Split ``a`` into a table-based external/character part and a
    leading-term-fixing residual, certified on the sampled exponents."""
    if mode not in ("field", "group"):
        raise DomainError(f"unknown factorization mode {mode!r}")
    rows = induced_maps(a, samples, precision)
    images = [e for _, e, _ in rows]
    if len(set(images)) != len(images):
        raise SampleInsufficiency("induced exponent map is not injective on samples")
    entries = tuple((g, e, c) for g, e, c in rows)
    reconstruction = Automorphism(a.group, TableMonomial(entries))
    residual = compose_aut([a, invert_aut(reconstruction)])

    certificates = []

    roundtrip = CheckResult("pass")
    for g, _, _ in rows:
        monomial = Series.monomial(a.group, g)
        direct = apply_aut(a, monomial, precision)
        rebuilt = apply_aut(
            compose_aut([residual, reconstruction]), monomial, precision
        )
        if not direct.agrees(rebuilt):
            roundtrip = CheckResult("fail", (monomial,))
            break
    certificates.append(("roundtrip", roundtrip))

    label = "residual_one_aut" if mode == "field" else "residual_internal"
    residual_check = CheckResult("pass")
    for _, e, _ in rows:
        monomial = Series.monomial(a.group, e)
        img = apply_aut(residual, monomial, precision)
        if not img.terms or img.leading_term() != LeadingTerm(e, Fraction(1)):
            residual_check = CheckResult("fail", (monomial,))
            break
    certificates.append((label, residual_check))

    if mode == "field":
        table = {g: c for g, _, c in rows}
        mult = CheckResult("pass")
        keys = list(table)
        found = False
        for g in keys:
            for h in keys:
                total = g + h
                if total in table:
                    found = True
                    if table[total] != table[g] * table[h]:
                        mult = CheckResult(
                            "fail",
                            (Series.monomial(a.group, g), Series.monomial(a.group, h)),
                        )
                        break
            if mult.status == "fail":
                break
        if not found:
            mult = CheckResult("n/a", note="no sampled sums inside the table")
        certificates.append(("coefficient_multiplicative", mult))

    return FactorizationResult(
        mode,
        tuple((g, e) for g, e, _ in rows),
        tuple((g, c) for g, _, c in rows),
        residual,
        tuple(certificates),
    )
