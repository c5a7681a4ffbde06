"""Recursive-descent parser and canonical formatter.

The textual layer covers series literals in two notations, group
elements of every supported kind, Q-linear functionals, monotone maps,
additive automorphisms of the value group, derivation specs, and the
structured automorphism grammar used by the command line.

Series syntax::

    series := term (("+"|"-") term)* [" (mod " base "^(" exponent "))"]
    term   := rational ["*" base "^" "(" exponent ")"]
            | base "^" "(" exponent ")"

with ``base`` being ``t`` or ``w`` depending on the session notation.
In omega notation the printed exponent is the negation of the internal
one (``w^(y)`` is ``t^(-y)``) and terms print with the largest omega
exponent first.  Exponents are always parenthesized; lexicographic
exponents are tuples ``(a,b,...)`` and self-similar exponents are
bracketed series literals ``[...]`` (always in t-notation).

``format_series`` and ``parse_series`` are exact inverses on every
series, including truncated ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import automorphisms, derivations, groups
from .errors import (
    DomainError,
    ExponentParseError,
    InsufficientPrecision,
    ParseError,
)
from .groups import RATIONALS, GroupDescriptor, GroupElement
from .series import Series


@dataclass(frozen=True)
class SessionConfig:
    """Shared CLI/session settings: group, precision, notation, sampling."""

    group: GroupDescriptor = RATIONALS
    precision: GroupElement | None = None
    notation: str = "t"
    seed: int = 7
    sample_count: int = 50

    def __post_init__(self):
        if self.notation not in ("t", "w"):
            raise DomainError(f"unknown notation {self.notation!r}")
        if self.sample_count < 1:
            raise DomainError("sample_count must be at least 1")

    @property
    def base(self) -> str:
        return self.notation

    def with_group(self, group: GroupDescriptor) -> "SessionConfig":
        return SessionConfig(group, None, "t", self.seed, self.sample_count)


# -- tokenizer ---------------------------------------------------------------

_SYMBOLS = "{}()[],:^*+-/;"


@dataclass(frozen=True)
class Token:
    kind: str  # "number" | "ident" | one of _SYMBOLS | "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("number", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], i))
            i = j
            continue
        if ch in _SYMBOLS:
            tokens.append(Token(ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    # -- plumbing ----------------------------------------------------------

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def peek_at(self, offset: int) -> Token:
        j = min(self.i + offset, len(self.tokens) - 1)
        return self.tokens[j]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def error(self, message: str):
        raise ParseError(message, self.peek.pos)

    def expect(self, kind: str, what: str | None = None) -> Token:
        if self.peek.kind != kind:
            self.error(f"expected {what or kind!r}")
        return self.advance()

    def keyword(self, word: str):
        tok = self.expect("ident", f"keyword {word!r}")
        if tok.text != word:
            raise ParseError(f"expected keyword {word!r}, got {tok.text!r}", tok.pos)

    def at_keyword(self, word: str) -> bool:
        return self.peek.kind == "ident" and self.peek.text == word

    def done(self):
        if self.peek.kind != "end":
            self.error("unexpected trailing input")

    # -- scalars and group elements ----------------------------------------

    def rational(self) -> Fraction:
        sign = 1
        if self.peek.kind == "-":
            self.advance()
            sign = -1
        elif self.peek.kind == "+":
            self.advance()
        num = int(self.expect("number", "a number").text)
        if self.peek.kind == "/" and self.peek_at(1).kind == "number":
            self.advance()
            den = int(self.expect("number", "a denominator").text)
            if den == 0:
                self.error("zero denominator")
            return Fraction(sign * num, den)
        return Fraction(sign * num)

    def group_element(self, group: GroupDescriptor) -> GroupElement:
        kind = group.kind
        if kind == "LexPower" and self.peek.kind == "(":
            self.advance()
            coords = [self.rational()]
            while self.peek.kind == ",":
                self.advance()
                coords.append(self.rational())
            self.expect(")")
            if len(coords) != group.param:
                self.error(f"expected {group.param} coordinates")
            return groups.element(group, tuple(coords))
        if kind == "SurrealDepth" and group.param >= 1 and self.peek.kind == "[":
            self.advance()
            inner = self.series_sum(SessionConfig(group.exponent_group))
            self.expect("]")
            return groups.element(group, inner)
        return groups.element(group, self.rational())

    def rational_list(self) -> list[Fraction]:
        self.expect("[")
        values = [self.rational()]
        while self.peek.kind == ",":
            self.advance()
            values.append(self.rational())
        self.expect("]")
        return values

    # -- series ------------------------------------------------------------

    def base_token(self, config: SessionConfig):
        tok = self.expect("ident", f"the series variable {config.base!r}")
        if tok.text != config.base:
            raise ParseError(
                f"expected the series variable {config.base!r}, got {tok.text!r}",
                tok.pos,
            )

    def exponent(self, config: SessionConfig) -> GroupElement:
        self.expect("(", "'(' before the exponent")
        try:
            g = self.group_element(config.group)
        except ParseError:
            raise
        except (DomainError, ValueError) as e:
            raise ExponentParseError(
                f"exponent does not fit the session group: {e}", self.peek.pos
            ) from e
        self.expect(")", "')' after the exponent")
        return -g if config.notation == "w" else g

    def series_term(self, config: SessionConfig):
        if self.peek.kind in ("number", "-", "+"):
            coeff = self.rational()
            if self.peek.kind == "*":
                self.advance()
                self.base_token(config)
                self.expect("^")
                return self.exponent(config), coeff
            return groups.zero(config.group), coeff
        self.base_token(config)
        self.expect("^")
        return self.exponent(config), Fraction(1)

    def series_sum(self, config: SessionConfig) -> Series:
        terms = []
        sign = 1
        if self.peek.kind == "-":
            self.advance()
            sign = -1
        while True:
            ex, c = self.series_term(config)
            terms.append((ex, sign * c))
            if self.peek.kind == "+":
                self.advance()
                sign = 1
            elif self.peek.kind == "-":
                self.advance()
                sign = -1
            else:
                break
        return Series.make(config.group, terms)

    def mod_suffix(self, config: SessionConfig) -> GroupElement | None:
        if self.peek.kind == "(" and self.peek_at(1).text == "mod":
            self.advance()
            self.keyword("mod")
            self.base_token(config)
            self.expect("^")
            p = self.exponent(config)
            self.expect(")")
            return p
        return None

    def series(self, config: SessionConfig) -> Series:
        body = self.series_sum(config)
        precision = self.mod_suffix(config)
        if precision is None:
            return body
        return body.truncate_to(precision)

    # -- arithmetic expressions over series ---------------------------------

    def expression(self, config: SessionConfig) -> Series:
        total = self.expr_product(config)
        while self.peek.kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.expr_product(config)
            total = total + rhs if op == "+" else total - rhs
        return total

    def expr_product(self, config: SessionConfig) -> Series:
        total = self.expr_atom(config)
        while self.peek.kind in ("*", "/"):
            op = self.advance().kind
            rhs = self.expr_atom(config)
            if op == "*":
                total = total * rhs
            else:
                total = total * _expression_inverse(rhs, config)
        return total

    def expr_atom(self, config: SessionConfig) -> Series:
        if self.peek.kind == "(":
            self.advance()
            inner = self.expression(config)
            self.expect(")")
            return inner
        if self.peek.kind == "-":
            self.advance()
            return -self.expr_atom(config)
        ex, c = self.series_term(config)
        return Series.make(config.group, [(ex, c)])

    # -- functionals, maps, value-group automorphisms -----------------------

    def _pairs_ahead(self) -> bool:
        """True when a ':' occurs at bracket depth 0 before the closer."""
        depth = 0
        for tok in self.tokens[self.i :]:
            if tok.kind in "([{":
                depth += 1
            elif tok.kind in ")]}":
                if depth == 0:
                    return False
                depth -= 1
            elif tok.kind == ":" and depth == 0:
                return True
            elif tok.kind == "end":
                return False
        return False

    def functional(self, config: SessionConfig) -> groups.LinearFunctional:
        self.keyword("linear")
        self.expect("(")
        if self._pairs_ahead():
            gens = []
            while True:
                g = self.group_element(config.group)
                self.expect(":")
                gens.append((g, self.rational()))
                if self.peek.kind == ",":
                    self.advance()
                    continue
                break
            phi = groups.LinearFunctional(config.group, tuple(gens))
        else:
            values = [self.rational()]
            while self.peek.kind == ",":
                self.advance()
                values.append(self.rational())
            phi = groups.standard_functional(config.group, values)
        self.expect(")")
        return phi

    def monotone_map(self, config: SessionConfig) -> groups.MonotoneMap:
        tok = self.expect("ident", "a monotone map")
        group = config.group
        if tok.text == "identity":
            return groups.identity_map(group)
        if tok.text == "translate":
            self.expect("(")
            offset = self.group_element(group)
            self.expect(")")
            return groups.Translation(offset)
        if tok.text == "scalar":
            self.expect("(")
            q = self.rational()
            self.expect(")")
            return groups.PositiveScalar(group, q)
        if tok.text == "piecewise":
            self.expect("{")
            self.keyword("breaks")
            self.expect(":")
            breaks = self.rational_list()
            self.expect(",")
            self.keyword("slopes")
            self.expect(":")
            slopes = self.rational_list()
            anchor = Fraction(0)
            if self.peek.kind == ",":
                self.advance()
                self.keyword("at")
                self.expect(":")
                anchor = self.rational()
            self.expect("}")
            if group != RATIONALS:
                raise ParseError(
                    "piecewise maps are only available over the rationals", tok.pos
                )
            return groups.PiecewiseLinear(tuple(breaks), tuple(slopes), anchor)
        if tok.text == "compose":
            self.expect("(")
            parts = [self.monotone_map(config)]
            while self.peek.kind == ",":
                self.advance()
                parts.append(self.monotone_map(config))
            self.expect(")")
            return groups.MonotoneComposite(tuple(parts))
        raise ParseError(f"unknown monotone map {tok.text!r}", tok.pos)

    def additive_aut(self, config: SessionConfig) -> groups.AdditiveAutomorphism:
        tok = self.expect("ident", "an additive automorphism")
        group = config.group
        if tok.text == "identity":
            return groups.identity_automorphism(group)
        if tok.text == "scalar":
            self.expect("(")
            q = self.rational()
            self.expect(")")
            return groups.PositiveScalar(group, q)
        if tok.text == "matrix":
            self.expect("(")
            self.expect("[")
            rows = [tuple(self.rational_list())]
            while self.peek.kind == ",":
                self.advance()
                rows.append(tuple(self.rational_list()))
            self.expect("]")
            self.expect(")")
            return groups.TriangularMatrix(group, tuple(rows))
        if tok.text == "compose":
            self.expect("(")
            parts = [self.additive_aut(config)]
            while self.peek.kind == ",":
                self.advance()
                parts.append(self.additive_aut(config))
            self.expect(")")
            return groups.AdditiveComposite(tuple(parts))
        raise ParseError(f"unknown additive automorphism {tok.text!r}", tok.pos)

    # -- derivations ---------------------------------------------------------

    def derivation(self, config: SessionConfig) -> derivations.MonomialDerivation:
        tok = self.expect("ident", "a derivation spec")
        group = config.group
        if tok.text == "deriv":
            self.expect("{")
            self.keyword("phi")
            self.expect(":")
            phi = self.functional(config)
            self.expect(",")
            self.keyword("shift")
            self.expect(":")
            shift = self.group_element(group)
            self.expect("}")
            return derivations.make_phi_derivation(phi, shift)
        if tok.text == "table":
            self.expect("{")
            self.keyword("map")
            self.expect(":")
            self.expect("{")
            entries = []
            while True:
                g = self.group_element(group)
                self.expect(":")
                entries.append((g, self.series_sum(config)))
                if self.peek.kind == ",":
                    self.advance()
                    continue
                break
            self.expect("}")
            self.expect(",")
            self.keyword("gain")
            self.expect(":")
            gain = self.group_element(group)
            zero_default = False
            validate = False
            if self.peek.kind == ",":
                self.advance()
                self.keyword("zero_default")
                self.expect(":")
                flag = self.expect("ident", "true or false")
                zero_default = flag.text == "true"
            self.expect("}")
            return derivations.make_table_derivation(
                group, entries, gain, zero_default, validate=validate
            )
        raise ParseError(f"unknown derivation spec {tok.text!r}", tok.pos)

    # -- automorphism specs --------------------------------------------------

    def pairs(self, config: SessionConfig, stop_words=()):
        out = []
        while True:
            if self.peek.kind == "}" or (
                self.peek.kind == "ident" and self.peek.text in stop_words
            ):
                break
            g = self.group_element(config.group)
            self.expect(":")
            out.append((g, self.rational()))
            if self.peek.kind == ",":
                nxt = self.peek_at(1)
                if nxt.kind == "ident" and nxt.text in stop_words:
                    self.advance()
                    break
                self.advance()
                continue
            break
        return out

    def automorphism(self, config: SessionConfig) -> automorphisms.Automorphism:
        tok = self.expect("ident", "an automorphism spec")
        group = config.group
        name = tok.text
        if name == "identity":
            return automorphisms.identity_aut(group)
        if name == "external_field":
            self.expect("{")
            self.keyword("tau")
            self.expect(":")
            tau = self.additive_aut(config)
            self.expect("}")
            return automorphisms.make_external_field(tau)
        if name == "character":
            self.expect("{")
            entries = self.pairs(config)
            self.expect("}")
            chi = automorphisms.PartialCharacter(
                group,
                tuple(g for g, _ in entries),
                tuple(v for _, v in entries),
            )
            return automorphisms.make_character_lift(chi)
        if name == "internal_mult":
            self.expect("{")
            self.keyword("eps")
            self.expect(":")
            eps = self.series_sum(config)
            self.expect("}")
            return automorphisms.make_internal_mult(eps)
        if name == "external_group":
            self.expect("{")
            self.keyword("zeta")
            self.expect(":")
            zeta = self.monotone_map(config)
            default = Fraction(1)
            exceptions = []
            if self.peek.kind == ",":
                self.advance()
                if self.at_keyword("scale"):
                    self.advance()
                    self.expect(":")
                    exceptions = self.pairs(config, stop_words=("default",))
                if self.at_keyword("default"):
                    self.advance()
                    self.expect(":")
                    default = self.rational()
            self.expect("}")
            scaling = automorphisms.ScalingFamily(group, default, tuple(exceptions))
            return automorphisms.make_external_group(zeta, scaling)
        if name == "exp_derivation":
            self.expect("{")
            self.keyword("phi")
            self.expect(":")
            phi = self.functional(config)
            self.expect(",")
            self.keyword("shift")
            self.expect(":")
            shift = self.group_element(group)
            self.expect(",")
            self.keyword("precision")
            self.expect(":")
            target = self.group_element(group)
            self.expect("}")
            d = derivations.make_phi_derivation(phi, shift)
            return derivations.exp_derivation(d, target)
        if name == "compose":
            self.expect("(")
            parts = [self.automorphism(config)]
            while self.peek.kind == ",":
                self.advance()
                parts.append(self.automorphism(config))
            self.expect(")")
            return automorphisms.compose_aut(parts)
        if name == "inverse":
            self.expect("(")
            inner = self.automorphism(config)
            self.expect(")")
            return automorphisms.invert_aut(inner)
        raise ParseError(f"unknown automorphism spec {name!r}", tok.pos)


def _expression_inverse(rhs: Series, config: SessionConfig) -> Series:
    if config.precision is not None:
        return rhs.invert(config.precision)
    if len(rhs.terms) == 1 and rhs.precision is None:
        g, c = rhs.terms[0]
        return Series.monomial(rhs.group, -g, 1 / c)
    raise InsufficientPrecision(
        "division by a non-monomial needs a finite session precision"
    )


# -- public entry points -----------------------------------------------------


def _run(text: str, action):
    parser = _Parser(text)
    result = action(parser)
    parser.done()
    return result


def parse_rational(text: str) -> Fraction:
    return _run(text, lambda p: p.rational())


def parse_group_element(text: str, group: GroupDescriptor) -> GroupElement:
    return _run(text, lambda p: p.group_element(group))


def parse_series(text: str, config: SessionConfig) -> Series:
    return _run(text, lambda p: p.series(config))


def parse_expression(text: str, config: SessionConfig) -> Series:
    return _run(text, lambda p: p.expression(config))


def parse_functional(text: str, config: SessionConfig) -> groups.LinearFunctional:
    return _run(text, lambda p: p.functional(config))


def parse_derivation(text: str, config: SessionConfig):
    return _run(text, lambda p: p.derivation(config))


def load_aut_spec(text: str, config: SessionConfig) -> automorphisms.Automorphism:
    return _run(text, lambda p: p.automorphism(config))


def parse_sample_list(text: str, group: GroupDescriptor) -> list[GroupElement]:
    """Semicolon-separated group elements (commas belong to lex tuples)."""

    def action(p: _Parser):
        out = [p.group_element(group)]
        while p.peek.kind == ";":
            p.advance()
            out.append(p.group_element(group))
        return out

    return _run(text, action)


# -- formatting --------------------------------------------------------------


def format_rational(q: Fraction) -> str:
    return str(q)


def format_group_element(g: GroupElement) -> str:
    kind = g.descriptor.kind
    if kind == "LexPower":
        return "(" + ",".join(format_rational(c) for c in g.value) + ")"
    if kind == "SurrealDepth" and g.descriptor.param >= 1:
        return "[" + format_series(g.value) + "]"
    return format_rational(Fraction(g.value))


def format_series(s: Series, config: SessionConfig | None = None) -> str:
    omega = config is not None and config.notation == "w"
    base = "w" if omega else "t"
    pieces = []
    for ex, c in s.terms:
        shown = -ex if omega else ex
        if ex.is_zero():
            body = format_rational(abs(c))
        else:
            prefix = "" if abs(c) == 1 else format_rational(abs(c)) + "*"
            body = f"{prefix}{base}^({format_group_element(shown)})"
        pieces.append((c < 0, body))
    if not pieces:
        out = "0"
    else:
        negative, body = pieces[0]
        out = ("-" if negative else "") + body
        for negative, body in pieces[1:]:
            out += (" - " if negative else " + ") + body
    if s.precision is not None:
        shown = -s.precision if omega else s.precision
        out += f" (mod {base}^({format_group_element(shown)}))"
    return out
