"""Command-line front end.

Line-oriented ``KEY: value`` reports; deterministic for a fixed argv
(including the seed).  Exit codes: 0 success, 1 property failure (with
at least one witness printed), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import automorphisms, derivations, groups, parsing
from .errors import HahnError, ParseError
from .groups import GroupDescriptor
from .sampling import SampleSpec, Sampler
from .series import Series


class UsageError(Exception):
    pass


def _parse_group(text: str) -> GroupDescriptor:
    if text == "Z":
        return groups.INTEGERS
    if text == "Q":
        return groups.RATIONALS
    if text.startswith("lex"):
        return groups.lex_power(int(text[3:]))
    if text.startswith("surreal"):
        return groups.surreal_depth(int(text[7:]))
    raise UsageError(f"unknown group {text!r} (expected Z, Q, lexN or surrealD)")


def _config(args) -> parsing.SessionConfig:
    group = _parse_group(args.group)
    precision = None
    if args.precision is not None:
        precision = parsing.parse_group_element(args.precision, group)
    return parsing.SessionConfig(
        group, precision, args.notation, args.seed, args.sample_count
    )


def _fmt(s: Series, config) -> str:
    return parsing.format_series(s, config)


def _print_witness(witness, config):
    parts = []
    for w in witness:
        parts.append(_fmt(w, config) if isinstance(w, Series) else str(w))
    print("witness: " + " , ".join(parts))


def _require_precision(config):
    if config.precision is None:
        raise UsageError("this command needs a finite --precision")
    return config.precision


# -- subcommand bodies -------------------------------------------------------


def _cmd_eval(args, config):
    result = parsing.parse_expression(args.expr, config)
    if config.precision is not None:
        result = result.truncate_to(config.precision)
    print(f"RESULT: {_fmt(result, config)}")
    return 0


def _cmd_apply(args, config):
    aut = parsing.load_aut_spec(args.aut, config)
    s = parsing.parse_series(args.series, config)
    image = automorphisms.apply_aut(aut, s, config.precision)
    if config.precision is not None:
        image = image.truncate_to(config.precision)
    print(f"RESULT: {_fmt(image, config)}")
    return 0


def _cmd_compose(args, config):
    auts = [parsing.load_aut_spec(text, config) for text in args.auts]
    composed = automorphisms.compose_aut(auts)
    print(f"CLASS: {composed.class_tag}")
    if args.series is not None:
        s = parsing.parse_series(args.series, config)
        image = automorphisms.apply_aut(composed, s, config.precision)
        print(f"RESULT: {_fmt(image, config)}")
    return 0


def _cmd_invert(args, config):
    target = _require_precision(config)
    s = parsing.parse_series(args.series, config)
    print(f"RESULT: {_fmt(s.invert(target), config)}")
    return 0


def _cmd_classify(args, config):
    aut = parsing.load_aut_spec(args.aut, config)
    spec = SampleSpec(config.seed, config.sample_count)
    report = automorphisms.classify_aut(aut, spec, config.precision)
    print(f"CLASS: {aut.class_tag}")
    failed = False
    for name, result in report.as_items():
        print(f"{name}: {result.describe()}")
        if result.status == "fail":
            failed = True
            _print_witness(result.witness, config)
    return 1 if failed else 0


def _cmd_factorize(args, config):
    aut = parsing.load_aut_spec(args.aut, config)
    samples = parsing.parse_sample_list(args.samples, config.group)
    result = automorphisms.factorize_aut(aut, args.mode, samples, config.precision)
    print(f"mode: {result.mode}")
    for g, e in result.exponent_map:
        print(
            "map: "
            f"{parsing.format_group_element(g)} -> {parsing.format_group_element(e)}"
        )
    for g, c in result.coefficients:
        print(
            "coeff: "
            f"{parsing.format_group_element(g)} -> {parsing.format_rational(c)}"
        )
    failed = False
    for name, cert in result.certificates:
        print(f"{name}: {cert.describe()}")
        if cert.status == "fail":
            failed = True
            _print_witness(cert.witness, config)
    return 1 if failed else 0


def _cmd_derive(args, config):
    d = parsing.parse_derivation(args.deriv, config)
    s = parsing.parse_series(args.series, config)
    print(f"RESULT: {_fmt(derivations.apply_derivation(d, s), config)}")
    return 0


def _cmd_exp_deriv(args, config):
    target = _require_precision(config)
    d = parsing.parse_derivation(args.deriv, config)
    spec = SampleSpec(config.seed, config.sample_count)
    aut = derivations.exp_derivation(d, target, verify=spec)
    s = parsing.parse_series(args.series, config)
    print(f"RESULT: {_fmt(automorphisms.apply_aut(aut, s, target), config)}")
    return 0


def _cmd_check_deriv(args, config):
    d = parsing.parse_derivation(args.deriv, config)
    spec = SampleSpec(config.seed, config.sample_count)
    report = derivations.check_derivation(d, spec)
    failed = False
    for name in ("leibniz", "contracting", "additive"):
        result = getattr(report, name)
        print(f"{name}: {result.describe()}")
        if result.status == "fail":
            failed = True
            _print_witness(result.witness, config)
    return 1 if failed else 0


def _cmd_selftest(args, config):
    spec = SampleSpec(config.seed, max(config.sample_count, 20))
    failures = []

    sampler = Sampler(spec.seed)
    group = config.group
    for _ in range(spec.count):
        a = sampler.series(group)
        b = sampler.series(group)
        c = sampler.series(group)
        if not ((a + b) * c).agrees(a * c + b * c):
            failures.append(("distributivity", (a, b, c)))
            break
    print("ring_axioms: " + ("fail" if failures else "pass"))

    roundtrip_fail = None
    for notation in ("t", "w"):
        view = parsing.SessionConfig(
            group, None, notation, config.seed, config.sample_count
        )
        sampler = Sampler(spec.seed)
        for _ in range(spec.count):
            s = sampler.series(group)
            if parsing.parse_series(parsing.format_series(s, view), view) != s:
                roundtrip_fail = s
                break
    if roundtrip_fail is not None:
        failures.append(("parser_roundtrip", (roundtrip_fail,)))
    print("parser_roundtrip: " + ("fail" if roundtrip_fail is not None else "pass"))

    if group == groups.RATIONALS:
        phi = groups.scaling_functional(group, 1)
        d = derivations.make_phi_derivation(phi, 1)
        target = groups.embed_rational(group, 6)
        t = Series.monomial(group, 1)
        image = derivations.exp_apply(d, t, target)
        oracle = (t * (Series.one(group) - t).invert(target)).truncate_to(target)
        ok = image.agrees(oracle)
        print("exp_derivation_oracle: " + ("pass" if ok else "fail"))
        if not ok:
            failures.append(("exp_derivation_oracle", (t,)))

    for name, witness in failures:
        print(f"failed: {name}")
        _print_witness(witness, config)
    return 1 if failures else 0


# -- argument plumbing -------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--group", default="Q", help="Z, Q, lexN or surrealD")
    shared.add_argument("--precision", default=None, help="finite precision bound")
    shared.add_argument("--notation", default="t", choices=["t", "w"])
    shared.add_argument("--seed", type=int, default=7)
    shared.add_argument("--sample-count", type=int, default=50)

    parser = argparse.ArgumentParser(
        prog="hahnaut",
        description="Exact Hahn-series arithmetic and automorphism workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[shared], help="evaluate a series expression")
    p.add_argument("expr")
    p.set_defaults(run=_cmd_eval)

    p = sub.add_parser("apply", parents=[shared], help="apply an automorphism")
    p.add_argument("aut")
    p.add_argument("series")
    p.set_defaults(run=_cmd_apply)

    p = sub.add_parser("compose", parents=[shared], help="compose automorphisms")
    p.add_argument("auts", nargs="+")
    p.add_argument("--on", dest="series", default=None, help="series to apply to")
    p.set_defaults(run=_cmd_compose)

    p = sub.add_parser("invert", parents=[shared], help="invert a series")
    p.add_argument("series")
    p.set_defaults(run=_cmd_invert)

    p = sub.add_parser("classify", parents=[shared], help="classification report")
    p.add_argument("aut")
    p.set_defaults(run=_cmd_classify)

    p = sub.add_parser("factorize", parents=[shared], help="decompose on samples")
    p.add_argument("aut")
    p.add_argument("--mode", choices=["field", "group"], required=True)
    p.add_argument("--samples", required=True, help="semicolon-separated exponents")
    p.set_defaults(run=_cmd_factorize)

    p = sub.add_parser("derive", parents=[shared], help="apply a derivation")
    p.add_argument("deriv")
    p.add_argument("series")
    p.set_defaults(run=_cmd_derive)

    p = sub.add_parser("exp-deriv", parents=[shared], help="apply exp of a derivation")
    p.add_argument("deriv")
    p.add_argument("series")
    p.set_defaults(run=_cmd_exp_deriv)

    p = sub.add_parser("check-deriv", parents=[shared], help="check derivation laws")
    p.add_argument("deriv")
    p.set_defaults(run=_cmd_check_deriv)

    p = sub.add_parser("selftest", parents=[shared], help="run the property suites")
    p.set_defaults(run=_cmd_selftest)
    return parser


def run_command(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        config = _config(args)
        return args.run(args, config)
    except ParseError as e:
        print(f"PARSE ERROR at offset {e.pos}: {e}", file=sys.stderr)
        return 2
    except UsageError as e:
        print(f"USAGE ERROR: {e}", file=sys.stderr)
        return 2
    except HahnError as e:
        print(f"ERROR: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
