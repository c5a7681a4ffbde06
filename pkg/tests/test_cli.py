import pytest

from hahnaut.cli import run_command


def run(capsys, *argv):
    code = run_command(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEval:
    def test_product(self, capsys):
        code, out, _ = run(capsys, "eval", "(1 + t^(1)) * (1 - t^(1))")
        assert code == 0
        assert out == "RESULT: 1 - t^(2)\n"

    def test_parse_error_exits_2(self, capsys):
        code, _, err = run(capsys, "eval", "t^(")
        assert code == 2
        assert "offset 3" in err

    def test_unknown_flag_exits_2(self, capsys):
        assert run_command(["eval", "--bogus", "1"]) == 2
        capsys.readouterr()


class TestApply:
    def test_exp_derivation_example(self, capsys):
        code, out, _ = run(
            capsys,
            "apply",
            "--group=Q",
            "--precision=5",
            "exp_derivation{phi: linear(1), shift: 1, precision: 5}",
            "t^(1)",
        )
        assert code == 0
        assert out == "RESULT: t^(1) + t^(2) + t^(3) + t^(4) (mod t^(5))\n"

    def test_validation_error_exits_1(self, capsys):
        code, _, err = run(capsys, "apply", "internal_mult{eps: 1}", "t^(1)")
        assert code == 1
        assert "NotInfinitesimal" in err

    def test_omega_notation(self, capsys):
        code, out, _ = run(
            capsys, "apply", "--notation=w", "external_field{tau: scalar(2)}", "w^(1)"
        )
        assert code == 0
        assert out == "RESULT: w^(2)\n"


class TestClassify:
    def test_internal_mult_fails_multiplicativity(self, capsys):
        code, out, _ = run(
            capsys,
            "classify",
            "--group=Q",
            "--seed=7",
            "--sample-count=50",
            "internal_mult{eps: t^(1)}",
        )
        assert code == 1
        assert "additive: pass" in out
        assert "multiplicative: fail" in out
        assert "witness: t^(1) , t^(1)" in out
        assert "one_aut: n/a (not multiplicative)" in out

    def test_exp_derivation_all_pass(self, capsys):
        code, out, _ = run(
            capsys,
            "classify",
            "--precision=6",
            "exp_derivation{phi: linear(1), shift: 1, precision: 6}",
        )
        assert code == 0
        assert out.count(": pass") == 6

    def test_determinism_byte_identical(self, capsys):
        argv = [
            "classify",
            "--group=Q",
            "--seed=7",
            "--sample-count=50",
            "internal_mult{eps: t^(1)}",
        ]
        first = run(capsys, *argv)
        second = run(capsys, *argv)
        assert first == second


class TestInvert:
    def test_geometric_inverse(self, capsys):
        code, out, _ = run(capsys, "invert", "--precision=4", "1 + t^(1)")
        assert code == 0
        assert out == "RESULT: 1 - t^(1) + t^(2) - t^(3) (mod t^(4))\n"

    def test_requires_precision(self, capsys):
        code, _, err = run(capsys, "invert", "1 + t^(1)")
        assert code == 2
        assert "precision" in err


class TestCompose:
    def test_inverse_round_trip(self, capsys):
        code, out, _ = run(
            capsys,
            "compose",
            "--precision=6",
            "internal_mult{eps: t^(1)}",
            "inverse(internal_mult{eps: t^(1)})",
            "--on",
            "1 + t^(-1)",
        )
        assert code == 0
        assert "CLASS: group-aut" in out
        assert "RESULT: t^(-1) + 1 (mod t^(6))" in out


class TestFactorize:
    def test_field_mode_tables(self, capsys):
        code, out, _ = run(
            capsys,
            "factorize",
            "--mode=field",
            "--samples=-1; 1/2; 1",
            "compose(character{1: 2}, external_field{tau: scalar(2)})",
        )
        assert code == 0
        assert "map: -1 -> -2" in out
        assert "coeff: 1 -> 4" in out
        assert "roundtrip: pass" in out
        assert "residual_one_aut: pass" in out
        assert "coefficient_multiplicative: pass" in out


class TestDerivations:
    def test_derive(self, capsys):
        code, out, _ = run(
            capsys, "derive", "deriv{phi: linear(1), shift: 1}", "5 + 3*t^(2)"
        )
        assert code == 0
        assert out == "RESULT: 6*t^(3)\n"

    def test_check_deriv_negative_control(self, capsys):
        code, out, _ = run(
            capsys, "check-deriv", "table{map: {1: t^(2), 2: t^(3)}, gain: 1}"
        )
        assert code == 1
        assert "leibniz: fail" in out
        assert "witness: t^(1) , t^(1)" in out

    def test_exp_deriv_refuses_broken_table(self, capsys):
        code, _, err = run(
            capsys,
            "exp-deriv",
            "--precision=5",
            "table{map: {1: t^(2), 2: t^(3)}, gain: 1}",
            "t^(1)",
        )
        assert code == 1
        assert "leibniz" in err


class TestSelftest:
    @pytest.mark.parametrize("group", ["Q", "lex2", "surreal1"])
    def test_passes(self, capsys, group):
        code, out, _ = run(capsys, "selftest", f"--group={group}")
        assert code == 0
        assert "ring_axioms: pass" in out
        assert "parser_roundtrip: pass" in out
