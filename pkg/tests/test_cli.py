"""End-to-end command-line interface tests via main(argv)."""

import json

import pytest

from expperiods.cli import load_problem, main, parse_complex_arg
from expperiods.errors import SpecFormatError

AIRY = "fixtures/airy.spec"
BESSEL = "fixtures/bessel.spec"
GAUSSIAN = "fixtures/gaussian.spec"
LINEAR = "fixtures/linear.spec"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestProblemFiles:
    def test_fixture_loads(self):
        spec, tol = load_problem(AIRY)
        assert spec.label == "airy"
        assert tol == 1e-10

    def test_unknown_key_rejected(self, tmp_path):
        p = tmp_path / "bad.spec"
        p.write_text("fiber = affine_line\ng = t*u\nfrobnicate = 3\n")
        with pytest.raises(SpecFormatError, match="unknown key"):
            load_problem(str(p))

    def test_missing_g_rejected(self, tmp_path):
        p = tmp_path / "bad.spec"
        p.write_text("fiber = affine_line\n")
        with pytest.raises(SpecFormatError, match="missing required key"):
            load_problem(str(p))

    def test_bad_fiber_rejected(self, tmp_path):
        p = tmp_path / "bad.spec"
        p.write_text("fiber = projective_line\ng = t*u\n")
        with pytest.raises(SpecFormatError, match="fiber must be"):
            load_problem(str(p))

    def test_syntax_error_exit_code(self, capsys, tmp_path):
        p = tmp_path / "bad.spec"
        p.write_text("fiber affine_line\n")
        code, _out, err = run(capsys, "derive", str(p))
        assert code == 1
        assert "key = value" in err

    def test_missing_file_exit_code(self, capsys):
        code, _out, err = run(capsys, "derive", "/nonexistent/x.spec")
        assert code == 1

    def test_complex_argument_parsing(self):
        assert parse_complex_arg("1.5") == 1.5 + 0.0j
        assert parse_complex_arg("1,-2") == 1.0 - 2.0j
        with pytest.raises(Exception):
            parse_complex_arg("abc")


class TestDerive:
    def test_airy_json(self, capsys):
        code, out, _ = run(capsys, "derive", AIRY)
        assert code == 0
        payload = json.loads(out)
        assert payload["basis"] == {"rank": 2, "exponents": [0, 1]}
        assert payload["connection"]["matrix"] == [["0", "-1"], ["-t", "0"]]
        assert payload["scalar_ode"]["coefficients"] == ["-t", "0", "1"]

    def test_bessel_json(self, capsys):
        code, out, _ = run(capsys, "derive", BESSEL)
        assert code == 0
        payload = json.loads(out)
        assert payload["basis"]["rank"] == 2
        assert payload["scalar_ode"]["coefficients"] == ["t", "1", "t"]

    def test_rank_zero_derives(self, capsys):
        code, out, _ = run(capsys, "derive", LINEAR)
        assert code == 0
        payload = json.loads(out)
        assert payload["basis"]["rank"] == 0
        assert payload["scalar_ode"]["order"] == 0

    def test_deterministic_output(self, capsys):
        _, out1, _ = run(capsys, "derive", BESSEL)
        _, out2, _ = run(capsys, "derive", BESSEL)
        assert out1 == out2


class TestSingular:
    def test_gaussian_singular_ball(self, capsys):
        code, out, _ = run(capsys, "singular", GAUSSIAN)
        assert code == 0
        payload = json.loads(out)
        assert len(payload["balls"]) == 1
        ball = payload["balls"][0]
        assert abs(ball["center"][0]) < 1e-12
        assert "ConnectionPole" in ball["provenance"]

    def test_linear_leading_coefficient_only(self, capsys):
        code, out, _ = run(capsys, "singular", LINEAR)
        assert code == 0
        payload = json.loads(out)
        assert [d["provenance"] for d in payload["defining"]] == [
            "LeadingCoeffVanishes"
        ]
        assert len(payload["balls"]) == 1


class TestCycles:
    def test_airy_cycles(self, capsys):
        code, out, _ = run(capsys, "cycles", AIRY, "--t", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["rank"] == 2
        assert len(payload["cycles"]) == 2

    def test_rank_zero_note(self, capsys):
        code, out, _ = run(capsys, "cycles", LINEAR, "--t", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["rank"] == 0 and payload["note"] == "rank zero"

    def test_at_pole_rejected(self, capsys):
        code, _out, err = run(capsys, "cycles", BESSEL, "--t", "0")
        assert code == 2
        assert "singular ball" in err


class TestPeriods:
    def test_gaussian_value(self, capsys):
        code, out, _ = run(capsys, "periods", GAUSSIAN, "--t", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["rank"] == 1
        entry = payload["entries"][0][0]
        import math

        assert abs(complex(*entry["value"]) - math.sqrt(math.pi)) < 1e-9

    def test_at_pole_exit_two(self, capsys):
        code, _out, _err = run(capsys, "periods", GAUSSIAN, "--t", "0")
        assert code == 2

    def test_rank_zero_grace(self, capsys):
        code, out, _ = run(capsys, "periods", LINEAR, "--t", "1")
        assert code == 0
        assert json.loads(out)["entries"] == []


class TestSamples:
    def test_csv_shape_and_determinism(self, capsys):
        argv = ("samples", GAUSSIAN, "--path", "1", "2", "--n", "4")
        code, out1, _ = run(capsys, *argv)
        assert code == 0
        lines = out1.strip().splitlines()
        assert lines[0] == "t_re,t_im,p0_re,p0_im,p0_err"
        assert len(lines) == 6  # header + endpoint + 4 leg samples
        code, out2, _ = run(capsys, *argv)
        assert out1 == out2

    def test_path_through_pole_exit_two(self, capsys):
        code, _out, _err = run(
            capsys, "samples", GAUSSIAN, "--path", "1", "-1", "--n", "4"
        )
        assert code == 2

    def test_rank_zero_header_only(self, capsys):
        code, out, _ = run(capsys, "samples", LINEAR, "--path", "1", "2")
        assert code == 0
        assert out.strip() == "t_re,t_im"


class TestVerify:
    def test_gaussian_passes(self, capsys):
        code, out, err = run(capsys, "verify", GAUSSIAN, "--stokes", "2")
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"] is True
        assert "ok" in err


class TestMonodromy:
    def test_gaussian_loop(self, capsys):
        code, out, _ = run(capsys, "monodromy", GAUSSIAN, "--center", "0")
        assert code == 0
        payload = json.loads(out)
        m = payload["m_cycle"]
        assert abs(m[0][0][0] + 1.0) < 1e-8

    def test_loop_through_pole_exit_two(self, capsys):
        code, _out, _err = run(
            capsys, "monodromy", GAUSSIAN, "--center", "0.5", "--basepoint", "1"
        )
        assert code == 2
