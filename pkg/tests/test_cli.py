import io
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

from src.cli import main
from src.errors import InconsistentChi
from src.formats import parse_diamond, parse_recipe

ASSETS = Path(__file__).parent / "assets"


@pytest.mark.unit
class TestCli:
    """Tests for the command-line entry point"""

    @pytest.fixture
    def run_cli(self):
        """Run main() and capture exit code, stdout and stderr"""
        def run(argv):
            out, err = io.StringIO(), io.StringIO()
            with redirect_stdout(out), redirect_stderr(err):
                code = main(argv)
            return code, out.getvalue(), err.getvalue()
        return run

    @pytest.fixture
    def target_file(self):
        """Sample surface target"""
        return str(ASSETS / "target_surface.txt")

    def test_construct_then_verify(self, run_cli, target_file, tmp_path):
        """Test that verify accepts construct's own recipe"""
        recipe_path = tmp_path / "recipe.txt"
        code, out, _ = run_cli(["construct", "--target", target_file, "--recipe-out", str(recipe_path)])
        assert code == 0
        diamond = parse_diamond(out)
        assert diamond.entry(2, 0) % 3 == 1
        assert parse_recipe(recipe_path.read_text()).n == 2

        code, out, _ = run_cli(["verify", "--recipe", str(recipe_path), "--target", target_file])
        assert code == 0
        assert out.strip() == "ok"

        code, out, _ = run_cli(["eval", "--recipe", str(recipe_path)])
        assert code == 0
        assert parse_diamond(out) == diamond

    def test_verify_against_other_target(self, run_cli, target_file, tmp_path):
        """Test that verify fails on a target the recipe does not meet"""
        recipe_path = tmp_path / "recipe.txt"
        run_cli(["construct", "--target", target_file, "--recipe-out", str(recipe_path)])
        other = tmp_path / "other.txt"
        other.write_text("dim 2\nmod 3\nh 1 1 0\n")
        code, out, _ = run_cli(["verify", "--recipe", str(recipe_path), "--target", str(other)])
        assert code == 1
        assert out.startswith("fail")

    def test_hypersurface(self, run_cli):
        """Test the cubic threefold against its golden diamond"""
        code, out, _ = run_cli(["hypersurface", "--dim", "3", "--degree", "3"])
        assert code == 0
        assert out == (ASSETS / "cubic_threefold.txt").read_text()

    def test_hypersurface_pretty(self, run_cli):
        """Test that the quartic surface prints h11 = 20 in the middle"""
        code, out, _ = run_cli(["hypersurface", "--dim", "2", "--degree", "4", "--pretty"])
        assert code == 0
        assert out.splitlines()[2].split() == ["1", "20", "1"]

    def test_enumerate(self, run_cli):
        """Test that every curve target mod 3 is constructed"""
        code, out, _ = run_cli(["enumerate", "--dim", "1", "--mod", "3", "--jobs", "1"])
        assert code == 0
        assert out.strip() == "ok 3"

    def test_refute(self, run_cli, tmp_path):
        """Test the certificate for h11 - 5"""
        recipe_path = tmp_path / "recipe.txt"
        code, out, _ = run_cli(["refute", "--poly", str(ASSETS / "relation_h11.txt"), "--recipe-out", str(recipe_path)])
        assert code == 0
        assert out.startswith("modulus 2\n")
        assert "witness-value -5" in out
        assert recipe_path.read_text() in out

    def test_parse_error_exit_code(self, run_cli, tmp_path):
        """Test that a malformed target exits with 2 and a line number"""
        bad = tmp_path / "bad.txt"
        bad.write_text("dim 2\nmod 3\nh 0 1 7\n")
        code, out, err = run_cli(["construct", "--target", str(bad)])
        assert code == 2
        assert out == ""
        assert "line 3" in err

    def test_missing_file(self, run_cli, tmp_path):
        """Test that an unreadable file exits with 2"""
        code, _, err = run_cli(["eval", "--recipe", str(tmp_path / "absent.txt")])
        assert code == 2
        assert "cannot read" in err

    def test_malformed_recipe(self, run_cli, tmp_path):
        """Test that a structurally invalid recipe exits with 2"""
        recipe = tmp_path / "recipe.txt"
        recipe.write_text("dim 2\nmod 2\ncurve 0 2\n")
        code, _, err = run_cli(["eval", "--recipe", str(recipe)])
        assert code == 2
        assert "dimension" in err

    def test_zero_polynomial(self, run_cli, tmp_path):
        """Test that a cancelling polynomial exits with 2"""
        poly = tmp_path / "poly.txt"
        poly.write_text("dim 2\nterm 1 1 0 1\nterm -1 0 1 1\n")
        code, _, _ = run_cli(["refute", "--poly", str(poly)])
        assert code == 2

    def test_usage_errors(self, run_cli):
        """Test that argparse errors exit with 2"""
        assert run_cli([])[0] == 2
        assert run_cli(["hypersurface", "--dim", "two", "--degree", "3"])[0] == 2
        assert run_cli(["enumerate", "--dim", "1", "--mod", "2", "--jobs", "0"])[0] == 2


    def test_enumerate_reports_engine_error(self, run_cli, monkeypatch):
        """Test that an engine error prints a fail line instead of aborting"""
        def broken(target):
            raise InconsistentChi("middle row has a negative entry")
        monkeypatch.setattr("src.construct.construct", broken)
        code, out, _ = run_cli(["enumerate", "--dim", "1", "--mod", "2", "--jobs", "1"])
        assert code == 1
        assert out.startswith("fail ")
        assert out.rstrip().endswith(": middle row has a negative entry")

    @pytest.mark.parametrize("value", ["four", "0"])
    def test_bad_jobs_environment(self, run_cli, monkeypatch, value):
        """Test that an invalid HODGE_JOBS exits with 2"""
        monkeypatch.setenv("HODGE_JOBS", value)
        code, out, err = run_cli(["enumerate", "--dim", "1", "--mod", "2"])
        assert code == 2
        assert out == ""
        assert "HODGE_JOBS" in err
