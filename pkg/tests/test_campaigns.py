"""
Tests for run configurations, problem builders, campaigns and the CLI.
"""

import numpy as np
import pytest

from interfem.cli import build_parser, main
from interfem.src.campaigns import ProblemAdapter, parse_config, run_campaign
from interfem.src.campaigns.runner import solver_settings
from interfem.src.config import SolverConfig, get_config, set_config
from interfem.src.exceptions import ParseError, ValidationError
from interfem.src.geometry import BoxDomain
from interfem.src.mesh import read_mesh

MS1 = """\
# unit disk, inclusion of radius 1/2
[outer]
shape = circle
radius = 1

[inclusion 1]
radius = 0.5

[subdomain 1]
a = 1

[subdomain 2]
a = 1

[interface 1]
g = -(8/3)*cos(theta)

[exact 1]
u = x

[exact 2]
u = -(1/3)*(x - x/r^2)

[solver]
h = 0.15
levels = 2

[campaign]
kind = solve
seed = 7
"""


@pytest.fixture
def no_self_test():
    """Skip the orientation self-test in campaigns that do not check it."""
    set_config(SolverConfig(orientation_self_test=False))


def test_parse_config_sections():
    """Test that every section lands in its model."""
    config = parse_config(MS1, source_name="ms1.ini")
    assert config.subdomain_count == 2
    assert config.components == 1
    assert config.inclusions[1].radius == 0.5
    assert config.solver.h == 0.15
    assert config.solver.method == "reduction"
    assert config.campaign.seed == 7
    assert len(config.interfaces[1].g) == 1
    assert sorted(config.exact) == [1, 2]


def test_parse_config_lists_and_vectors():
    """Test ';'-separated expression lists and comma-separated points."""
    text = """\
[inclusion 1]
radius = 0.3
center = 0.1, -0.2
perturbation = 3:0.02, 5:0.01
shape = perturbed_circle
holder_exponent = 0.5

[coefficients]
components = 2

[interface 1]
g = x; y

[campaign]
kind = probe
center = 0.7, 0.0
one_sided = true
deltas = 0.2, 0.1
"""
    config = parse_config(text)
    inclusion = config.inclusions[1]
    assert inclusion.center == (0.1, -0.2)
    assert inclusion.perturbation == [(3, 0.02), (5, 0.01)]
    assert len(config.interfaces[1].g) == 2
    assert config.campaign.center == (0.7, 0.0)
    assert config.campaign.one_sided is True
    assert config.campaign.deltas == [0.2, 0.1]


def test_syntax_error_has_location():
    """Test that syntax errors report line and column."""
    with pytest.raises(ParseError) as info:
        parse_config("[outer]\nradius 1\n")
    assert info.value.line == 2


def test_expression_error_location():
    """Test that expression errors are located inside the file."""
    with pytest.raises(ParseError) as info:
        parse_config("[inclusion 1]\nradius = 0.5\n\n[interface 1]\ng = cos(theta) + q\n")
    assert info.value.error_code == "UNKNOWN_NAME"
    assert info.value.line == 5
    assert info.value.column == 18


@pytest.mark.parametrize("text,code", [
    ("[inclusion]\nradius = 0.5\n", "PARSE_ERROR"),
    ("[outer 1]\nradius = 1\n", "PARSE_ERROR"),
    ("radius = 1\n", "PARSE_ERROR"),
])
def test_structural_parse_errors(text, code):
    """Test missing and unexpected section indices."""
    with pytest.raises(ParseError) as info:
        parse_config(text)
    assert info.value.error_code == code


@pytest.mark.parametrize("text,code,fragment", [
    ("[mystery]\nx = 1\n", "UNKNOWN_SECTION", "[mystery]"),
    ("[outer]\nradius = 1\nradius = 2\n", "DUPLICATE_KEY", "radius"),
    ("[outer]\n[outer]\n", "DUPLICATE_SECTION", "[outer]"),
    ("[inclusion 1]\nradius = 0.5\n[interface 3]\ng = 1\n", "BAD_REFERENCE", "[interface 3]"),
    ("[inclusion 1]\nradius = 0.5\n[subdomain 4]\na = 1\n", "BAD_REFERENCE", "[subdomain 4]"),
    ("[inclusion 1]\nradius = 0.5\n[interface 1]\ng = 1; 2\n", "ARITY", "[interface 1] g"),
    ("[inclusion 1]\nradius = -0.5\n", "INVALID_VALUE", "[inclusion 1] radius"),
    ("[solver]\norder = 3\n", "INVALID_VALUE", "[solver] order"),
    ("[solver]\ncolour = blue\n", "INVALID_VALUE", "colour"),
    ("[inclusion 1]\nradius = 0.5\n[subdomain 1]\na = 1\na11 = 1\n", "INVALID_VALUE", "[subdomain 1]"),
])
def test_validation_errors_name_the_key(text, code, fragment):
    """Test that semantic errors carry a code and name the offending key."""
    with pytest.raises(ValidationError) as info:
        parse_config(text)
    assert info.value.error_code == code
    assert fragment in str(info.value)


def test_overrides_are_validated():
    """Test command-line overrides."""
    config = parse_config(MS1).with_overrides(kind="probe", h=0.05, levels=6, center=(0.7, 0.1), out=None)
    assert config.campaign.kind == "probe"
    assert config.solver.h == 0.05
    assert config.campaign.probe_levels == 6
    assert config.solver.levels == 2
    assert config.campaign.center == (0.7, 0.1)
    with pytest.raises(ValidationError):
        parse_config(MS1).with_overrides(order=5)


def test_run_settings_take_precedence_over_environment(monkeypatch):
    """Test that the seed and solver settings of a run beat INTERFEM_* variables."""
    monkeypatch.setenv("INTERFEM_SEED", "7")
    monkeypatch.setenv("INTERFEM_LINEAR_SOLVER", "cg")
    monkeypatch.setenv("INTERFEM_TOL_LIN", "1e-3")
    text = MS1.replace("seed = 7", "seed = 99")
    text = text.replace("levels = 2", "levels = 2\nlinear_solver = direct\ntol_lin = 1e-12")
    config = parse_config(text)
    with solver_settings(config) as settings:
        assert settings.seed == 99
        assert settings.linear_solver == "direct"
        assert settings.tol_lin == 1e-12
        assert get_config() is settings
    assert get_config().seed == 7
    assert get_config().linear_solver == "cg"


def test_problem_adapter_builds_problem():
    """Test geometry, coefficients and the exact solution built from a config."""
    adapter = ProblemAdapter(parse_config(MS1))
    problem = adapter.adapt_problem()
    assert problem.partition.subdomain_count == 2
    points = np.array([[0.5, 0.0], [0.0, 0.5]])
    np.testing.assert_allclose(problem.coeff.interface_at(1, points)[:, 0], [-8.0 / 3.0, 0.0], atol=1e-12)
    ms = adapter.adapt_exact(problem)
    assert ms.check_continuity() < 1e-12
    assert ms.check_jump() < 1e-12


def test_problem_adapter_box_and_anisotropic():
    """Test box domains and anisotropic tensors."""
    text = """\
[outer]
shape = box
xmin = -1
xmax = 1
ymin = -0.5
ymax = 0.5

[inclusion 1]
shape = ellipse
radius = 0.4
semi_minor = 0.2

[subdomain 1]
a11 = 2
a12 = 0
a21 = 0
a22 = 1 + x^2
"""
    adapter = ProblemAdapter(parse_config(text))
    partition = adapter.adapt_partition()
    assert isinstance(partition.outer, BoxDomain)
    tensor = adapter.adapt_coefficients().tensor_at(1, np.array([[0.1, 0.0]]))
    assert tensor[0, 0, 0, 0, 0] == pytest.approx(2.0)
    assert tensor[0, 0, 1, 0, 1] == pytest.approx(1.01)
    assert adapter.adapt_exact() is None


def test_mesh_info_campaign(tmp_path, no_self_test):
    """Test the mesh-info campaign artifacts."""
    config = parse_config(MS1).with_overrides(kind="mesh-info")
    result = run_campaign(config, out=tmp_path)
    assert sorted(result.artifacts) == ["mesh", "mesh_stats"]
    mesh = read_mesh(result.artifacts["mesh"])
    assert mesh.triangle_count == result.summary["triangles"]
    assert "min_angle" in (tmp_path / "mesh_stats.txt").read_text()


def test_solve_campaign(tmp_path, no_self_test):
    """Test the solve campaign on the harmonic test problem."""
    result = run_campaign(parse_config(MS1), out=tmp_path)
    report = (tmp_path / "report.txt").read_text()
    assert "h1_error" in report
    assert result.summary["h1_error"] < 0.3 * result.summary["h1_norm"]


def test_convergence_campaign_requires_exact(tmp_path, no_self_test):
    """Test that convergence campaigns need exact solutions."""
    text = MS1.split("[exact 1]")[0] + "[campaign]\nkind = convergence\n"
    with pytest.raises(ValidationError):
        run_campaign(parse_config(text), out=tmp_path)


def test_cli_parser():
    """Test the subcommands and their flags."""
    args = build_parser().parse_args(["probe", "run.ini", "--center", "0.7,0.1", "--levels", "6"])
    assert args.command == "probe"
    assert args.center == (0.7, 0.1)
    assert args.levels == 6


def test_cli_missing_file(tmp_path, capsys):
    """Test the I/O exit code and the error line."""
    code = main(["solve", str(tmp_path / "missing.ini")])
    assert code == 5
    assert "error category=io code=" in capsys.readouterr().err


def test_cli_parse_and_validation_codes(tmp_path, capsys):
    """Test exit codes of parse and validation failures."""
    bad_syntax = tmp_path / "syntax.ini"
    bad_syntax.write_text("[outer]\nradius 1\n")
    assert main(["solve", str(bad_syntax)]) == 2
    bad_reference = tmp_path / "reference.ini"
    bad_reference.write_text("[inclusion 1]\nradius = 0.5\n[interface 3]\ng = 1\n")
    assert main(["solve", str(bad_reference)]) == 3
    err = capsys.readouterr().err
    assert "category=parse" in err
    assert "code=BAD_REFERENCE" in err


def test_cli_mesh_info(tmp_path, capsys, no_self_test):
    """Test a successful CLI run."""
    config = tmp_path / "ms1.ini"
    config.write_text(MS1)
    assert main(["mesh-info", str(config), "--out", str(tmp_path / "out"), "--h", "0.2"]) == 0
    assert (tmp_path / "out" / "mesh.txt").exists()
    assert "mesh_stats:" in capsys.readouterr().out


if __name__ == "__main__":
    pytest.main([__file__])
