"""
Basic tests for interfem

This file contains basic tests to verify the package structure, imports and
configuration handling.
"""

import logging

import pytest

import interfem
from interfem import (
    DomainPartition,
    InterfaceCurve,
    SolverConfig,
    TransmissionProblem,
    get_config,
    reset_config,
    set_config,
    solve_by_reduction,
)
from interfem.src.exceptions import (
    IncompatibleData,
    InterfemError,
    NoConvergence,
    ParseError,
    SerializationError,
    ValidationError,
    exit_code_for,
)
from interfem.src.utils import (
    RetryHandler,
    csv_text,
    format_exact,
    key_value_text,
    log_timing,
    read_text,
    run_blocking_concurrent,
    setup_logging,
)


def test_imports():
    """Test that main classes can be imported."""
    assert DomainPartition is not None
    assert InterfaceCurve is not None
    assert TransmissionProblem is not None
    assert solve_by_reduction is not None
    assert interfem.__version__ == "0.1.0"


def test_solver_config_defaults():
    """Test SolverConfig defaults."""
    config = SolverConfig()
    assert config.tol_lin == 1e-10
    assert config.linear_solver == "cg"
    assert config.quadrature_degree(1) == config.volume_quadrature_p1
    assert config.quadrature_degree(2) == config.volume_quadrature_p2


def test_config_environment_override(monkeypatch):
    """Test that INTERFEM_* variables override the defaults."""
    monkeypatch.setenv("INTERFEM_TOL_LIN", "1e-8")
    monkeypatch.setenv("INTERFEM_SEED", "7")
    config = SolverConfig()
    assert config.tol_lin == 1e-8
    assert config.seed == 7


def test_global_config_singleton():
    """Test get_config / set_config / reset_config."""
    first = get_config()
    assert get_config() is first
    custom = SolverConfig(tol_lin=1e-6)
    set_config(custom)
    assert get_config().tol_lin == 1e-6
    reset_config()
    assert get_config() is not custom


def test_config_file_roundtrip(tmp_path):
    """Test saving and loading a configuration file."""
    path = tmp_path / "solver.json"
    SolverConfig(curve_panels=64).save_to_file(str(path))
    assert SolverConfig.load_from_file(str(path)).curve_panels == 64


def test_error_formatting():
    """Test the bracketed error code in messages."""
    error = ValidationError("bad value", error_code="INVALID_VALUE")
    assert str(error) == "[INVALID_VALUE] bad value"
    assert isinstance(error, InterfemError)


def test_exit_codes():
    """Test the exception to exit code mapping."""
    assert exit_code_for(ParseError("x")) == 2
    assert exit_code_for(ValidationError("x")) == 3
    assert exit_code_for(NoConvergence("x")) == 4
    assert exit_code_for(IncompatibleData("x")) == 4
    assert exit_code_for(SerializationError("x")) == 5
    assert exit_code_for(OSError("x")) == 5
    assert exit_code_for(RuntimeError("x")) == 1


def test_retry_handler_passes_attempt():
    """Test that the handler retries and forwards the attempt number."""
    seen = []

    def flaky(attempt):
        seen.append(attempt)
        if attempt < 2:
            raise ValueError("not yet")
        return attempt

    assert RetryHandler(max_retries=3).execute(flaky, exceptions=ValueError, pass_attempt=True) == 2
    assert seen == [0, 1, 2]
    with pytest.raises(ValueError):
        RetryHandler(max_retries=1).execute(flaky, exceptions=ValueError, pass_attempt=True)


def test_setup_logging_replaces_handlers():
    """Test that repeated setup leaves one stderr handler at the requested level."""
    package_logger = logging.getLogger("interfem")
    setup_logging("INFO")
    setup_logging("DEBUG", "%(levelname)s:%(message)s")
    try:
        assert package_logger.level == logging.DEBUG
        assert len(package_logger.handlers) == 1
        assert package_logger.handlers[0].formatter._fmt == "%(levelname)s:%(message)s"
        assert logging.getLogger("lark").level == logging.WARNING
    finally:
        for handler in package_logger.handlers[:]:
            package_logger.removeHandler(handler)
        package_logger.setLevel(logging.NOTSET)


def test_log_timing_reports_failures(caplog):
    """Test that a timed stage logs its duration and its failure."""

    @log_timing("demo stage")
    def stage(fail):
        if fail:
            raise RuntimeError("boom")
        return 3

    with caplog.at_level(logging.DEBUG):
        assert stage(False) == 3
        with pytest.raises(RuntimeError):
            stage(True)
    assert "demo stage took" in caplog.text
    assert "demo stage failed: boom" in caplog.text


def test_blocking_calls_keep_order():
    """Test that threaded execution returns results in call order."""
    calls = [lambda k=k: k * k for k in range(6)]
    assert run_blocking_concurrent(calls, max_concurrent=3) == [0, 1, 4, 9, 16, 25]
    assert run_blocking_concurrent(calls[:1]) == [0]


def test_report_text(tmp_path):
    """Test key-value reports with CSV blocks and exact float formatting."""
    text = key_value_text({"method": "direct", "dofs": 12}, {"norms": csv_text(["tag", "l2"], [(1, 0.5)])})
    assert text.startswith("method: direct\ndofs: 12\n")
    assert "[norms]\ntag,l2\n1,5.000000000000e-01" in text
    assert float(format_exact(0.1)) == 0.1
    with pytest.raises(SerializationError):
        read_text(tmp_path / "missing.txt")


if __name__ == "__main__":
    pytest.main([__file__])
