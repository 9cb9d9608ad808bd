"""Shared fixtures plus the acceptance-criteria summary printer."""

import numpy as np
import pytest

_ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def record_criterion(name: str, passed: bool, detail: str):
    """Log an acceptance-criterion outcome; printed in the terminal summary."""
    _ACCEPTANCE_RESULTS.append((name, passed, detail))
    assert passed, f"{name}: {detail}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, passed, detail in _ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status}  {name}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_complex(rng, shape, scale=None):
    scale = np.sqrt(0.5) if scale is None else scale
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * scale
