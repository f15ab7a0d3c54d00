import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from faultygrover.density import SymmetricDensity
from faultygrover.reduced_state import SearchSpace

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def record_criterion():
    """Record one acceptance line; the summary is printed at the end of the run."""

    def record(name: str, passed: bool, detail: str = "") -> None:
        ACCEPTANCE_RESULTS.append((name, bool(passed), detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")


def random_density(space: SearchSpace, rng: np.random.Generator, branches: int = 4) -> SymmetricDensity:
    """A valid symmetric density built as a random mixture of reduced pure states."""
    w = rng.random(branches)
    w /= w.sum()
    amps = rng.normal(size=(branches, 3))
    scale = np.array([space.n_unmarked, space.n_nonfaulty, 1.0])
    amps /= np.sqrt((amps**2 * scale).sum(axis=1))[:, None]
    x, y, z = amps.T
    return SymmetricDensity(
        float(w @ (y * y)), float(w @ (y * z)), float(w @ (z * z)),
        float(w @ (x * y)), float(w @ (x * z)), float(w @ (x * x)),
    )
