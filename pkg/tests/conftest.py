import numpy as np
import pytest

from robustsel.mest import Dataset


def make_dataset(n=60, p=3, seed=0, sigma=1.0, beta=None, heavy=False):
    """Seeded synthetic regression dataset with an intercept column."""
    rng = np.random.default_rng(seed)
    if heavy:
        Z = rng.standard_t(3, size=(n, p))
    else:
        Z = rng.normal(size=(n, p))
    X = np.column_stack([np.ones(n), Z])
    if beta is None:
        beta = np.ones(p + 1)
    y = X @ np.asarray(beta, dtype=float) + sigma * rng.normal(size=n)
    return Dataset(X, y)


@pytest.fixture
def dataset():
    return make_dataset()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    lines = {}
    for outcome in ("passed", "failed", "skipped", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            if not name.startswith("test_criterion_"):
                continue
            num = name.split("_")[2]
            label = {"passed": "PASS", "failed": "FAIL",
                     "skipped": "SKIP", "error": "FAIL"}[outcome]
            lines[int(num)] = (label, name)
    if lines:
        terminalreporter.section("acceptance criteria")
        for num in sorted(lines):
            label, name = lines[num]
            terminalreporter.write_line(f"ACCEPTANCE {num}: {label} ({name})")
