import numpy as np
import pytest

from projsel import matroid as mt
from projsel.harness import fr_counterexample, nonuniform_counterexample
from projsel.selectors import Instance

R2 = np.sqrt(2) / 2
S1 = np.array([R2, R2, 0, 0])
S2 = np.array([0, R2, R2, 0])
S3 = np.array([0, 0, R2, R2])
ETA = np.array([1.0, 2.0, 2.0, 1.0])


@pytest.fixture
def fr_example():
    return fr_counterexample()


@pytest.fixture
def nu_example():
    return nonuniform_counterexample(0.1)


def random_unit_rows(rng, n, dim):
    X = rng.normal(size=(n, dim))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def random_orthonormal_instance(rng, dim, n, matroid):
    Q, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    eta = rng.normal(size=dim)
    return Instance(Q.T[:n], eta / np.linalg.norm(eta), matroid)


_ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""
    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number!s:>3}: {title}"
        if detail:
            line += f" ({detail})"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
