import numpy as np
import pytest

from pauliapprox import BlochVector


def sample_ball(rng, n):
    d = rng.standard_normal((n, 3))
    d /= np.linalg.norm(d, axis=1)[:, None]
    return d * np.cbrt(rng.random(n))[:, None]


def canonical_uv(r):
    """(a, u, v) of the canonical image of a Bloch vector, computed directly."""
    return 0.5 * (1.0 - abs(r[2])), 0.5 * abs(r[0]), 0.5 * abs(r[1])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def ball_points(rng):
    return sample_ball(rng, 2000)


def as_bloch(p):
    return BlochVector(*map(float, p))


_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(number, ok, detail)."""
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        _CRITERIA.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA):
            terminalreporter.write_line(line)
