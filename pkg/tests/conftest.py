import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_sampled(rng, size=None, ties=False):
    from isosym import SampledFunction

    n = int(size or rng.integers(1, 65))
    if ties:
        values = rng.integers(-4, 5, n).astype(float)
    else:
        values = rng.standard_normal(n)
    grads = rng.exponential(size=n)
    w = rng.random(n) + 0.05
    return SampledFunction.normalized(values, grads, w)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def report_criterion(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
