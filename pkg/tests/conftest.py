import numpy as np
import pytest

from adkey import adqkd, cli


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope='session')
def fig2_scenario():
    return cli.load_scenario(cli.shipped_scenario_path('fig2_f0684'))


@pytest.fixture(scope='session')
def fig2_sweep(fig2_scenario):
    """Blocklength sweep n = 1..200 of the shipped F = 0.684 scenario at bins = 4096."""
    import time
    t0 = time.perf_counter()
    verdict = adqkd.asymptotic_verdict(fig2_scenario)
    reports = [adqkd.block_entropy_bounds(fig2_scenario, n, bins=4096, with_upper=False, verdict=verdict)
               for n in range(1, 201)]
    return reports, time.perf_counter() - t0


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section('acceptance criteria')
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(':'))):
            terminalreporter.write_line(line)
