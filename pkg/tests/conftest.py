import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

P1_EX = np.array([[9.0, 3.0], [3.0, 4.0]])
P2_EX = np.array([[4.0, -3.0], [-3.0, 9.0]])


def random_spd(rng, n, cond=100.0):
    """SPD matrix with eigenvalues log-uniform in [1, cond], random orientation."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    w = np.exp(rng.uniform(0.0, np.log(cond), size=n))
    A = (Q * w) @ Q.T
    return 0.5 * (A + A.T)


@pytest.fixture
def P1():
    return P1_EX.copy()


@pytest.fixture
def P2():
    return P2_EX.copy()


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
