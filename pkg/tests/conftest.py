from pathlib import Path

import numpy as np
import pytest

from comma.instances import GeneratorConfig, generate_instance, load_instance, read_json

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def crossing():
    return load_instance(read_json(FIXTURES / "crossing.json"))


def small_instance(seed: int, n_range=(10, 200), k_range=(2, 20)):
    """Random instance whose radius ranges from hopeless to comfortable.

    Measurements are perturbed by a fixed 0.6 while ``r`` is drawn
    log-uniformly from [0.05, 3], so both answers occur often.
    """
    rng = np.random.default_rng(10_000 + seed)
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    k = int(rng.integers(k_range[0], k_range[1] + 1))
    r = float(np.exp(rng.uniform(np.log(0.05), np.log(3.0))))
    return generate_instance(GeneratorConfig(n=n, k=k, r=r, seed=seed, rho=0.6))


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line; all lines are printed in the terminal summary."""
    lines = request.config._acceptance_lines

    def record(criterion: str, ok: bool, detail: str):
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
