import numpy as np
import pytest

from rabistark.eigensolve import ground_solve
from rabistark.fock import Truncation
from rabistark.model import ModelParams


def scaled(omega, g, lam=0.0, chi=0.0):
    """Parameters with omega in units of Omega and g in units of g_s."""
    return ModelParams.from_scaled(omega, g, lam, chi)


def ground_vector(params, sector=None):
    """Full-basis ground state of one parity block (lowest block by default)."""
    res = ground_solve(params)
    trunc = Truncation(res.n_max_used)
    if sector is None:
        sector = int(res.parities[0])
    sol = res.sectors[sector]
    v = np.zeros(2 * trunc.size)
    n = np.arange(trunc.size)
    up = sol.spins > 0
    v[n[up]] = sol.vectors[up, 0]
    v[trunc.size + n[~up]] = sol.vectors[~up, 0]
    return v, trunc, float(sol.energies[0]), sector


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# ---------------------------------------------------------------- acceptance report

_ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(number, ok, detail)``."""

    def record(number, ok, detail):
        line = f"CRITERION {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[k])
