import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rabistark.exceptions import CommutatorViolation
from rabistark.fock import (OperatorMatrix, Truncation, annihilation, basis_index, hamiltonian,
                            parity, sector_bands, sector_split)
from rabistark.model import ModelParams


def test_annihilation_small():
    a = annihilation(Truncation(2)).entries
    expected = np.zeros((3, 3))
    expected[0, 1] = 1.0
    expected[1, 2] = np.sqrt(2.0)
    assert np.array_equal(a, expected)
    assert np.count_nonzero(annihilation(Truncation(1)).entries) == 1


def test_number_operator():
    a = annihilation(Truncation(7)).entries
    assert np.allclose(a.T @ a, np.diag(np.arange(8.0)), atol=1e-14)


def test_truncation_rejects_zero():
    with pytest.raises(ValueError):
        Truncation(0)


def test_decoupled_spectrum():
    t = Truncation(6)
    H = hamiltonian(ModelParams(omega=0.3, g=0.0, chi=0.0), t)
    n = np.arange(7)
    expected = np.sort(np.concatenate([n * 0.3 + 0.5, n * 0.3 - 0.5]))
    assert np.allclose(np.linalg.eigvalsh(H.entries), expected, atol=1e-13)


def test_decoupled_spectrum_with_stark_term():
    t = Truncation(6)
    w, chi = 0.3, -0.45
    H = hamiltonian(ModelParams(omega=w, g=0.0, chi=chi), t)
    n = np.arange(7)
    expected = np.sort(np.concatenate([n * w + (0.5 + chi * w * n), n * w - (0.5 + chi * w * n)]))
    assert np.allclose(np.linalg.eigvalsh(H.entries), expected, atol=1e-13)


def test_two_level_blocks_of_rotating_model():
    # eigenvalues of the n = 0 and n = 1 blocks for omega=0.3, g=0.17, chi=0.25
    jc = [-0.31065038697843583563, 0.53565038697843583563,
          -0.10875449638348444658, 0.93375449638348444658]
    H = hamiltonian(ModelParams(omega=0.3, g=0.17, lam=0.0, chi=0.25), Truncation(2))
    ev = np.linalg.eigvalsh(H.entries)
    for e in jc:
        assert np.min(np.abs(ev - e)) < 1e-14
    # the uncoupled states |0,down> and the truncated |2,up>
    assert np.min(np.abs(ev + 0.5)) < 1e-14
    assert np.min(np.abs(ev - (0.6 + 0.5 + 0.25 * 0.3 * 2))) < 1e-14


def test_parity_entries():
    t = Truncation(4)
    P = parity(t).entries
    assert P[basis_index(0, -1, t), basis_index(0, -1, t)] == -1
    assert P[basis_index(1, -1, t), basis_index(1, -1, t)] == 1
    assert np.allclose(P @ P, np.eye(10))


@pytest.mark.parametrize("n_max", [1, 2, 5, 10])
def test_parity_trace(n_max):
    # direct sum over s and n of s (-1)^n
    total = sum(s * (-1) ** n for s in (1, -1) for n in range(n_max + 1))
    assert np.trace(parity(Truncation(n_max)).entries) == total == 0


def test_sector_content_at_zero_coupling():
    t = Truncation(5)
    H = hamiltonian(ModelParams(omega=0.5), t)
    _, _, maps = sector_split(H, parity(t))
    even = set(maps[1].tolist())
    assert even == {basis_index(n, 1, t) for n in (0, 2, 4)} | {basis_index(n, -1, t) for n in (1, 3, 5)}


def test_sector_spectra_merge_to_full():
    t = Truncation(20)
    H = hamiltonian(ModelParams(omega=0.4, g=0.9, lam=0.6, chi=-0.3), t)
    He, Ho, maps = sector_split(H, parity(t))
    assert He.dim + Ho.dim == 2 * 21
    merged = np.sort(np.concatenate([np.linalg.eigvalsh(He.entries), np.linalg.eigvalsh(Ho.entries)]))
    assert np.abs(merged - np.linalg.eigvalsh(H.entries)).max() <= 1e-10


def test_sector_bands_match_dense_blocks():
    p = ModelParams(omega=0.4, g=0.9, lam=0.6, chi=-0.3)
    t = Truncation(15)
    He, Ho, _ = sector_split(hamiltonian(p, t), parity(t))
    for block, sector in ((He, 1), (Ho, -1)):
        d, e, _ = sector_bands(p, t, sector)
        T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        assert np.array_equal(T, block.entries)


def test_commutator_violation_detected():
    t = Truncation(3)
    H = hamiltonian(ModelParams(omega=0.5, g=0.3), t).entries.copy()
    H[0, 1] = H[1, 0] = 0.2  # |0,up> - |1,up> breaks parity
    with pytest.raises(CommutatorViolation):
        sector_split(OperatorMatrix(H), parity(t))


params = st.builds(
    ModelParams,
    omega=st.floats(0.01, 2.0), Omega=st.just(1.0), g=st.floats(0.0, 3.0),
    lam=st.floats(-2.5, 2.5), chi=st.floats(-1.0, 1.0),
)


@settings(max_examples=40, deadline=None)
@given(params, st.integers(1, 30))
def test_symmetric_and_commutes(p, n_max):
    t = Truncation(n_max)
    H = hamiltonian(p, t)
    assert H.is_symmetric()
    P = parity(t).entries
    M = H.entries
    assert np.abs(M @ P - P @ M).max() <= 1e-12 * np.abs(M).max()


@settings(max_examples=25, deadline=None)
@given(params)
def test_duality_spectrum(p):
    t = Truncation(24)
    a = np.linalg.eigvalsh(hamiltonian(p, t).entries)
    b = np.linalg.eigvalsh(hamiltonian(p.with_(lam=-p.lam), t).entries)
    assert np.abs(a - b).max() <= 1e-10 * max(1.0, np.abs(a).max())
