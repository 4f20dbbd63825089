"""Truncated Fock-space operators in the sigma_x eigenbasis.

Basis ordering is spin-major: the first ``n_max + 1`` entries are
``|n, up>`` (sigma_x = +1) for n = 0..n_max, followed by ``|n, down>``.
In this basis the splitting and Stark terms are diagonal and every coupling
is real, so all operators are real symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import CommutatorViolation
from .model import ModelParams, validate

__all__ = [
    "OperatorMatrix",
    "Truncation",
    "annihilation",
    "hamiltonian",
    "parity",
    "sector_split",
    "sector_bands",
    "basis_index",
    "SPIN_MAJOR",
]

SPIN_MAJOR = "sigma_x-major(up,down) x fock-minor"


@dataclass(frozen=True)
class Truncation:
    """Largest retained Fock occupation."""

    n_max: int

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max}")

    @property
    def size(self) -> int:
        return self.n_max + 1


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense real square matrix with a description of its basis ordering."""

    entries: np.ndarray
    basis_tag: str = SPIN_MAJOR

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def is_symmetric(self) -> bool:
        M = self.entries
        scale = max(float(np.abs(M).max(initial=0.0)), 1e-300)
        return float(np.abs(M - M.T).max(initial=0.0)) <= 1e-13 * scale


def basis_index(n: int, spin: int, trunc: Truncation) -> int:
    """Position of ``|n, spin>`` (spin = +1 for up, -1 for down) in the full basis."""
    return n if spin > 0 else trunc.size + n


def annihilation(trunc: Truncation) -> OperatorMatrix:
    """Boson lowering operator on the Fock space alone (no spin factor)."""
    n = np.arange(1, trunc.size)
    a = np.zeros((trunc.size, trunc.size))
    a[n - 1, n] = np.sqrt(n)
    return OperatorMatrix(a, basis_tag="fock")


def hamiltonian(params: ModelParams, trunc: Truncation) -> OperatorMatrix:
    """Dense Hamiltonian matrix in the spin-major sigma_x x Fock basis."""
    p = validate(params)
    N = trunc.size
    n = np.arange(N, dtype=float)
    w = p.omega
    H = np.zeros((2 * N, 2 * N))
    idx = np.arange(N)
    H[idx, idx] = n * w + (0.5 * p.Omega + p.chi * w * n)
    H[N + idx, N + idx] = n * w - (0.5 * p.Omega + p.chi * w * n)
    amp = p.g * np.sqrt(n[:-1] + 1.0)
    # rotating terms: <n,up| H |n+1,down>
    H[idx[:-1], N + idx[1:]] = amp
    H[N + idx[1:], idx[:-1]] = amp
    # counter-rotating terms: <n+1,up| H |n,down>
    H[idx[1:], N + idx[:-1]] = p.lam * amp
    H[N + idx[:-1], idx[1:]] = p.lam * amp
    return OperatorMatrix(H)


def parity(trunc: Truncation) -> OperatorMatrix:
    """Parity ``sigma_x (-1)^n`` as a diagonal matrix in the full basis."""
    sign = (-1.0) ** np.arange(trunc.size)
    return OperatorMatrix(np.diag(np.concatenate([sign, -sign])))


def sector_split(H: OperatorMatrix, P: OperatorMatrix):
    """Split ``H`` into its even and odd parity blocks.

    Each block is ordered by Fock index, which makes it tridiagonal for the
    model Hamiltonian.

    Returns
    -------
    H_even, H_odd : OperatorMatrix
    index_maps : dict
        ``{+1: indices, -1: indices}`` locating block rows in the full basis.

    Raises
    ------
    CommutatorViolation
        If ``max|HP - PH| > 1e-12 max|H|``.
    """
    M, Pm = H.entries, P.entries
    comm = np.abs(M @ Pm - Pm @ M).max(initial=0.0)
    scale = np.abs(M).max(initial=0.0)
    if comm > 1e-12 * scale:
        raise CommutatorViolation(f"max|HP - PH| = {comm:.3e} exceeds 1e-12 * {scale:.3e}")
    d = np.rint(np.diag(Pm)).astype(int)
    N = H.dim // 2
    # interleave by Fock index so each block comes out tridiagonal
    order = np.arange(H.dim).reshape(2, N).T.ravel()
    maps = {}
    blocks = {}
    for sector in (1, -1):
        sel = order[d[order] == sector]
        maps[sector] = sel
        blocks[sector] = OperatorMatrix(M[np.ix_(sel, sel)], basis_tag=f"parity {sector:+d}, fock-ordered")
    return blocks[1], blocks[-1], maps


def sector_bands(params: ModelParams, trunc: Truncation, sector: int):
    """Tridiagonal representation of one parity block.

    Within the block of parity ``sector`` the Fock index fixes the spin,
    ``s_n = sector * (-1)**n``, and only neighbouring occupations couple.

    Returns
    -------
    diag : ndarray, shape (n_max + 1,)
    off : ndarray, shape (n_max,)
    spins : ndarray of +-1, shape (n_max + 1,)
    """
    p = validate(params)
    n = np.arange(trunc.size, dtype=float)
    spins = sector * (-1.0) ** np.arange(trunc.size)
    diag = n * p.omega + spins * (0.5 * p.Omega + p.chi * p.omega * n)
    off = p.g * np.sqrt(n[:-1] + 1.0) * np.where(spins[:-1] > 0, 1.0, p.lam)
    return diag, off, spins
