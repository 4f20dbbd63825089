"""Eigen-decomposition with automatic Fock truncation.

The Hamiltonian conserves parity, and inside each parity block the Fock
index determines the spin, so each block is a symmetric tridiagonal matrix.
``ground_solve`` works block by block with a tridiagonal eigensolver and
grows the truncation along a doubling schedule until the low-lying energies
and the photon distribution are converged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh, eigh_tridiagonal

from .exceptions import ConvergenceFailure, TruncationCeiling
from .fock import OperatorMatrix, Truncation, sector_bands
from .model import ModelParams, validate

__all__ = [
    "SpectralResult",
    "SectorSolution",
    "eigendecompose",
    "solve_sectors",
    "ground_solve",
    "excitation_gap",
    "DEFAULT_TOL",
    "DEFAULT_CAP",
    "SCHEDULE_START",
]

DEFAULT_TOL = 1e-10
DEFAULT_CAP = 4096
SCHEDULE_START = 32


@dataclass
class SectorSolution:
    """Lowest eigenpairs of one parity block in its own Fock-ordered basis."""

    parity: int
    energies: np.ndarray
    vectors: np.ndarray  # columns, indexed by Fock number
    spins: np.ndarray
    residual: float

    def mean_n(self, i: int = 0) -> float:
        v = self.vectors[:, i]
        return float(np.dot(v * v, np.arange(v.size)))


@dataclass
class SpectralResult:
    """Low-lying spectrum of a truncated Hamiltonian.

    Attributes
    ----------
    energies : ndarray
        Ascending eigenvalues.
    states : ndarray
        Orthonormal eigenvectors as columns, in the spin-major full basis.
    n_max_used : int or None
        Truncation the result was computed at.
    converged : bool
    residual : float
        ``max ||H v - E v||`` over the retained states.
    parities : ndarray or None
        Parity label of each retained state when it is known.
    sectors : dict
        Per-parity :class:`SectorSolution` when solved block-wise.
    """

    energies: np.ndarray
    states: np.ndarray
    n_max_used: int | None
    converged: bool
    residual: float
    parities: np.ndarray | None = None
    sectors: dict = field(default_factory=dict)
    history: list = field(default_factory=list)

    @property
    def E0(self) -> float:
        return float(self.energies[0])


def _residual_bound(E0: float) -> float:
    return 1e-9 * max(1.0, abs(E0))


def eigendecompose(M: OperatorMatrix | np.ndarray, k: int) -> SpectralResult:
    """Lowest ``k`` eigenpairs of a dense symmetric matrix.

    Raises
    ------
    ConvergenceFailure
        If any residual ``||M v - E v||`` exceeds ``1e-9 max(1, |E0|)``.
    """
    A = M.entries if isinstance(M, OperatorMatrix) else np.asarray(M, dtype=float)
    dim = A.shape[0]
    k = int(min(max(k, 1), dim))
    E, V = eigh(A, subset_by_index=[0, k - 1])
    res = float(np.linalg.norm(A @ V - V * E, axis=0).max())
    if res > _residual_bound(E[0]):
        raise ConvergenceFailure(f"residual {res:.3e} above bound")
    n_max = dim // 2 - 1 if isinstance(M, OperatorMatrix) and M.basis_tag.startswith("sigma_x") else None
    return SpectralResult(energies=E, states=V, n_max_used=n_max, converged=True, residual=res)


def _tridiag_matvec(d, e, V):
    out = d[:, None] * V
    out[:-1] += e[:, None] * V[1:]
    out[1:] += e[:, None] * V[:-1]
    return out


def solve_sectors(params: ModelParams, trunc: Truncation, k: int = 2) -> dict:
    """Lowest ``k`` eigenpairs of both parity blocks.

    Returns
    -------
    dict
        ``{+1: SectorSolution, -1: SectorSolution}``
    """
    out = {}
    for sector in (1, -1):
        d, e, s = sector_bands(params, trunc, sector)
        kk = min(k, d.size)
        E, V = eigh_tridiagonal(d, e, select="i", select_range=(0, kk - 1))
        if kk > 1 and np.abs(V.T @ V - np.eye(kk)).max() > 1e-11:
            # inverse iteration can lose orthogonality on clusters; MRRR does not
            E, V = eigh_tridiagonal(d, e, select="i", select_range=(0, kk - 1),
                                    lapack_driver="stemr")
        res = float(np.linalg.norm(_tridiag_matvec(d, e, V) - V * E, axis=0).max())
        out[sector] = SectorSolution(sector, E, V, s, res)
    return out


def _embed(sol: SectorSolution, i: int, trunc: Truncation) -> np.ndarray:
    N = trunc.size
    v = np.zeros(2 * N)
    n = np.arange(N)
    up = sol.spins > 0
    v[n[up]] = sol.vectors[up, i]
    v[N + n[~up]] = sol.vectors[~up, i]
    return v


def _assemble(sectors: dict, trunc: Truncation, k: int, converged: bool) -> SpectralResult:
    items = []
    for sector, sol in sectors.items():
        for i, E in enumerate(sol.energies):
            # even parity first on exact ties, so ordering is reproducible
            items.append((float(E), -sector, sector, i))
    items.sort()
    items = items[:k]
    energies = np.array([it[0] for it in items])
    states = np.column_stack([_embed(sectors[it[2]], it[3], trunc) for it in items])
    parities = np.array([it[2] for it in items])
    residual = max(sol.residual for sol in sectors.values())
    return SpectralResult(energies=energies, states=states, n_max_used=trunc.n_max,
                          converged=converged, residual=residual, parities=parities,
                          sectors=sectors)


def _schedule(start: int, cap: int):
    n = start
    while True:
        yield n
        if n >= cap:
            return
        n = min(2 * n, cap)


def ground_solve(params: ModelParams, tol: float = DEFAULT_TOL, k: int = 2,
                 n_cap: int = DEFAULT_CAP, n_start: int = SCHEDULE_START) -> SpectralResult:
    """Converged low-lying spectrum with automatic truncation.

    The truncation doubles from ``n_start`` until both the ``k`` lowest
    energies change by less than ``tol`` relative to the previous truncation
    and every retained state satisfies ``<n> + 6 sqrt(<n> + 1) < n_max``.
    The first step is compared against a truncation half as large.

    Parameters
    ----------
    params : ModelParams
    tol : float
        Energy tolerance in the units of ``params``.
    k : int
        Number of lowest states returned (merged over both parities).
    n_cap : int
        Hard ceiling on ``n_max``.

    Raises
    ------
    TruncationCeiling
        If convergence would need ``n_max > n_cap``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    p = validate(params)
    k = max(int(k), 1)
    prev = None
    history = []
    for n_max in _schedule(min(n_start, n_cap), n_cap):
        trunc = Truncation(n_max)
        sectors = solve_sectors(p, trunc, k)
        current = np.sort(np.concatenate([s.energies for s in sectors.values()]))[:k]
        if prev is None:
            half = Truncation(max(n_max // 2, 1))
            prev = np.sort(np.concatenate(
                [s.energies for s in solve_sectors(p, half, k).values()]))[:k]
        history.append((n_max, float(current[0])))
        m = min(prev.size, current.size)
        de = float(np.abs(current[:m] - prev[:m]).max())
        res = _assemble(sectors, trunc, k, converged=False)
        mean_n = [sectors[par].mean_n(i) for par, i in _state_labels(res, sectors)]
        tail_ok = all(mn + 6.0 * math.sqrt(mn + 1.0) < n_max for mn in mean_n)
        if de < tol and tail_ok:
            res.converged = True
            res.history = history
            if res.residual > _residual_bound(res.E0):
                raise ConvergenceFailure(f"residual {res.residual:.3e} above bound")
            return res
        prev = current
    raise TruncationCeiling(
        f"no convergence up to n_max={n_cap} (last |dE|={de:.3e}, <n>={max(mean_n):.1f})")


def _state_labels(res: SpectralResult, sectors: dict):
    counts = {1: 0, -1: 0}
    out = []
    for par in res.parities:
        out.append((int(par), counts[int(par)]))
        counts[int(par)] += 1
    return out


def excitation_gap(result: SpectralResult) -> float:
    """First excitation gap ``E1 - E0`` (clipped at zero)."""
    if len(result.energies) < 2:
        raise ValueError("need at least two states for a gap")
    return max(float(result.energies[1] - result.energies[0]), 0.0)
