"""Ground-state expectation values and the per-point analysis record."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

import numpy as np

from .eigensolve import DEFAULT_TOL, ground_solve, excitation_gap
from .exceptions import ImpureParity
from .fock import OperatorMatrix, Truncation, annihilation
from .model import ModelParams, derived_scales, validate
from .wavefunction import (
    EnergyParts,
    count_nodes,
    energy_decomposition,
    momentum_representation,
    position_representation,
    zeta_ratio,
)

__all__ = [
    "GroundStateAnalysis",
    "quadrature_operators",
    "parity_value",
    "analyze",
    "DEGENERACY_TOL",
    "RECORD_FIELDS",
]

DEGENERACY_TOL = 1e-9


@dataclass
class GroundStateAnalysis:
    """All observables of one parity-pure ground state.

    ``mean_x2`` and ``mean_p2`` are the quadrature moments of the returned
    state; ``zeta`` and ``n_Z`` come from its x-space wavefunction, or from
    the p-space one when ``lambda < 0``. ``E_even`` and ``E_odd`` are the
    lowest energies of each parity block.
    """

    E0: float
    gap: float
    parity: int
    n_Z: int
    mean_n: float
    mean_x2: float
    mean_p2: float
    mean_sx: float
    mean_aa: float
    zeta: float
    energy_parts: EnergyParts
    params: ModelParams
    n_max_used: int
    degenerate: bool = False
    parity_expectation: float = 0.0
    E_even: float = math.nan
    E_odd: float = math.nan
    meta: dict = field(default_factory=dict)

    def as_row(self) -> dict:
        """Flat mapping of every scalar field, in :data:`RECORD_FIELDS` order."""
        row = {name: getattr(self, name) for name in
               ("E0", "gap", "parity", "n_Z", "mean_n", "mean_x2", "mean_p2",
                "mean_sx", "mean_aa", "zeta")}
        row.update(self.energy_parts._asdict())
        row.update(n_max_used=self.n_max_used, degenerate=int(self.degenerate),
                   parity_expectation=self.parity_expectation,
                   E_even=self.E_even, E_odd=self.E_odd)
        row.update({"omega": self.params.omega, "Omega": self.params.Omega, "g": self.params.g,
                    "g_over_gs": self.params.g_over_gs, "lambda": self.params.lam,
                    "chi": self.params.chi})
        return row


RECORD_FIELDS = (
    "E0", "gap", "parity", "n_Z", "mean_n", "mean_x2", "mean_p2", "mean_sx", "mean_aa", "zeta",
    *EnergyParts._fields,
    "n_max_used", "degenerate", "parity_expectation", "E_even", "E_odd",
    "omega", "Omega", "g", "g_over_gs", "lambda", "chi",
)


def _spin_identity(M: np.ndarray) -> OperatorMatrix:
    return OperatorMatrix(np.kron(np.eye(2), M))


def quadrature_operators(trunc: Truncation):
    """``x^2``, ``p^2`` and ``a^dagger a^dagger`` on the full spin x Fock space.

    Note that ``x^2`` and ``p^2`` are built from the truncated ladder
    operators, so the identity ``X2 + P2 = 2n + 1`` holds exactly.
    """
    a = annihilation(trunc).entries
    ad = a.T
    aa, adad = a @ a, ad @ ad
    num = ad @ a
    one = np.eye(trunc.size)
    X2 = 0.5 * (adad + aa + 2.0 * num + one)
    P2 = -0.5 * (adad + aa - 2.0 * num - one)
    return _spin_identity(X2), _spin_identity(P2), _spin_identity(adad)


def parity_value(state, P) -> int:
    """Round ``<P>`` to +-1.

    ``P`` may be an :class:`OperatorMatrix` or the diagonal of a diagonal
    parity operator.

    Raises
    ------
    ImpureParity
        If ``|<P>| < 1 - 1e-8``.
    """
    v = np.asarray(state)
    if isinstance(P, OperatorMatrix):
        ev = float(np.real(np.vdot(v, P.entries @ v)))
    else:
        ev = float(np.real(np.vdot(v, np.asarray(P) * v)))
    if abs(ev) < 1.0 - 1e-8:
        raise ImpureParity(f"<P> = {ev:.3e} is not +-1")
    return 1 if ev > 0 else -1


def _parity_diagonal(trunc: Truncation) -> np.ndarray:
    sign = (-1.0) ** np.arange(trunc.size)
    return np.concatenate([sign, -sign])


def analyze(params: ModelParams, tol: float = DEFAULT_TOL, *, wavefunction: bool = True,
            n_cap: int | None = None) -> GroundStateAnalysis:
    """Solve for the ground state and compute every observable.

    The ground state is taken from the parity block with the lower energy;
    when both blocks agree within ``1e-9`` the even state is used and
    ``degenerate`` is set.

    Parameters
    ----------
    params : ModelParams
    tol : float
        Energy convergence tolerance passed to the solver.
    wavefunction : bool
        When False, skip ``n_Z``, ``zeta`` and the energy parts (left NaN / -1).
    n_cap : int, optional
        Truncation ceiling override.

    Raises
    ------
    TruncationCeiling
        From the solver.
    """
    p = validate(params)
    kw = {} if n_cap is None else {"n_cap": n_cap}
    res = ground_solve(p, tol=tol, k=2, **kw)
    trunc = Truncation(res.n_max_used)
    even, odd = res.sectors[1], res.sectors[-1]
    E_even, E_odd = float(even.energies[0]), float(odd.energies[0])
    degenerate = abs(E_even - E_odd) < DEGENERACY_TOL
    sol = even if (degenerate or E_even < E_odd) else odd
    v, s = sol.vectors[:, 0], sol.spins
    n = np.arange(v.size)
    mean_n = float(np.dot(v * v, n))
    mean_sx = float(np.dot(v * v, s))
    # a^dagger a^dagger links n and n+2, which sit in the same spin
    mean_aa = float(np.dot(v[2:], v[:-2] * np.sqrt((n[:-2] + 1.0) * (n[:-2] + 2.0))))
    mean_x2 = mean_n + 0.5 + mean_aa
    mean_p2 = mean_n + 0.5 - mean_aa

    full = np.zeros(2 * trunc.size)
    full[n[s > 0]] = v[s > 0]
    full[trunc.size + n[s < 0]] = v[s < 0]
    Pd = _parity_diagonal(trunc)
    p_exp = float(np.dot(full * full, Pd))
    par = parity_value(full, Pd)

    E0 = float(res.energies[0])
    n_Z, zeta = -1, math.nan
    parts = EnergyParts(*([math.nan] * len(EnergyParts._fields)))
    if wavefunction:
        sc = derived_scales(p)
        if p.lam >= 0:
            wf = position_representation(full, trunc, displacement=sc.gp_z)
            dual = p
        else:
            wf = momentum_representation(full, trunc, displacement=sc.gp_y)
            dual = p.with_(lam=-p.lam)
        n_Z = count_nodes(wf, "plus").n_Z
        zeta = zeta_ratio(wf, p) if p.g > 0 else math.nan
        parts = energy_decomposition(wf, dual, E0=E0)

    return GroundStateAnalysis(
        E0=E0,
        gap=excitation_gap(res),
        parity=par,
        n_Z=n_Z,
        mean_n=mean_n,
        mean_x2=mean_x2,
        mean_p2=mean_p2,
        mean_sx=mean_sx,
        mean_aa=mean_aa,
        zeta=zeta,
        energy_parts=parts,
        params=p,
        n_max_used=res.n_max_used,
        degenerate=degenerate,
        parity_expectation=p_exp,
        E_even=E_even,
        E_odd=E_odd,
    )
