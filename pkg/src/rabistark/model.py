"""Physical parameters of the anisotropic Rabi-Stark model and derived scales.

Energies are measured in units where the qubit splitting ``Omega`` is the
natural scale (``Omega = 1`` by default). Couplings enter the Hamiltonian in
raw energy units; helpers convert from the dimensionless ``g / g_s`` used on
every axis of the phase diagrams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .exceptions import ChiOutOfRange, NonPositiveFrequency, ParameterError

__all__ = [
    "ModelParams",
    "DerivedScales",
    "validate",
    "derived_scales",
    "coupling_scale",
]


@dataclass(frozen=True)
class ModelParams:
    """Five physical parameters of the model.

    Parameters
    ----------
    omega : float
        Boson frequency.
    Omega : float
        Qubit level splitting.
    g : float
        Linear coupling strength (energy units).
    lam : float
        Anisotropy, ratio of counter-rotating to rotating coupling.
    chi : float
        Nonlinear Stark coupling ratio, physical for ``|chi| <= 1``.
    """

    omega: float
    Omega: float = 1.0
    g: float = 0.0
    lam: float = 0.0
    chi: float = 0.0

    @classmethod
    def from_scaled(cls, omega: float, g_over_gs: float, lam: float = 0.0,
                    chi: float = 0.0, Omega: float = 1.0) -> "ModelParams":
        """Build parameters from ``omega / Omega`` and ``g / g_s``."""
        w = omega * Omega
        return cls(omega=w, Omega=Omega, g=g_over_gs * coupling_scale(w, Omega),
                   lam=lam, chi=chi)

    def with_(self, **changes) -> "ModelParams":
        """Copy with some fields replaced."""
        return replace(self, **changes)

    @property
    def g_over_gs(self) -> float:
        return self.g / coupling_scale(self.omega, self.Omega)

    def as_dict(self) -> dict:
        return {"omega": self.omega, "Omega": self.Omega, "g": self.g,
                "lambda": self.lam, "chi": self.chi}


@dataclass(frozen=True)
class DerivedScales:
    """Characteristic scales derived from a parameter set."""

    g_s: float
    x_s: float
    n_s: float
    g_z: float
    g_y: float
    gp_z: float
    gp_y: float


def coupling_scale(omega: float, Omega: float = 1.0) -> float:
    """Characteristic coupling ``g_s = sqrt(omega * Omega) / 2``."""
    return 0.5 * math.sqrt(omega * Omega)


def validate(params: ModelParams) -> ModelParams:
    """Check the physical invariants and normalize the sign of ``g``.

    A negative coupling is unitarily equivalent to a positive one (flip the
    sign of the boson operators), so it is mapped to ``|g|``.

    Raises
    ------
    NonPositiveFrequency
        If ``omega <= 0`` or ``Omega <= 0``.
    ChiOutOfRange
        If ``|chi| > 1``.
    """
    for name in ("omega", "Omega", "g", "lam", "chi"):
        if not math.isfinite(getattr(params, name)):
            raise ParameterError(f"{name} must be finite")
    if params.omega <= 0 or params.Omega <= 0:
        raise NonPositiveFrequency(
            f"omega and Omega must be positive, got {params.omega}, {params.Omega}")
    if abs(params.chi) > 1:
        raise ChiOutOfRange(f"|chi| must not exceed 1, got {params.chi}")
    if params.g < 0:
        return replace(params, g=-params.g)
    return params


def derived_scales(params: ModelParams) -> DerivedScales:
    """Characteristic coupling, length and photon number plus split couplings."""
    w, W = params.omega, params.Omega
    g_s = coupling_scale(w, W)
    x_s = math.sqrt(W / (2.0 * w))
    g_z = 0.5 * (1.0 + params.lam) * params.g
    g_y = 0.5 * (1.0 - params.lam) * params.g
    return DerivedScales(
        g_s=g_s,
        x_s=x_s,
        n_s=W / (4.0 * w),
        g_z=g_z,
        g_y=g_y,
        gp_z=math.sqrt(2.0) * g_z / w,
        gp_y=math.sqrt(2.0) * g_y / w,
    )
