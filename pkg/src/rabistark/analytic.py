"""Closed-form results: JC-Stark spectrum, semiclassical theory, boundaries, scaling.

Couplings passed to and returned by the boundary functions are in units of
``g_s = sqrt(omega Omega) / 2``. Two reduced couplings appear throughout:

* ``gbar_lambda = g (1 + |lambda|) / (2 g_s)``, the coupling relative to the
  linear-model critical point, and
* ``gbar_s = g / g_s``.

Several low-frequency expressions share the function

    F(gb, chi) = -(gb^2 + chi)/chi^2 + (gb/chi^2) sqrt((gb^2 + 2 chi)/(1 - chi^2)),

which is a removable 0/0 at ``chi = 0``; below ``|chi| < 1e-4`` a second
order series in ``chi`` is used instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .exceptions import DomainError
from .model import ModelParams, derived_scales, validate

__all__ = [
    "JCStarkLevel", "JCGround", "NOptimal", "VariationalMinima", "BoundarySet",
    "QuadruplePoint", "ScalingLaws",
    "jc_level", "jc_ground_energy", "jc_crossing_coupling", "n_optimal", "n_crossing",
    "variational_energy", "variational_minima", "semiclassical_energy_a",
    "golden_section_minimize",
    "g_c", "g_zeta1", "g_zeta2", "g_sx", "g_jc", "g_T1", "g_T1E",
    "lambda_c", "chi_c", "lambda_zeta1", "lambda_zeta2", "lambda_sx", "chi_sx",
    "lambda_T1", "chi_T1", "lambda_T1E", "chi_T1E",
    "boundaries", "quadruple_point_fixed_chi", "quadruple_point_fixed_lambda",
    "scaling_F", "scaling_sx", "scaling_laws", "local_expansion", "dg_reduced",
    "gbar_lambda",
]

_SERIES_CHI = 1e-4


# ------------------------------------------------------------------ helpers

def _sqrt(v: float, what: str) -> float:
    if v < 0:
        raise DomainError(f"{what}: negative radicand {v:.6g}")
    return math.sqrt(v)


def gbar_lambda(g_over_gs: float, lam: float) -> float:
    """``g (1 + |lambda|) / (2 g_s)`` from ``g / g_s``."""
    return g_over_gs * (1.0 + abs(lam)) / 2.0


def scaling_F(gb: float, chi: float) -> float:
    """Low-frequency displacement function shared by the x^2 and photon-number laws."""
    if abs(chi) >= 1:
        raise DomainError("|chi| must be below 1")
    if gb == 0:
        return -math.inf if chi == 0 else -1.0 / chi
    if abs(chi) < _SERIES_CHI:
        g2 = gb * gb
        g4 = g2 * g2
        if g4 * g2 == 0:
            return -math.inf
        return ((g4 - 1.0) / (2.0 * g2) + chi * (g4 + 1.0) / (2.0 * g4)
                + chi * chi * (3.0 * g4 * g4 - 2.0 * g4 - 5.0) / (8.0 * g4 * g2))
    rad = (gb * gb + 2.0 * chi) / (1.0 - chi * chi)
    return -(gb * gb + chi) / chi ** 2 + gb / chi ** 2 * _sqrt(rad, "scaling_F")


def scaling_sx(gb: float, chi: float) -> float:
    """Post-transition ``<sigma_x>`` as a function of ``gbar_lambda``."""
    if abs(chi) >= 1:
        raise DomainError("|chi| must be below 1")
    if abs(chi) < _SERIES_CHI:
        g2 = gb * gb
        g4 = g2 * g2
        if g4 * g2 == 0:
            return -math.inf
        return (-1.0 / g2 - chi * (g4 - 3.0) / (2.0 * g4)
                + chi * chi * (g4 - 5.0) / (2.0 * g4 * g2))
    rad = (1.0 - chi * chi) / (2.0 * chi + gb * gb)
    return (-1.0 + gb * _sqrt(rad, "scaling_sx")) / chi


# ------------------------------------------------------------------ JC-Stark

@dataclass(frozen=True)
class JCStarkLevel:
    """Two-level block spanned by ``|n, up>`` and ``|n+1, down>``."""

    n: int
    E_minus: float
    E_plus: float
    C_up: float
    C_down: float
    e_plus: float
    e_minus: float


def jc_level(params: ModelParams, n: int) -> JCStarkLevel:
    """Exact block ``n`` of the rotating-wave (``lambda = 0``) model.

    ``E_pm = e_+ +- sqrt(e_-^2 + (n+1) g^2)`` with
    ``e_+ = (n + (1-chi)/2) omega`` and ``e_- = (Omega - omega)/2 + (n + 1/2) chi omega``.
    ``(C_up, C_down)`` is the normalized lower-branch eigenvector.
    """
    p = validate(params)
    if n < 0:
        raise ValueError("n must be non-negative")
    w = p.omega
    ep = (n + 0.5 * (1.0 - p.chi)) * w
    em = 0.5 * (p.Omega - w) + (n + 0.5) * p.chi * w
    c2 = (n + 1.0) * p.g * p.g
    R = math.sqrt(em * em + c2)
    cd = p.g * math.sqrt(n + 1.0)
    # lower branch: (e_- - R) on |n,up>, g sqrt(n+1) on |n+1,down>, written without cancellation
    cu = -c2 / (em + R) if em > 0 else em - R
    norm = math.hypot(cu, cd)
    if norm == 0:
        cu, cd = (0.0, 1.0)
    else:
        cu, cd = cu / norm, cd / norm
    return JCStarkLevel(n=n, E_minus=ep - R, E_plus=ep + R, C_up=cu, C_down=cd,
                        e_plus=ep, e_minus=em)


def _jc_lower(p: ModelParams, n: np.ndarray) -> np.ndarray:
    w = p.omega
    ep = (n + 0.5 * (1.0 - p.chi)) * w
    em = 0.5 * (p.Omega - w) + (n + 0.5) * p.chi * w
    return ep - np.sqrt(em * em + (n + 1.0) * p.g * p.g)


class JCGround(NamedTuple):
    E_GS: float
    n_star: Optional[int]


def jc_ground_energy(params: ModelParams, n_cap: int | None = None) -> JCGround:
    """Lowest rotating-wave energy: ``min(-Omega/2, min_n E_-(n))``.

    ``n_star`` is None when the undisplaced state ``|0, down>`` wins.
    Without ``n_cap`` the search window starts from the optimal photon number
    plus a ``10 sqrt(n)`` margin and widens until the minimum is interior.
    """
    p = validate(params)
    E0 = -0.5 * p.Omega
    if n_cap is None:
        try:
            est = max(n_optimal(p).n_min, 0.0)
        except DomainError:
            est = 0.0
        if not math.isfinite(est):
            est = 0.0
        cap = max(64, int(math.ceil(est + 10.0 * math.sqrt(est + 1.0))))
        while True:
            E = _jc_lower(p, np.arange(cap + 1, dtype=float))
            i = int(np.argmin(E))
            if i < cap or cap > 1 << 24:
                break
            cap *= 2
    else:
        E = _jc_lower(p, np.arange(int(n_cap) + 1, dtype=float))
        i = int(np.argmin(E))
    if E[i] < E0:
        return JCGround(float(E[i]), i)
    return JCGround(E0, None)


def jc_crossing_coupling(params: ModelParams, n: int) -> float:
    """Coupling (units of ``g_s``) where ``E_-(n) = E_-(n+1)``, found by root bracketing.

    ``n = -1`` denotes the crossing of ``-Omega/2`` with ``E_-(0)``.
    """
    from scipy.optimize import brentq

    p = validate(params)
    gs = derived_scales(p).g_s

    def diff(x):
        q = p.with_(g=x * gs)
        lo = -0.5 * p.Omega if n < 0 else _jc_lower(q, np.array([float(n)]))[0]
        return float(_jc_lower(q, np.array([float(n + 1)]))[0] - lo)

    hi = 1.0
    while diff(hi) > 0:
        hi *= 2.0
        if hi > 1e6:
            raise DomainError("no crossing found")
    return brentq(diff, 0.0, hi, xtol=1e-14, rtol=1e-14)


class NOptimal(NamedTuple):
    n_min: float
    n_min_low: float


def n_optimal(params: ModelParams) -> NOptimal:
    """Optimal photon number of the rotating-wave ground state.

    ``n_min`` is the finite-frequency stationary point of ``E_-(n)`` treated
    as continuous in ``n``; ``n_min_low`` is its low-frequency limit in units
    of ``n_s``:

        n/n_s = -(gs^2 + 4 chi)/(2 chi^2) + gs/(2 chi^2) sqrt((gs^2 + 8 chi)/(1 - chi^2)),

    with ``gs = g / g_s``. ``n_min`` is NaN at ``chi = 0`` exactly.

    Raises
    ------
    DomainError
        If a square-root argument is negative or the low-frequency value is
        negative (no displaced solution before the transition).
    """
    p = validate(params)
    chi, w, W = p.chi, p.omega, p.Omega
    gbs = p.g_over_gs
    if abs(chi) >= 1:
        raise DomainError("|chi| must be below 1")
    if gbs * gbs + 8.0 * chi < 0:
        raise DomainError("pre-transition regime: no displaced solution")
    low = 2.0 * scaling_F(0.5 * gbs, chi)
    if low < 0:
        raise DomainError("pre-transition regime: no displaced solution")
    if chi == 0:
        return NOptimal(math.nan, low)
    chi1 = chi * (1.0 - (1.0 + chi) * w / W)
    rad = (gbs * gbs + 8.0 * chi1) / (1.0 - chi * chi)
    n_min = ((1.0 - chi) / (2.0 * chi) - (gbs * gbs + 4.0 * chi) * W / (8.0 * chi * chi * w)
             + gbs * W / (8.0 * chi * chi * w) * _sqrt(rad, "n_min"))
    return NOptimal(n_min, low)


def n_crossing(params: ModelParams) -> float:
    """Photon number at the level crossing nearest to the optimum (real-valued).

    Same structure as ``n_min`` with the extra radicand term
    ``d = 16 chi^2 (1 - chi^2) omega^2 / (gs^2 Omega^2)``.
    """
    p = validate(params)
    chi, w, W = p.chi, p.omega, p.Omega
    if chi == 0 or abs(chi) >= 1:
        raise DomainError("requires 0 < |chi| < 1")
    gbs = p.g_over_gs
    if gbs == 0:
        raise DomainError("requires g > 0")
    chi1 = chi * (1.0 - (1.0 + chi) * w / W)
    d = 16.0 * chi * chi * (1.0 - chi * chi) * w * w / (gbs * gbs * W * W)
    rad = (gbs * gbs + 8.0 * chi1 + d) / (1.0 - chi * chi)
    return ((1.0 - 2.0 * chi) / (2.0 * chi) - (gbs * gbs + 4.0 * chi) * W / (8.0 * chi * chi * w)
            + gbs * W / (8.0 * chi * chi * w) * _sqrt(rad, "n_j"))


# ------------------------------------------------------------------ semiclassical

def _gp(p: ModelParams) -> float:
    sc = derived_scales(p)
    return sc.gp_z if p.lam >= 0 else sc.gp_y


def variational_energy(x, params: ModelParams):
    """Lower semiclassical energy branch at displacement ``x``.

    ``eps(x) = (omega/2)(x^2 + g'^2) - (omega/2) sqrt(4 g'^2 x^2 + (chi x^2 + Omega/omega)^2) - g'^2 omega / 2``
    with ``g' = g'_z`` for ``lambda >= 0`` and ``g'_y`` otherwise.
    """
    p = validate(params)
    w, gp = p.omega, _gp(p)
    x = np.asarray(x, dtype=float)
    u = p.Omega / w
    val = 0.5 * w * (x * x + gp * gp) - 0.5 * w * np.sqrt(
        4.0 * gp * gp * x * x + (p.chi * x * x + u) ** 2) - 0.5 * gp * gp * w
    return float(val) if val.ndim == 0 else val


def semiclassical_energy_a(params: ModelParams, gp: float | None = None) -> float:
    """Closed-form energy of the displaced semiclassical minimum.

    Parameters
    ----------
    params : ModelParams
    gp : float, optional
        Displacement coupling ``g'``; defaults to the one selected by ``lambda``.

    Raises
    ------
    DomainError
        If ``g'^2 + chi Omega/omega < 0``, ``|chi| >= 1``, or (near ``chi = 0``)
        there is no displaced minimum.
    """
    p = validate(params)
    w, chi = p.omega, p.chi
    gp = _gp(p) if gp is None else gp
    if abs(chi) >= 1:
        raise DomainError("closed form requires |chi| < 1")
    if abs(chi) < _SERIES_CHI:
        # the closed form is 0/0 here; evaluate eps(x) at the series minimum
        x_s = derived_scales(p).x_s
        xa2 = 2.0 * x_s ** 2 * scaling_F(gp / x_s, chi)
        if not xa2 > 0:
            raise DomainError("no displaced minimum")
        u = p.Omega / w
        return float(0.5 * w * xa2 - 0.5 * w * math.sqrt(4.0 * gp * gp * xa2 + (chi * xa2 + u) ** 2))
    root = _sqrt((gp * gp + chi * p.Omega / w) / (1.0 - chi * chi), "E_SC^A")
    return (-0.5 * gp * gp * w - (gp * gp * (2.0 - chi * chi) * w + chi * p.Omega) / (2.0 * chi * chi)
            + gp * (1.0 - chi * chi) * w / (chi * chi) * root)


class VariationalMinima(NamedTuple):
    x_B: float
    x_A: Optional[float]
    E_SC_A: Optional[float]
    E_SC_B: float


def variational_minima(params: ModelParams) -> VariationalMinima:
    """Stationary points of :func:`variational_energy`.

    ``x_A`` (reported as ``|x_A|``) and its energy exist only when the
    squared displacement ``2 x_s^2 F(g'/x_s, chi)`` is positive.
    """
    p = validate(params)
    sc = derived_scales(p)
    gp = _gp(p)
    E_B = -0.5 * p.Omega
    if abs(p.chi) >= 1:
        return VariationalMinima(0.0, None, None, E_B)
    try:
        xa2 = 2.0 * sc.x_s ** 2 * scaling_F(gp / sc.x_s, p.chi)
    except DomainError:
        return VariationalMinima(0.0, None, None, E_B)
    if not xa2 > 0:
        return VariationalMinima(0.0, None, None, E_B)
    xa = math.sqrt(xa2)
    try:
        E_A = semiclassical_energy_a(p, gp)
    except DomainError:
        E_A = variational_energy(xa, p)
    return VariationalMinima(0.0, xa, E_A, E_B)


def golden_section_minimize(f, a: float, b: float, tol: float = 1e-12, max_iter: int = 500):
    """Minimize a unimodal scalar function on ``[a, b]``; returns ``(x, f(x))``.

    Bracketing alone only locates a smooth minimum to about ``sqrt(eps)``, so
    the result is polished by Newton steps on central differences while they
    stay inside the difference stencil.
    """
    from scipy.optimize import minimize_scalar

    r = minimize_scalar(f, bracket=None, bounds=(a, b), method="bounded",
                        options={"xatol": tol, "maxiter": max_iter})
    x, fx = float(r.x), float(r.fun)
    h = 2e-3 * max(1.0, abs(x))
    if x - 2.0 * h > a and x + 2.0 * h < b:
        for _ in range(4):
            f2m, fm, fp, f2p = (float(f(x + k * h)) for k in (-2.0, -1.0, 1.0, 2.0))
            slope = (f2m - 8.0 * fm + 8.0 * fp - f2p) / (12.0 * h)
            curv = (-f2m + 16.0 * fm - 30.0 * fx + 16.0 * fp - f2p) / (12.0 * h * h)
            if not curv > 0:
                break
            step = slope / curv
            if abs(step) > h:
                break
            x -= step
            fx = float(f(x))
    return x, fx


# ------------------------------------------------------------------ boundaries

def _lam_factor(lam: float) -> float:
    return 2.0 / (1.0 + abs(lam))


def g_c(lam: float, chi: float) -> float:
    """Critical coupling ``2 sqrt(1 - chi) / (1 + |lambda|)``."""
    return _lam_factor(lam) * _sqrt(1.0 - chi, "g_c")


def g_zeta1(lam: float, chi: float) -> float:
    """First adiabatic boundary (``chi > 0``)."""
    if chi <= 0:
        raise DomainError("defined for chi > 0")
    return _lam_factor(lam) * math.sqrt(2.0 * (1.0 - chi * chi) / (chi * (3.0 + chi * chi)))


def g_zeta2(lam: float, chi: float) -> float:
    """Second adiabatic boundary (``chi < 0``)."""
    if chi >= 0:
        raise DomainError("defined for chi < 0")
    return _lam_factor(lam) * math.sqrt(-2.0 / chi)


def g_sx(lam: float, chi: float) -> float:
    """Vanishing-``<sigma_x>`` boundary (``chi < 0``); equals :func:`g_zeta2`."""
    if chi >= 0:
        raise DomainError("defined for chi < 0")
    return math.sqrt(-2.0 / chi) * 2.0 / (abs(lam) + 1.0)


def g_jc(chi: float) -> float:
    """First rotating-wave level crossing ``2 sqrt(1 - chi)``."""
    return 2.0 * _sqrt(1.0 - chi, "g_jc")


def g_T1(lam: float, chi: float) -> float:
    """Polaron estimate of the first conventional topological transition."""
    L = abs(lam)
    rad = (1.0 + L) * ((2.0 + chi) - L * (2.0 - chi))
    if rad <= 0:
        raise DomainError("g_T1 radicand not positive")
    return 2.0 * math.sqrt(2.0) / math.sqrt(rad)


def g_T1E(lam: float, chi: float) -> float:
    """Exact first level crossing ``2 sqrt(1-chi^2) / sqrt((1+chi) - lambda^2 (1-chi))``."""
    rad = (1.0 + chi) - lam * lam * (1.0 - chi)
    if rad <= 0 or 1.0 - chi * chi < 0:
        raise DomainError("g_T1E radicand not positive")
    return 2.0 * math.sqrt(1.0 - chi * chi) / math.sqrt(rad)


def lambda_c(g: float, chi: float) -> float:
    return 2.0 * _sqrt(1.0 - chi, "lambda_c") / g - 1.0


def chi_c(g: float, lam: float) -> float:
    return 1.0 - (1.0 + abs(lam)) ** 2 * g * g / 4.0


def lambda_zeta1(g: float, chi: float) -> float:
    if chi <= 0:
        raise DomainError("defined for chi > 0")
    return -1.0 + 2.0 * math.sqrt(2.0 * (1.0 - chi * chi) / (chi * (3.0 + chi * chi))) / g


def lambda_zeta2(g: float, chi: float) -> float:
    if chi >= 0:
        raise DomainError("defined for chi < 0")
    return -1.0 + 2.0 * math.sqrt(-2.0 / chi) / g


def lambda_sx(g: float, chi: float) -> float:
    return lambda_zeta2(g, chi)


def chi_sx(g: float, lam: float) -> float:
    return -8.0 / ((abs(lam) + 1.0) ** 2 * g * g)


def lambda_T1(g: float, chi: float) -> float:
    """Inverse of :func:`g_T1` in ``|lambda|``.

    The direct form is quadratic in ``|lambda|``; this is the upper root, so
    it inverts ``g_T1`` on ``|lambda| >= chi / (2 - chi)``.
    """
    return (2.0 * _sqrt(1.0 - 2.0 * (2.0 - chi) / (g * g), "lambda_T1") + chi) / (2.0 - chi)


def chi_T1(g: float, lam: float) -> float:
    return 2.0 * (4.0 - (1.0 - lam * lam) * g * g) / ((1.0 + abs(lam)) ** 2 * g * g)


def lambda_T1E(g: float, chi: float) -> float:
    return _sqrt((1.0 + chi) * (1.0 / (1.0 - chi) - 4.0 / (g * g)), "lambda_T1E")


def chi_T1E(g: float, lam: float) -> float:
    a = (1.0 + lam * lam) * g * g / 8.0
    return -a + _sqrt((1.0 + a) ** 2 - g * g / 2.0, "chi_T1E")


@dataclass(frozen=True)
class BoundarySet:
    """Boundary couplings in units of ``g_s``; None where a boundary does not exist."""

    g_c: Optional[float] = None
    g_zeta1: Optional[float] = None
    g_zeta2: Optional[float] = None
    g_sx: Optional[float] = None
    g_jc: Optional[float] = None
    g_T1: Optional[float] = None
    g_T1E: Optional[float] = None


def _maybe(f, *args):
    try:
        v = f(*args)
    except (DomainError, ZeroDivisionError, ValueError):
        return None
    return v if (math.isfinite(v) and v > 0) else None


def boundaries(params: ModelParams) -> BoundarySet:
    """Every analytic boundary at the parameters' ``(lambda, chi)``; ``g`` is ignored."""
    p = validate(params)
    lam, chi = p.lam, p.chi
    return BoundarySet(
        g_c=_maybe(g_c, lam, chi),
        g_zeta1=_maybe(g_zeta1, lam, chi) if chi > 0 else None,
        g_zeta2=_maybe(g_zeta2, lam, chi) if chi < 0 else None,
        g_sx=_maybe(g_sx, lam, chi) if chi < 0 else None,
        g_jc=_maybe(g_jc, chi),
        g_T1=_maybe(g_T1, lam, chi),
        g_T1E=_maybe(g_T1E, lam, chi),
    )


@dataclass(frozen=True)
class QuadruplePoint:
    g_TQ: float
    lambda_TQ: Optional[float] = None
    chi_TQ: Optional[float] = None


def quadruple_point_fixed_chi(chi: float) -> QuadruplePoint:
    """Meeting point of the first conventional and unconventional boundaries at fixed ``chi < 0``."""
    if not -1.0 <= chi < 0:
        raise DomainError("fixed-chi quadruple point needs -1 <= chi < 0")
    return QuadruplePoint(g_TQ=math.sqrt(2.0) * (1.0 - chi) / math.sqrt(-chi),
                          lambda_TQ=(1.0 + chi) / (1.0 - chi))


def quadruple_point_fixed_lambda(lam: float) -> QuadruplePoint:
    """Quadruple point at fixed ``|lambda| < 1``."""
    if not abs(lam) < 1:
        raise DomainError("fixed-lambda quadruple point needs |lambda| < 1")
    L = abs(lam)
    return QuadruplePoint(g_TQ=2.0 * math.sqrt(2.0) / math.sqrt(1.0 - lam * lam),
                          chi_TQ=-(1.0 - L) / (1.0 + L))


# ------------------------------------------------------------------ scaling

class ScalingLaws(NamedTuple):
    """Low-frequency scaling predictions at one ``(gbar_lambda, chi)``.

    x2_scaled      ``<x^2> / (2 x_s^2)`` for ``lambda != 0`` (full weight in x)
    sx             ``<sigma_x>``
    x2_jc          ``<x^2> / x_s^2`` at ``lambda = 0`` (half weight)
    x2p2_unified   ``(<x^2> + <p^2>) / x_s^2``, any ``lambda``
    sx_global_lhs  ``(chi <sigma_x> + 1)^2 / (1 - chi^2)`` evaluated with ``sx``
    sx_global_rhs  ``1 / (2 chi / gbar^2 + 1)``
    """

    x2_scaled: float
    sx: float
    x2_jc: float
    x2p2_unified: float
    sx_global_lhs: float
    sx_global_rhs: float


def scaling_laws(gb: float, chi: float) -> ScalingLaws:
    """Evaluate the scaling relations; constants before the transition.

    Raises
    ------
    DomainError
        For ``|chi| > 1`` (and at ``|chi| = 1`` where the laws are singular).
    """
    if abs(chi) >= 1:
        raise DomainError("|chi| must be below 1")
    rhs = 1.0 / (2.0 * chi / (gb * gb) + 1.0) if gb != 0 else 0.0
    if gb * gb <= 1.0 - chi:
        sx = -1.0
        return ScalingLaws(0.0, sx, 0.0, 0.0, (1.0 - chi) ** 2 / (1.0 - chi * chi), rhs)
    F = max(scaling_F(gb, chi), 0.0)
    sx = scaling_sx(gb, chi)
    lhs = (chi * sx + 1.0) ** 2 / (1.0 - chi * chi)
    return ScalingLaws(F, sx, F, 2.0 * F, lhs, rhs)


def dg_reduced(g_over_gc: float, chi: float) -> float:
    """``(1 - chi)/(1 + chi) (g/g_c - 1)``."""
    return (1.0 - chi) / (1.0 + chi) * (g_over_gc - 1.0)


def local_expansion(dg: float):
    """Second-order expansions around the transition.

    Returns ``((1 - chi) <x^2> / (2 x_s^2), <sigma_x>) = (2 dg - dg^2, -1 + 2 dg - 3 dg^2)``.
    """
    return 2.0 * dg - dg * dg, -1.0 + 2.0 * dg - 3.0 * dg * dg
