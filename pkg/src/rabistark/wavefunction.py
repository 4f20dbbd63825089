"""Position-space wavefunctions, node counting, peak ratio and energy parts.

States arrive as Fock coefficients in the spin-major sigma_x basis. They are
rotated to the sigma_z basis, where each spin component is a real function
of the quadrature ``x``, and synthesized from normalized Hermite functions.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import DegeneratePeak, GridTooSmall, ReconstructionMismatch
from .fock import Truncation
from .model import ModelParams, derived_scales, validate

__all__ = [
    "SamplingGrid",
    "PositionWaveFunction",
    "NodeReport",
    "EnergyParts",
    "hermite_function",
    "hermite_synthesis",
    "auto_grid",
    "position_representation",
    "momentum_representation",
    "duality_transform",
    "count_nodes",
    "zeta_ratio",
    "energy_decomposition",
    "dump",
    "NODE_THRESHOLD",
]

NODE_THRESHOLD = 1e-6
_PI_QUARTER = math.pi ** -0.25
_BIG = 1e100


@dataclass(frozen=True)
class SamplingGrid:
    """Symmetric uniform grid ``[-L, L]`` with step ``dx``."""

    L: float
    dx: float

    def points(self) -> np.ndarray:
        m = int(math.ceil(self.L / self.dx - 1e-9))
        return np.arange(-m, m + 1) * self.dx


@dataclass
class PositionWaveFunction:
    """Real spin-resolved samples ``psi_plus(x)``, ``psi_minus(x)`` (sigma_z = +-1)."""

    grid: np.ndarray
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    dx: float
    phase_fixed: bool = True
    representation: str = "x"

    def norm(self) -> float:
        return float(np.sum(self.psi_plus ** 2 + self.psi_minus ** 2) * self.dx)

    def component(self, name: str) -> np.ndarray:
        if name in ("plus", "+"):
            return self.psi_plus
        if name in ("minus", "-"):
            return self.psi_minus
        raise ValueError(f"unknown component {name!r}")


@dataclass(frozen=True)
class NodeReport:
    n_Z: int
    node_positions: np.ndarray
    threshold_used: float


class EnergyParts(NamedTuple):
    """Ground-state energy split into tunneling, coupling and oscillator parts.

    ``E_Omega``, ``E_gy``, ``E_p2`` and ``E_x2`` already include the factor 2
    from the Hermitian-conjugate partner. ``E_shift`` is the constant Stark
    offset ``-chi*omega/2 <sigma_x>`` left over when ``chi omega n sigma_x``
    is written through ``x^2 + p^2``; ``E_gz`` is the linear ``sigma_z x``
    coupling and ``E_osc`` the bare oscillator energy ``omega <n>``.
    """

    E_Omega: float
    E_gy: float
    E_p2: float
    E_x2: float
    E_shift: float
    E_gz: float
    E_osc: float
    E_reconstructed: float


# ---------------------------------------------------------------- Hermite

def _hermite_iter(n_stop: int, x: np.ndarray):
    """Yield ``(n, phi_n(x))`` for n < n_stop using a rescaled recurrence.

    The value is carried as ``mantissa * exp(logscale)`` so that neither the
    Gaussian factor nor the polynomial growth over/underflows.
    """
    x = np.asarray(x, dtype=float)
    logscale = -0.5 * x * x
    weight = np.exp(logscale)
    cur = np.full_like(x, _PI_QUARTER)
    prev = np.zeros_like(x)
    for n in range(n_stop):
        yield n, cur * weight
        nxt = math.sqrt(2.0 / (n + 1)) * x * cur - math.sqrt(n / (n + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > _BIG
        if big.any():
            cur[big] /= _BIG
            prev[big] /= _BIG
            logscale[big] += math.log(_BIG)
            weight = np.exp(logscale)


def hermite_function(n: int, x):
    """Normalized oscillator eigenfunction ``phi_n(x)``.

    Parameters
    ----------
    n : int
        Quantum number, ``n >= 0``.
    x : float or array_like

    Returns
    -------
    float or ndarray
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    val = None
    for k, val in _hermite_iter(n + 1, xa):
        pass
    return float(val[0]) if np.ndim(x) == 0 else val


def hermite_synthesis(coef: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Evaluate ``sum_n coef[n, j] phi_n(x)`` for every column ``j``."""
    coef = np.asarray(coef, dtype=float)
    if coef.ndim == 1:
        return hermite_synthesis(coef[:, None], x)[:, 0]
    x = np.asarray(x, dtype=float)
    out = np.zeros((x.size, coef.shape[1]))
    mag = np.abs(coef).max(axis=1)
    sig = np.nonzero(mag > 1e-16 * mag.max(initial=0.0))[0]
    if sig.size == 0:
        return out
    for n, phi in _hermite_iter(int(sig[-1]) + 1, x):
        row = coef[n]
        for j in np.nonzero(row)[0]:
            out[:, j] += row[j] * phi
    return out


# ---------------------------------------------------------------- synthesis

def _split(state: np.ndarray, trunc: Truncation):
    state = np.asarray(state)
    N = trunc.size
    if state.shape[0] != 2 * N:
        raise ValueError(f"state has length {state.shape[0]}, expected {2 * N}")
    return state[:N], state[N:]


def _moments(c_up, c_dn):
    n = np.arange(c_up.size)
    w = np.abs(c_up) ** 2 + np.abs(c_dn) ** 2
    mean_n = float(np.dot(w, n))
    aa = 0.0
    for c in (c_up, c_dn):
        aa += float(np.real(np.dot(np.conj(c[2:]), c[:-2] * np.sqrt((n[:-2] + 1) * (n[:-2] + 2)))))
    return mean_n, mean_n + 0.5 + aa, mean_n + 0.5 - aa


def auto_grid(state: np.ndarray, trunc: Truncation, displacement: float = 0.0) -> SamplingGrid:
    """Grid covering a state's support.

    ``L = max(8, d + 6 sqrt(2<n> + 1))`` with ``d`` the larger of the bare
    displacement and ``sqrt(<x^2>)``. The step is at most 0.02, gives at
    least 4096 samples, and resolves the momentum content ``sqrt(2<p^2>)``.
    """
    c_up, c_dn = _split(state, trunc)
    mean_n, x2, p2 = _moments(c_up, c_dn)
    d = max(abs(displacement), math.sqrt(max(x2, 0.0)))
    L = max(8.0, d + 6.0 * math.sqrt(2.0 * mean_n + 1.0))
    p_hi = math.sqrt(2.0 * max(p2, 0.0)) + 5.0
    dx = min(0.02, 2.0 * L / 4095.0, 0.2 / p_hi)
    return SamplingGrid(L=L, dx=dx)


def _sigma_z_coefficients(c_up, c_dn):
    return np.column_stack([(c_up + c_dn) / math.sqrt(2.0), (c_up - c_dn) / math.sqrt(2.0)])


def _check_support(psi: np.ndarray):
    amp = np.abs(psi).max()
    edge = max(abs(psi[0, 0]), abs(psi[-1, 0]), abs(psi[0, 1]), abs(psi[-1, 1]))
    if not amp > 0 or edge >= 1e-10 * amp:
        raise GridTooSmall(f"edge amplitude {edge:.3e} vs max {amp:.3e}")


def position_representation(state, trunc: Truncation, grid: SamplingGrid | None = None,
                            displacement: float = 0.0) -> PositionWaveFunction:
    """Sample the sigma_z spin components of a state on a position grid.

    Parameters
    ----------
    state : ndarray
        Real coefficients in the spin-major sigma_x x Fock basis.
    trunc : Truncation
    grid : SamplingGrid, optional
        Defaults to :func:`auto_grid`.
    displacement : float
        Expected wavepacket displacement, used only by the automatic grid.

    Raises
    ------
    GridTooSmall
        If the wavefunction is not negligible at the grid edges.
    """
    state = np.asarray(state)
    if np.iscomplexobj(state):
        if np.abs(state.imag).max() > 1e-12:
            raise ValueError("position_representation expects real coefficients")
        state = state.real
    c_up, c_dn = _split(state, trunc)
    coef = _sigma_z_coefficients(c_up, c_dn)
    if grid is None:
        # the moment-based width can be tight when the Stark term softens the
        # trap, so the automatic grid widens itself before giving up
        grid = auto_grid(state, trunc, displacement)
        for _ in range(3):
            psi = hermite_synthesis(coef, grid.points())
            try:
                _check_support(psi)
                break
            except GridTooSmall:
                L = 1.25 * grid.L
                grid = SamplingGrid(L=L, dx=min(grid.dx, 2.0 * L / 4095.0))
    x = grid.points()
    psi = hermite_synthesis(coef, x)
    _check_support(psi)
    i = int(np.argmax(np.abs(psi[:, 0])))
    if psi[i, 0] < 0:
        psi = -psi
    return PositionWaveFunction(grid=x, psi_plus=psi[:, 0].copy(), psi_minus=psi[:, 1].copy(),
                                dx=grid.dx, phase_fixed=True)


def duality_transform(state, trunc: Truncation) -> np.ndarray:
    """Map an eigenvector of ``H(lambda)`` to the matching eigenvector of ``H(-lambda)``.

    The unitary is the Fock-space Fourier phase ``i^n`` (x -> p) combined
    with the spin rotation ``diag(e^{i pi/4}, e^{-i pi/4})`` in the sigma_x
    basis. For parity eigenstates the image has a common complex phase,
    which is removed so the result is real.
    """
    c_up, c_dn = _split(np.asarray(state, dtype=complex), trunc)
    phase = 1j ** (np.arange(trunc.size) % 4)
    out = np.concatenate([c_up * phase * np.exp(0.25j * math.pi),
                          c_dn * phase * np.exp(-0.25j * math.pi)])
    k = int(np.argmax(np.abs(out)))
    out *= np.exp(-1j * np.angle(out[k]))
    if np.abs(out.imag).max() > 1e-10 * np.abs(out).max():
        raise ValueError("state is not a parity eigenstate; dual image is not real")
    return out.real


def momentum_representation(state, trunc: Truncation, grid: SamplingGrid | None = None,
                            displacement: float = 0.0) -> PositionWaveFunction:
    """Wavefunction in the ``p`` quadrature.

    Equivalent to the position representation of the dual state, so
    ``<p^2>`` of the input equals the second moment of the returned samples.
    """
    wf = position_representation(duality_transform(state, trunc), trunc, grid, displacement)
    wf.representation = "p"
    return wf


# ---------------------------------------------------------------- analysis

def count_nodes(wf: PositionWaveFunction, component: str = "plus",
                threshold: float = NODE_THRESHOLD) -> NodeReport:
    """Count sign changes of one spin component.

    Samples below ``threshold * max|psi|`` are ignored; a sign change across
    such a run counts once and is placed by linear interpolation between the
    nearest significant samples.
    """
    f = wf.component(component)
    x = wf.grid
    amp = np.abs(f).max()
    idx = np.nonzero(np.abs(f) > threshold * amp)[0]
    if idx.size < 2:
        return NodeReport(0, np.empty(0), threshold)
    s = np.sign(f[idx])
    flips = np.nonzero(s[1:] != s[:-1])[0]
    i0, i1 = idx[flips], idx[flips + 1]
    f0, f1 = f[i0], f[i1]
    pos = x[i0] + (x[i1] - x[i0]) * f0 / (f0 - f1)
    return NodeReport(int(flips.size), pos, threshold)


def _peak_positions(f: np.ndarray, x: np.ndarray):
    a = np.abs(f)
    inner = (a[1:-1] >= a[:-2]) & (a[1:-1] > a[2:])
    idx = np.nonzero(inner)[0] + 1
    if a[0] > a[1]:
        idx = np.concatenate([[0], idx])
    if a[-1] > a[-2]:
        idx = np.concatenate([idx, [a.size - 1]])
    return idx, a


def zeta_ratio(wf: PositionWaveFunction, params: ModelParams) -> float:
    """Main-peak displacement of ``|psi_plus|`` relative to the bare displacement.

    For ``lambda >= 0`` the reference is ``g'_z``; for ``lambda < 0`` the
    caller passes the dual (momentum) wavefunction and the reference is
    ``g'_y``. When two local maxima agree within 1 percent the outer one is
    used. Returns NaN when the reference displacement vanishes.

    Raises
    ------
    DegeneratePeak
        If the selected maximum lies on the grid boundary.
    """
    sc = derived_scales(validate(params))
    ref = sc.gp_z if params.lam >= 0 else sc.gp_y
    x = wf.grid
    idx, a = _peak_positions(wf.psi_plus, x)
    top = a[idx].max()
    close = idx[a[idx] >= 0.99 * top]
    i = int(close[np.argmax(np.abs(x[close]))])
    if i == 0 or i == x.size - 1:
        raise DegeneratePeak(f"maximum of |psi_plus| at grid edge x={x[i]:.3f}")
    y0, y1, y2 = a[i - 1], a[i], a[i + 1]
    den = y0 - 2.0 * y1 + y2
    shift = 0.5 * (y0 - y2) / den if den != 0 else 0.0
    xp = x[i] + shift * wf.dx
    if ref == 0:
        return float("nan")
    return abs(xp) / abs(ref)


def _d1(f, h):
    d = np.zeros_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    return d


def _d2(f, h):
    d = np.zeros_like(f)
    d[2:-2] = (-f[:-4] + 16.0 * f[1:-3] - 30.0 * f[2:-2] + 16.0 * f[3:-1] - f[4:]) / (12.0 * h * h)
    return d


def energy_decomposition(wf: PositionWaveFunction, params: ModelParams,
                         E0: float | None = None, atol: float | None = None) -> EnergyParts:
    """Split the energy of a real position-space eigenstate into its parts.

    In the sigma_z basis the Hamiltonian reads
    ``omega n + sqrt2 g_z sigma_z x + sqrt2 g_y sigma_y p
    + [(Omega - chi omega)/2 + chi omega (x^2 + p^2)/2] sigma_x``.
    Derivatives use fourth-order centered differences.

    Parameters
    ----------
    wf : PositionWaveFunction
    params : ModelParams
    E0 : float, optional
        Eigenvalue to check the reconstruction against.
    atol : float, optional
        Reconstruction tolerance, default ``1e-5 * Omega``.

    Raises
    ------
    ReconstructionMismatch
        If ``E0`` is given and the parts miss it by more than ``atol``.
    """
    p = validate(params)
    sc = derived_scales(p)
    w, x, h = p.omega, wf.grid, wf.dx
    up, dn = wf.psi_plus, wf.psi_minus
    dup, ddn = _d1(up, h), _d1(dn, h)
    overlap = np.sum(up * dn) * h
    E_Omega = p.Omega * overlap
    E_shift = -p.chi * w * overlap
    E_x2 = p.chi * w * np.sum(up * x * x * dn) * h
    E_p2 = -p.chi * w * np.sum(up * _d2(dn, h)) * h
    E_gy = 2.0 * math.sqrt(2.0) * (-sc.g_y) * np.sum(up * ddn) * h
    E_gz = math.sqrt(2.0) * sc.g_z * np.sum(x * (up * up - dn * dn)) * h
    kinetic = 0.5 * w * np.sum(dup * dup + ddn * ddn) * h
    potential = 0.5 * w * np.sum(x * x * (up * up + dn * dn)) * h
    E_osc = kinetic + potential - 0.5 * w
    total = E_Omega + E_shift + E_x2 + E_p2 + E_gy + E_gz + E_osc
    parts = EnergyParts(*(float(v) for v in (E_Omega, E_gy, E_p2, E_x2, E_shift, E_gz, E_osc, total)))
    if E0 is not None:
        tol = 1e-5 * p.Omega if atol is None else atol
        if abs(total - E0) > tol:
            raise ReconstructionMismatch(
                f"parts sum to {total:.10g}, eigenvalue {E0:.10g} (|diff| {abs(total - E0):.2e})")
    return parts


def dump(wf: PositionWaveFunction, params: ModelParams, stream=None, meta: dict | None = None) -> str:
    """Write ``x, psi_plus, psi_minus`` columns with '#' header lines.

    Returns the text; also writes it to ``stream`` (path or file object) when given.
    """
    buf = io.StringIO()
    for k, v in params.as_dict().items():
        buf.write(f"# {k} = {v!r}\n")
    for k, v in (meta or {}).items():
        buf.write(f"# {k} = {v}\n")
    buf.write(f"# representation = {wf.representation}\n")
    buf.write("# x psi_plus psi_minus\n")
    np.savetxt(buf, np.column_stack([wf.grid, wf.psi_plus, wf.psi_minus]), fmt="%.12g")
    text = buf.getvalue()
    if isinstance(stream, (str, bytes)) or hasattr(stream, "__fspath__"):
        with open(stream, "w") as fh:
            fh.write(text)
    elif stream is not None:
        stream.write(text)
    return text
