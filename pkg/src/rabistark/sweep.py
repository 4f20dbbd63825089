"""Parameter-plane sweeps, boundary extraction and scaling-collapse datasets.

Axis values are in the dimensionless units of the phase diagrams: ``g`` in
units of ``g_s``, ``omega`` in units of ``Omega`` (``Omega = 1``).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from . import analytic
from .eigensolve import DEFAULT_TOL
from .exceptions import RabiStarkError
from .model import ModelParams, derived_scales
from .observables import GroundStateAnalysis, analyze

__all__ = [
    "Axis", "GridSpec", "Boundary", "PhaseDiagram", "CollapseDataset",
    "run_sweep", "detect_boundaries", "build_collapse", "polyline_intersections",
    "closest_approach", "BOUNDARY_KINDS", "COLLAPSE_LAWS", "params_at",
]

AXIS_NAMES = ("g", "lambda", "chi", "omega")
BOUNDARY_KINDS = ("gap_min", "parity_flip", "node_jump_with_parity", "node_jump_without_parity",
                  "sx_sign", "zeta_one", "second_order_onset")


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    steps: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"axis must be one of {AXIS_NAMES}, got {self.name!r}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ValueError("an axis needs at least 2 steps")

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, int(self.steps))


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid over two of ``g``, ``lambda``, ``chi``, ``omega``.

    ``fixed`` holds the remaining values in the same units (keys ``omega``,
    ``g``, ``lambda``, ``chi``).
    """

    x_axis: Axis
    y_axis: Axis
    fixed: dict = field(default_factory=dict)
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.x_axis.name == self.y_axis.name:
            raise ValueError("the two axes must name different parameters")
        base = self.base_values()
        missing = [k for k in AXIS_NAMES if k not in base]
        if missing:
            raise ValueError(f"missing fixed values for {missing}")
        # raise early on invalid fixed values
        for ax in (self.x_axis, self.y_axis):
            for v in (ax.min, ax.max):
                params_at({**base, ax.name: v})

    def base_values(self) -> dict:
        d = {"lambda": 0.0, "chi": 0.0, "g": 0.0}
        d.update(self.fixed)
        d.setdefault(self.x_axis.name, self.x_axis.min)
        d.setdefault(self.y_axis.name, self.y_axis.min)
        return d

    @property
    def shape(self):
        return (self.y_axis.steps, self.x_axis.steps)

    def point(self, x: float, y: float) -> ModelParams:
        return params_at({**self.base_values(), self.x_axis.name: x, self.y_axis.name: y})

    def cell_values(self):
        xs, ys = self.x_axis.values(), self.y_axis.values()
        return [(float(x), float(y)) for y in ys for x in xs]


def params_at(values: dict) -> ModelParams:
    """ModelParams from a mapping with ``omega`` (units of Omega) and ``g`` (units of g_s)."""
    from .model import validate

    p = ModelParams.from_scaled(values["omega"], values["g"], values.get("lambda", 0.0),
                                values.get("chi", 0.0), Omega=values.get("Omega", 1.0))
    return validate(p)


@dataclass
class Boundary:
    kind: str
    points: np.ndarray  # shape (m, 2) in (x_axis, y_axis) coordinates


@dataclass
class PhaseDiagram:
    """Grid of analyses, row-major with ``y`` as the slow index."""

    spec: GridSpec
    cells: list
    flags: list
    boundaries: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def cell(self, ix: int, iy: int) -> Optional[GroundStateAnalysis]:
        return self.cells[iy * self.spec.x_axis.steps + ix]

    def field(self, name: str) -> np.ndarray:
        """2-D array (y, x) of one scalar field; NaN for failed cells."""
        vals = [getattr(c, name) if c is not None else math.nan for c in self.cells]
        return np.asarray(vals, dtype=float).reshape(self.spec.shape)

    def boundaries_of(self, kind: str) -> list:
        return [b for b in self.boundaries if b.kind == kind]


# ------------------------------------------------------------------ execution

def _analyze_cell(job):
    params, tol, wf = job
    try:
        return analyze(params, tol, wavefunction=wf), None
    except RabiStarkError as exc:
        return None, f"{type(exc).__name__}: {exc}"


def _pmap(fn: Callable, items: list, parallelism: int) -> list:
    if parallelism <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    chunk = max(1, len(items) // (4 * parallelism))
    with ProcessPoolExecutor(max_workers=parallelism) as ex:
        return list(ex.map(fn, items, chunksize=chunk))


def run_sweep(spec: GridSpec, parallelism: int = 1, wavefunction: bool = True) -> PhaseDiagram:
    """Analyze every grid point.

    Cells that fail (for example on the truncation ceiling) are stored as
    None with a message in ``flags`` instead of aborting the sweep. Output
    order is fixed by cell index, so results do not depend on ``parallelism``.
    """
    jobs = [(spec.point(x, y), spec.tol, wavefunction) for x, y in spec.cell_values()]
    out = _pmap(_analyze_cell, jobs, parallelism)
    return PhaseDiagram(spec=spec, cells=[c for c, _ in out], flags=[f for _, f in out],
                        meta={"parallelism_independent": True})


# ------------------------------------------------------------------ boundaries

def _label(a: GroundStateAnalysis):
    return (a.parity, a.n_Z, 1 if a.mean_sx > 0 else -1)


def _discrete_kinds(la, lb):
    kinds = []
    if la[0] != lb[0]:
        kinds.append("parity_flip")
    if la[1] != lb[1]:
        kinds.append("node_jump_with_parity" if la[0] != lb[0] else "node_jump_without_parity")
    if la[2] != lb[2]:
        kinds.append("sx_sign")
    return kinds


def _refine_edge(job):
    """Locate every discrete-label change along one grid edge by bisection."""
    spec, pa, pb, la, lb, steps, wf = job

    def label_at(t):
        x = pa[0] + t * (pb[0] - pa[0])
        y = pa[1] + t * (pb[1] - pa[1])
        try:
            return _label(analyze(spec.point(x, y), spec.tol, wavefunction=wf))
        except RabiStarkError:
            return None

    found = []

    def rec(ta, la_, tb, lb_, depth):
        if la_ == lb_:
            return
        if depth >= steps:
            found.append((0.5 * (ta + tb), la_, lb_))
            return
        tm = 0.5 * (ta + tb)
        lm = label_at(tm)
        if lm is None:
            found.append((tm, la_, lb_))
            return
        rec(ta, la_, tm, lm, depth + 1)
        rec(tm, lm, tb, lb_, depth + 1)

    rec(0.0, la, 1.0, lb, 0)
    out = []
    for t, l0, l1 in found:
        pt = (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))
        for kind in _discrete_kinds(l0, l1):
            out.append((kind, pt))
    return out


def _edges(nx: int, ny: int):
    """Grid edges as ((ix, iy), (jx, jy)) in a fixed order."""
    for iy in range(ny):
        for ix in range(nx - 1):
            yield (ix, iy), (ix + 1, iy)
    for iy in range(ny - 1):
        for ix in range(nx):
            yield (ix, iy), (ix, iy + 1)


def _interp_zero(t0, f0, t1, f1):
    return t0 + (t1 - t0) * f0 / (f0 - f1)


def _onset_value(a: GroundStateAnalysis) -> float:
    x_s2 = derived_scales(a.params).x_s ** 2
    q = a.mean_x2 if a.params.lam >= 0 else a.mean_p2
    return q / x_s2


def detect_boundaries(diagram: PhaseDiagram, onset_threshold: float = 0.1,
                      gap_ceiling: float = 0.02, bisection_steps: int = 20,
                      refine: bool = True, parallelism: int = 1) -> PhaseDiagram:
    """Extract classified boundary polylines from a completed sweep.

    Discrete labels (parity, node number, sign of ``<sigma_x>``) are refined
    by bisection along each grid edge where they differ, so an edge crossed
    by more than one boundary yields one point per crossing. Continuous
    fields use local interpolation: ``zeta_one`` and ``second_order_onset``
    linearly, ``gap_min`` from the zero of the signed even-odd energy
    difference when it changes sign and from a parabola through the gap
    otherwise. Failed cells are skipped.

    Parameters
    ----------
    diagram : PhaseDiagram
    onset_threshold : float
        Value of ``<x^2>/x_s^2`` (``<p^2>/x_s^2`` for ``lambda < 0``) marking
        the second-order onset.
    gap_ceiling : float
        Only gap minima below this value (units of Omega) are reported.
    bisection_steps : int
        Maximum halvings per edge.
    refine : bool
        When False, discrete boundaries are placed at edge midpoints.
    """
    spec = diagram.spec
    nx, ny = spec.x_axis.steps, spec.y_axis.steps
    xs, ys = spec.x_axis.values(), spec.y_axis.values()
    pos = lambda i: (float(xs[i[0]]), float(ys[i[1]]))  # noqa: E731
    points = {k: [] for k in BOUNDARY_KINDS}  # kind -> list of (edge, point)
    wf = all(c is None or c.n_Z >= 0 for c in diagram.cells)

    jobs, job_edges = [], []
    for a_idx, b_idx in _edges(nx, ny):
        A, B = diagram.cell(*a_idx), diagram.cell(*b_idx)
        if A is None or B is None:
            continue
        la, lb = _label(A), _label(B)
        if la != lb:
            if refine:
                jobs.append((spec, pos(a_idx), pos(b_idx), la, lb, bisection_steps, wf))
                job_edges.append((a_idx, b_idx))
            else:
                pa, pb = pos(a_idx), pos(b_idx)
                mid = (0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1]))
                for kind in _discrete_kinds(la, lb):
                    points[kind].append(((a_idx, b_idx), mid))
        for kind, fa, fb in (
            ("zeta_one", A.zeta - 1.0, B.zeta - 1.0),
            ("second_order_onset", _onset_value(A) - onset_threshold,
             _onset_value(B) - onset_threshold),
        ):
            if math.isfinite(fa) and math.isfinite(fb) and (fa > 0) != (fb > 0):
                t = _interp_zero(0.0, fa, 1.0, fb)
                pa, pb = pos(a_idx), pos(b_idx)
                points[kind].append(((a_idx, b_idx), (pa[0] + t * (pb[0] - pa[0]),
                                                      pa[1] + t * (pb[1] - pa[1]))))
    for edge, found in zip(job_edges, _pmap(_refine_edge, jobs, parallelism)):
        for kind, pt in found:
            points[kind].append((edge, pt))

    # gap minima along rows and columns
    for line, step in _lines(nx, ny):
        cells = [diagram.cell(*i) for i in line]
        for k in range(len(line)):
            c = cells[k]
            if c is None or not c.gap < gap_ceiling:
                continue
            left = cells[k - 1] if k > 0 else None
            right = cells[k + 1] if k + 1 < len(line) else None
            if (left is not None and left.gap < c.gap) or (right is not None and right.gap <= c.gap):
                continue
            pt, edge = _gap_point(line, cells, k, pos)
            if pt is not None:
                points["gap_min"].append((edge, pt))

    boundaries = []
    for kind in BOUNDARY_KINDS:
        for poly in _chain(points[kind], nx, ny):
            boundaries.append(Boundary(kind, np.asarray(poly, dtype=float)))
    meta = dict(diagram.meta, onset_threshold=onset_threshold, gap_ceiling=gap_ceiling,
                bisection_steps=bisection_steps)
    return replace(diagram, boundaries=boundaries, meta=meta)


def _lines(nx, ny):
    for iy in range(ny):
        yield [(ix, iy) for ix in range(nx)], 0
    for ix in range(nx):
        yield [(ix, iy) for iy in range(ny)], 1


def _signed_split(c):
    return c.E_odd - c.E_even


def _gap_point(line, cells, k, pos):
    """Refined location of a gap minimum at index ``k`` of a grid line."""
    c = cells[k]
    for j in (k - 1, k + 1):
        if 0 <= j < len(line) and cells[j] is not None:
            d0, d1 = _signed_split(c), _signed_split(cells[j])
            if (d0 > 0) != (d1 > 0) and d0 != d1:
                t = _interp_zero(0.0, d0, 1.0, d1)
                pa, pb = pos(line[k]), pos(line[j])
                pt = (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))
                return pt, tuple(sorted((line[k], line[j])))
    if 0 < k < len(line) - 1 and cells[k - 1] is not None and cells[k + 1] is not None:
        y0, y1, y2 = cells[k - 1].gap, c.gap, cells[k + 1].gap
        den = y0 - 2 * y1 + y2
        s = 0.5 * (y0 - y2) / den if den > 0 else 0.0
        s = max(-0.5, min(0.5, s))
        j = k + (1 if s >= 0 else -1)
        pa, pb = pos(line[k]), pos(line[j])
        t = abs(s)
        pt = (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))
        return pt, tuple(sorted((line[k], line[j])))
    return None, None


def _squares_of(edge, nx, ny):
    (ax, ay), (bx, by) = edge
    if ay == by:  # horizontal edge between (ax,ay) and (ax+1,ay)
        return [(ax, ay - 1), (ax, ay)]
    return [(ax - 1, ay), (ax, ay)]


def _chain(items, nx, ny):
    """Join edge points into polylines by linking points sharing a grid square."""
    if not items:
        return []
    pts = [np.asarray(p, dtype=float) for _, p in items]
    squares = {}
    for i, (edge, _) in enumerate(items):
        for sq in _squares_of(edge, nx, ny):
            if 0 <= sq[0] < nx - 1 and 0 <= sq[1] < ny - 1:
                squares.setdefault(sq, []).append(i)
    adj = {i: set() for i in range(len(pts))}
    for sq in sorted(squares):
        members = sorted(squares[sq])
        free = list(members)
        # pair greedily by distance so ambiguous squares stay local
        while len(free) >= 2:
            best = None
            for a in range(len(free)):
                for b in range(a + 1, len(free)):
                    d = float(np.hypot(*(pts[free[a]] - pts[free[b]])))
                    if best is None or d < best[0]:
                        best = (d, a, b)
            _, a, b = best
            i, j = free[a], free[b]
            if len(adj[i]) < 2 and len(adj[j]) < 2:
                adj[i].add(j)
                adj[j].add(i)
            free = [f for n, f in enumerate(free) if n not in (a, b)]
    seen = set()
    polys = []
    order = sorted(adj, key=lambda i: (len(adj[i]) != 1, i))
    for start in order:
        if start in seen:
            continue
        path = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [n for n in sorted(adj[cur]) if n != prev and n not in seen]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            seen.add(cur)
            path.append(cur)
        polys.append([tuple(pts[i]) for i in path])
    return polys


def polyline_intersections(a: np.ndarray, b: np.ndarray) -> list:
    """All crossing points of two polylines (arrays of shape (m, 2))."""
    out = []
    a, b = np.asarray(a, float), np.asarray(b, float)
    for i in range(len(a) - 1):
        p, r = a[i], a[i + 1] - a[i]
        for j in range(len(b) - 1):
            q, s = b[j], b[j + 1] - b[j]
            den = r[0] * s[1] - r[1] * s[0]
            if den == 0:
                continue
            qp = q - p
            t = (qp[0] * s[1] - qp[1] * s[0]) / den
            u = (qp[0] * r[1] - qp[1] * r[0]) / den
            if 0 <= t <= 1 and 0 <= u <= 1:
                out.append(tuple(p + t * r))
    return out


def closest_approach(a: np.ndarray, b: np.ndarray, scale=(1.0, 1.0)):
    """Midpoint and scaled distance of the closest vertex pair of two polylines."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    sc = np.asarray(scale, float)
    d = np.linalg.norm((a[:, None, :] - b[None, :, :]) / sc, axis=2)
    i, j = np.unravel_index(int(np.argmin(d)), d.shape)
    return tuple(0.5 * (a[i] + b[j])), float(d[i, j])


# ------------------------------------------------------------------ collapse

COLLAPSE_LAWS = ("x2", "sx", "x2p2", "local_x2", "local_sx", "sx_global")


@dataclass
class CollapseDataset:
    """Scaled numerical curves for one scaling law plus analytic references.

    ``curves`` maps a label ``"lambda=..,chi=.."`` to ``(scaled_x, scaled_y)``;
    ``references`` holds the analytic prediction on the same ``scaled_x``
    for each curve, and ``reference`` the common (``lambda != 0``) one.
    ``discontinuities`` lists, per curve, the ``scaled_x`` midpoints where
    the ground-state parity flips between samples (level crossings).
    """

    law: str
    curves: dict
    references: dict
    reference: tuple
    max_pairwise_dev: float
    max_reference_dev: float
    discontinuities: dict
    omega: float
    records: dict = field(default_factory=dict)


def _law_values(law: str, a: GroundStateAnalysis, r: float, lam: float, chi: float):
    """(scaled_x, numerical y, analytic y) for one analysed point at g/g_c = r."""
    sc = derived_scales(a.params)
    x_s2 = sc.x_s ** 2
    gb = r * math.sqrt(1.0 - chi)
    laws = analytic.scaling_laws(gb, chi)
    if law == "x2":
        q = a.mean_x2 if lam >= 0 else a.mean_p2
        ref = laws.x2_jc if lam == 0 else 2.0 * laws.x2_scaled
        return r, q / x_s2, ref
    if law == "sx":
        return r, a.mean_sx, laws.sx
    if law == "x2p2":
        return r, (a.mean_x2 + a.mean_p2) / x_s2, laws.x2p2_unified
    if law in ("local_x2", "local_sx"):
        dg = analytic.dg_reduced(r, chi)
        lx, ls = analytic.local_expansion(dg)
        if law == "local_x2":
            q = a.mean_x2 if lam >= 0 else a.mean_p2
            return dg, (1.0 - chi) * q / (2.0 * x_s2), lx
        return dg, a.mean_sx, ls
    if law == "sx_global":
        lhs = (chi * a.mean_sx + 1.0) ** 2 / (1.0 - chi * chi)
        return r, lhs, laws.sx_global_rhs
    raise ValueError(f"unknown law {law!r}; expected one of {COLLAPSE_LAWS}")


def _collapse_job(job):
    params, tol = job
    try:
        return analyze(params, tol, wavefunction=False)
    except RabiStarkError:
        return None


def build_collapse(law_id: str, parameter_sets, g_range=(1.05, 2.0), points: int = 40,
                   omega: float = 0.01, tol: float = DEFAULT_TOL,
                   parallelism: int = 1) -> CollapseDataset:
    """Sample ``g / g_c`` for several ``(lambda, chi)`` and rescale per a scaling law.

    Parameters
    ----------
    law_id : str
        One of ``x2``, ``sx``, ``x2p2``, ``local_x2``, ``local_sx``, ``sx_global``.
    parameter_sets : iterable of (lambda, chi)
    g_range : (float, float)
        Range of ``g / g_c`` with ``g_c = 2 sqrt(1 - chi) / (1 + |lambda|)`` (units of g_s).
    points : int
        Samples per curve, shared by all curves.
    omega : float
        Boson frequency in units of Omega.
    """
    if law_id not in COLLAPSE_LAWS:
        raise ValueError(f"unknown law {law_id!r}; expected one of {COLLAPSE_LAWS}")
    ratios = np.linspace(g_range[0], g_range[1], int(points))
    sets = [(float(l), float(c)) for l, c in parameter_sets]
    jobs = []
    for lam, chi in sets:
        gc = analytic.g_c(lam, chi)
        for r in ratios:
            jobs.append((ModelParams.from_scaled(omega, float(r) * gc, lam, chi), tol))
    results = _pmap(_collapse_job, jobs, parallelism)
    curves, refs, disc, records = {}, {}, {}, {}
    for k, (lam, chi) in enumerate(sets):
        label = f"lambda={lam:g},chi={chi:g}"
        rows = results[k * len(ratios):(k + 1) * len(ratios)]
        xs, ys, ref = [], [], []
        for r, a in zip(ratios, rows):
            if a is None:
                xs.append(float(r)), ys.append(math.nan), ref.append(math.nan)
                continue
            sx_, y, yr = _law_values(law_id, a, float(r), lam, chi)
            xs.append(sx_), ys.append(y), ref.append(yr)
        curves[label] = (np.asarray(xs), np.asarray(ys))
        refs[label] = (np.asarray(xs), np.asarray(ref))
        par = [a.parity if a is not None else 0 for a in rows]
        disc[label] = [0.5 * (xs[i] + xs[i + 1]) for i in range(len(par) - 1)
                       if par[i] != 0 and par[i + 1] != 0 and par[i] != par[i + 1]]
        records[label] = rows
    Y = np.vstack([c[1] for c in curves.values()])
    spread = np.nanmax(Y, axis=0) - np.nanmin(Y, axis=0)
    max_pair = float(np.nanmax(spread)) if Y.shape[0] > 1 else 0.0
    R = np.vstack([r[1] for r in refs.values()])
    max_ref = float(np.nanmax(np.abs(Y - R)))
    common = None
    for (lam, chi), (lab, rr) in zip(sets, refs.items()):
        if lam != 0:
            common = rr
            break
    common = common or next(iter(refs.values()))
    return CollapseDataset(law=law_id, curves=curves, references=refs, reference=common,
                           max_pairwise_dev=max_pair, max_reference_dev=max_ref,
                           discontinuities=disc, omega=omega, records=records)
