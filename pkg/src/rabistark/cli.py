"""Command-line front end: ``rabi-stark <command> [options]``.

Units are ``omega / Omega`` for ``--omega`` and ``g / g_s`` for ``--g``.
Options may also come from a ``--config`` file of ``key = value`` lines
(``#`` starts a comment); flags given on the command line win.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .eigensolve import DEFAULT_TOL, ground_solve
from .exceptions import (ConvergenceFailure, DomainError, GridTooSmall, ParameterError,
                         RabiStarkError, ReconstructionMismatch, TruncationCeiling)
from .fock import Truncation
from .model import derived_scales
from .observables import RECORD_FIELDS, analyze
from .serialize import Table, serialize
from .sweep import (Axis, GridSpec, build_collapse, detect_boundaries, params_at, run_sweep,
                    COLLAPSE_LAWS)
from .wavefunction import count_nodes, momentum_representation, position_representation

__all__ = ["JobConfig", "parse_args", "run", "main", "COMMANDS"]

COMMANDS = ("analyze", "spectrum", "sweep", "boundaries", "collapse", "jc-exact",
            "variational", "quadruple", "wavefunction")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass
class JobConfig:
    command: str
    omega: float | None = None
    g: float | None = None
    lam: float | None = None
    chi: float | None = None
    grids: list = field(default_factory=list)
    tol: float = DEFAULT_TOL
    law: str = "x2"
    out: str | None = None
    format: str = "csv"
    threads: int = 1
    timestamp: bool = True
    k: int = 6
    points: int = 40
    g_range: tuple = (1.05, 2.0)
    lambdas: list = field(default_factory=list)
    chis: list = field(default_factory=list)
    onset: float = 0.1
    gap_ceiling: float = 0.02
    x_range: tuple = (0.0, 0.0)
    representation: str = "x"
    deterministic: bool = True


def _grid(text: str) -> Axis:
    parts = text.split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"grid must be param:min:max:steps, got {text!r}")
    name, lo, hi, steps = parts
    try:
        return Axis(name, float(lo), float(hi), int(steps))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _pair(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    return float(parts[0]), float(parts[1])


def _floats(text: str) -> list:
    return [float(t) for t in text.split(",") if t.strip()]


def _threads_default() -> int:
    env = os.environ.get("RABI_STARK_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


# option name -> (type, default)
_OPTIONS = {
    "omega": (float, None), "g": (float, None), "lambda": (str, None), "chi": (str, None),
    "tol": (float, DEFAULT_TOL), "law": (str, "x2"), "out": (str, None),
    "format": (str, "csv"), "threads": (int, None), "k": (int, 6), "points": (int, 40),
    "g_range": (_pair, (1.05, 2.0)), "onset": (float, 0.1), "gap_ceiling": (float, 0.02),
    "x_range": (_pair, None), "representation": (str, "x"),
}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rabi-stark", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--omega", help="boson frequency in units of Omega")
    ap.add_argument("--g", help="coupling in units of g_s")
    ap.add_argument("--lambda", dest="lambda", help="anisotropy (comma list for collapse)")
    ap.add_argument("--chi", help="Stark ratio (comma list for collapse)")
    ap.add_argument("--grid", action="append", type=_grid, default=None,
                    help="param:min:max:steps, given twice for a 2-D sweep")
    ap.add_argument("--tol", help="energy tolerance (units of Omega)")
    ap.add_argument("--law", choices=COLLAPSE_LAWS)
    ap.add_argument("--out", help="output file (default stdout)")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--threads", help="worker processes (default $RABI_STARK_THREADS or 1)")
    ap.add_argument("--k", help="number of levels for 'spectrum'")
    ap.add_argument("--points", help="samples per collapse curve or variational scan")
    ap.add_argument("--g-range", dest="g_range", help="g/g_c range lo:hi for 'collapse'")
    ap.add_argument("--onset", help="second-order onset threshold on <x^2>/x_s^2")
    ap.add_argument("--gap-ceiling", dest="gap_ceiling", help="gap_min ceiling (units of Omega)")
    ap.add_argument("--x-range", dest="x_range", help="position range lo:hi for 'variational'")
    ap.add_argument("--representation", choices=("x", "p"), help="'wavefunction' quadrature")
    ap.add_argument("--config", help="key=value configuration file")
    ap.add_argument("--no-timestamp", dest="no_timestamp", action="store_true",
                    help="omit the timestamp metadata line")
    return ap


def _read_config(path: str) -> dict:
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}")
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        k = k.replace("-", "_")
        if k == "grid":
            out.setdefault("grid", []).append(v)
        else:
            out[k] = v
    return out


_NEEDS = {
    "analyze": ("omega", "g", "lambda", "chi"),
    "spectrum": ("omega", "g", "lambda", "chi"),
    "wavefunction": ("omega", "g", "lambda", "chi"),
    "jc-exact": ("omega", "g", "chi"),
    "variational": ("omega", "g", "lambda", "chi"),
    "sweep": ("omega",),
    "boundaries": ("omega",),
    "collapse": ("omega", "lambda", "chi"),
    "quadruple": (),
}


def parse_args(argv) -> JobConfig:
    """Parse command-line arguments (and an optional config file) into a JobConfig.

    Raises
    ------
    SystemExit
        With code 2 on malformed input.
    """
    ap = _build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = _read_config(ns.config) if ns.config else {}
        merged = {}
        for key, (typ, default) in _OPTIONS.items():
            val = getattr(ns, key)
            if val is None and key in cfg:
                val = cfg[key]
            if val is None:
                merged[key] = default
            elif isinstance(val, str) and typ is not str:
                merged[key] = typ(val)
            else:
                merged[key] = val
        grids = ns.grid if ns.grid is not None else [_grid(t) for t in cfg.get("grid", [])]
        no_ts = ns.no_timestamp or str(cfg.get("no_timestamp", "")).lower() in ("1", "true", "yes")
    except (ValueError, argparse.ArgumentTypeError) as exc:
        ap.error(str(exc))
    except UsageError as exc:
        ap.error(str(exc))

    cmd = ns.command
    missing = [k for k in _NEEDS[cmd] if merged.get(k) is None
               and not any(a.name == k for a in grids)]
    if missing:
        ap.error(f"{cmd}: missing --{' --'.join(missing)}")
    try:
        lambdas = _floats(merged["lambda"]) if merged["lambda"] is not None else []
        chis = _floats(merged["chi"]) if merged["chi"] is not None else []
    except ValueError as exc:
        ap.error(str(exc))
    if cmd != "collapse" and (len(lambdas) > 1 or len(chis) > 1):
        ap.error("comma lists for --lambda/--chi are only accepted by 'collapse'")
    if cmd in ("sweep", "boundaries") and len(grids) != 2:
        ap.error(f"{cmd} needs exactly two --grid specifications")
    if cmd == "quadruple" and (merged["chi"] is None) == (merged["lambda"] is None):
        ap.error("quadruple needs exactly one of --chi or --lambda")
    if merged["format"] not in ("csv", "json"):
        ap.error("format must be csv or json")
    if merged["law"] not in COLLAPSE_LAWS:
        ap.error(f"law must be one of {COLLAPSE_LAWS}")
    threads = merged["threads"] if merged["threads"] is not None else _threads_default()
    if merged["out"]:
        d = os.path.dirname(os.path.abspath(merged["out"]))
        if not os.path.isdir(d):
            ap.error(f"output directory {d!r} does not exist")
    return JobConfig(
        command=cmd, omega=merged["omega"], g=merged["g"],
        lam=lambdas[0] if lambdas else None, chi=chis[0] if chis else None,
        grids=grids, tol=merged["tol"], law=merged["law"], out=merged["out"],
        format=merged["format"], threads=max(1, int(threads)), timestamp=not no_ts,
        k=merged["k"], points=merged["points"], g_range=tuple(merged["g_range"]),
        lambdas=lambdas, chis=chis, onset=merged["onset"], gap_ceiling=merged["gap_ceiling"],
        x_range=merged["x_range"], representation=merged["representation"],
    )


# ------------------------------------------------------------------ commands

def _point(cfg: JobConfig):
    return params_at({"omega": cfg.omega, "g": cfg.g if cfg.g is not None else 0.0,
                      "lambda": cfg.lam or 0.0, "chi": cfg.chi or 0.0})


def _echo(cfg: JobConfig) -> dict:
    meta = {"command": cfg.command}
    for k in ("omega", "g", "lam", "chi"):
        v = getattr(cfg, k)
        if v is not None:
            meta["lambda" if k == "lam" else k] = v
    meta["units"] = "omega/Omega, g/g_s, energies/Omega"
    meta["tol"] = cfg.tol
    return meta


def _analysis_table(records, meta) -> Table:
    rows = [[r.as_row()[c] for c in RECORD_FIELDS] for r in records]
    return Table(columns=list(RECORD_FIELDS), rows=rows, meta=meta)


def _cmd_analyze(cfg):
    a = analyze(_point(cfg), cfg.tol)
    meta = _echo(cfg)
    meta["n_max_used"] = a.n_max_used
    return _analysis_table([a], meta)


def _cmd_spectrum(cfg):
    res = ground_solve(_point(cfg), cfg.tol, k=cfg.k)
    meta = _echo(cfg)
    meta.update(n_max_used=res.n_max_used, residual=res.residual)
    rows = [[i, float(E), int(P), float(E - res.energies[0])]
            for i, (E, P) in enumerate(zip(res.energies, res.parities))]
    return Table(columns=["level", "energy", "parity", "excitation"], rows=rows, meta=meta)


def _grid_spec(cfg) -> GridSpec:
    fixed = {"omega": cfg.omega, "g": cfg.g, "lambda": cfg.lam, "chi": cfg.chi}
    fixed = {k: v for k, v in fixed.items() if v is not None}
    return GridSpec(cfg.grids[0], cfg.grids[1], fixed, cfg.tol)


def _sweep_meta(cfg, spec):
    meta = _echo(cfg)
    meta["x_axis"] = f"{spec.x_axis.name}:{spec.x_axis.min}:{spec.x_axis.max}:{spec.x_axis.steps}"
    meta["y_axis"] = f"{spec.y_axis.name}:{spec.y_axis.min}:{spec.y_axis.max}:{spec.y_axis.steps}"
    return meta


def _cmd_sweep(cfg):
    spec = _grid_spec(cfg)
    d = run_sweep(spec, cfg.threads)
    meta = _sweep_meta(cfg, spec)
    cols = ["ix", "iy", "failed", *RECORD_FIELDS]
    rows = []
    nx = spec.x_axis.steps
    for k, (c, flag) in enumerate(zip(d.cells, d.flags)):
        ix, iy = k % nx, k // nx
        if c is None:
            x, y = spec.cell_values()[k]
            blank = {f: math.nan for f in RECORD_FIELDS}
            blank[spec.x_axis.name if spec.x_axis.name != "g" else "g_over_gs"] = x
            blank[spec.y_axis.name if spec.y_axis.name != "g" else "g_over_gs"] = y
            rows.append([ix, iy, 1, *blank.values()])
        else:
            row = c.as_row()
            rows.append([ix, iy, 0, *(row[f] for f in RECORD_FIELDS)])
    meta["failed_cells"] = sum(f is not None for f in d.flags)
    meta["max_n_max_used"] = max((c.n_max_used for c in d.cells if c is not None), default=0)
    return Table(columns=cols, rows=rows, meta=meta)


def _cmd_boundaries(cfg):
    spec = _grid_spec(cfg)
    d = detect_boundaries(run_sweep(spec, cfg.threads), onset_threshold=cfg.onset,
                          gap_ceiling=cfg.gap_ceiling, parallelism=cfg.threads)
    meta = _sweep_meta(cfg, spec)
    meta.update(onset_threshold=cfg.onset, gap_ceiling=cfg.gap_ceiling,
                failed_cells=sum(f is not None for f in d.flags))
    rows = []
    for pid, b in enumerate(d.boundaries):
        for vid, (x, y) in enumerate(b.points):
            rows.append([b.kind, pid, vid, float(x), float(y)])
    cols = ["kind", "polyline", "vertex", spec.x_axis.name, spec.y_axis.name]
    return Table(columns=cols, rows=rows, meta=meta)


def _cmd_collapse(cfg):
    sets = [(l, c) for l in cfg.lambdas for c in cfg.chis]
    ds = build_collapse(cfg.law, sets, cfg.g_range, cfg.points, cfg.omega, cfg.tol, cfg.threads)
    meta = _echo(cfg)
    meta.pop("lambda", None), meta.pop("chi", None)
    meta.update(law=cfg.law, sets=";".join(f"{l:g}:{c:g}" for l, c in sets),
                g_range=f"{cfg.g_range[0]}:{cfg.g_range[1]}",
                max_pairwise_dev=ds.max_pairwise_dev, max_reference_dev=ds.max_reference_dev)
    rows = []
    for (label, (xs, ys)), (_, (_, ref)) in zip(ds.curves.items(), ds.references.items()):
        lam, chi = (float(t.split("=")[1]) for t in label.split(","))
        jumps = ds.discontinuities[label]
        for x, y, r in zip(xs, ys, ref):
            rows.append([lam, chi, float(x), float(y), float(r),
                         int(any(abs(x - j) < 1e-12 for j in jumps))])
        for j in jumps:
            rows.append([lam, chi, float(j), math.nan, math.nan, 1])
    return Table(columns=["lambda", "chi", "scaled_x", "scaled_y", "analytic", "jump"],
                 rows=rows, meta=meta)


def _cmd_jc(cfg):
    p = _point(cfg).with_(lam=0.0)
    E, n_star = analytic.jc_ground_energy(p)
    try:
        nm = analytic.n_optimal(p)
    except DomainError:
        nm = analytic.NOptimal(math.nan, math.nan)
    meta = _echo(cfg)
    meta.update(E_GS=E, n_star="" if n_star is None else n_star,
                n_min=nm.n_min, n_min_low_per_ns=nm.n_min_low,
                n_s=derived_scales(p).n_s)
    top = (n_star or 0) + 10
    rows = []
    for n in range(0, top + 1):
        lv = analytic.jc_level(p, n)
        rows.append([n, lv.E_minus, lv.E_plus, lv.C_up, lv.C_down, lv.e_plus, lv.e_minus])
    return Table(columns=["n", "E_minus", "E_plus", "C_up", "C_down", "e_plus", "e_minus"],
                 rows=rows, meta=meta)


def _cmd_variational(cfg):
    p = _point(cfg)
    m = analytic.variational_minima(p)
    sc = derived_scales(p)
    lo, hi = cfg.x_range if cfg.x_range else (-1.5 * max(sc.gp_z, sc.gp_y, 4.0),
                                              1.5 * max(sc.gp_z, sc.gp_y, 4.0))
    xs = np.linspace(lo, hi, max(cfg.points, 2))
    meta = _echo(cfg)
    meta.update(x_B=m.x_B, x_A="" if m.x_A is None else m.x_A,
                E_SC_A="" if m.E_SC_A is None else m.E_SC_A, E_SC_B=m.E_SC_B)
    rows = [[float(x), float(e)] for x, e in zip(xs, analytic.variational_energy(xs, p))]
    return Table(columns=["x", "energy"], rows=rows, meta=meta)


def _cmd_quadruple(cfg):
    meta = {"command": "quadruple", "units": "g/g_s"}
    if cfg.chi is not None:
        q = analytic.quadruple_point_fixed_chi(cfg.chi)
        meta["chi"] = cfg.chi
        return Table(columns=["chi", "g_TQ", "lambda_TQ"], rows=[[cfg.chi, q.g_TQ, q.lambda_TQ]],
                     meta=meta)
    q = analytic.quadruple_point_fixed_lambda(cfg.lam)
    meta["lambda"] = cfg.lam
    return Table(columns=["lambda", "g_TQ", "chi_TQ"], rows=[[cfg.lam, q.g_TQ, q.chi_TQ]],
                 meta=meta)


def _cmd_wavefunction(cfg):
    p = _point(cfg)
    a = analyze(p, cfg.tol, wavefunction=False)
    res = ground_solve(p, cfg.tol, k=2)
    trunc = Truncation(res.n_max_used)
    sol = res.sectors[a.parity]
    v = np.zeros(2 * trunc.size)
    n = np.arange(trunc.size)
    up = sol.spins > 0
    v[n[up]] = sol.vectors[up, 0]
    v[trunc.size + n[~up]] = sol.vectors[~up, 0]
    sc = derived_scales(p)
    if cfg.representation == "p":
        wf = momentum_representation(v, trunc, displacement=sc.gp_y)
    else:
        wf = position_representation(v, trunc, displacement=sc.gp_z)
    meta = _echo(cfg)
    meta.update(representation=cfg.representation, parity=a.parity,
                n_Z=count_nodes(wf).n_Z, E0=a.E0, n_max_used=a.n_max_used, dx=wf.dx)
    rows = [[float(x), float(u), float(d)] for x, u, d in zip(wf.grid, wf.psi_plus, wf.psi_minus)]
    return Table(columns=[cfg.representation, "psi_plus", "psi_minus"], rows=rows, meta=meta)


_DISPATCH = {
    "analyze": _cmd_analyze, "spectrum": _cmd_spectrum, "sweep": _cmd_sweep,
    "boundaries": _cmd_boundaries, "collapse": _cmd_collapse, "jc-exact": _cmd_jc,
    "variational": _cmd_variational, "quadruple": _cmd_quadruple,
    "wavefunction": _cmd_wavefunction,
}


def run(cfg: JobConfig) -> Table:
    """Execute a parsed job and return its table."""
    return _DISPATCH[cfg.command](cfg)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        table = run(cfg)
    except (ParameterError, DomainError) as exc:
        print(f"rabi-stark: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TruncationCeiling, ConvergenceFailure, GridTooSmall, ReconstructionMismatch,
            RabiStarkError) as exc:
        print(f"rabi-stark: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    data = serialize(table, cfg.format, cfg.timestamp)
    try:
        if cfg.out:
            with open(cfg.out, "wb") as fh:
                fh.write(data)
        else:
            sys.stdout.buffer.write(data)
            sys.stdout.flush()
    except OSError as exc:
        print(f"rabi-stark: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
