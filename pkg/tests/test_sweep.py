import math

import numpy as np
import pytest

from rabistark.analytic import g_c, g_T1E
from rabistark.sweep import (BOUNDARY_KINDS, Axis, GridSpec, build_collapse, closest_approach,
                             detect_boundaries, polyline_intersections, run_sweep)


def test_axis_validation():
    with pytest.raises(ValueError):
        Axis("g", 0, 1, 1)
    with pytest.raises(ValueError):
        Axis("Omega", 0, 1, 3)
    with pytest.raises(ValueError):
        GridSpec(Axis("g", 0, 1, 2), Axis("g", 0, 1, 2), {"omega": 0.5})
    with pytest.raises(ValueError):
        GridSpec(Axis("g", 0, 1, 2), Axis("chi", 0, 1.5, 2), {"omega": 0.5})


def test_decoupled_corner():
    spec = GridSpec(Axis("g", 0.0, 1e-3, 2), Axis("lambda", 0.0, 0.5, 2), {"omega": 0.5, "chi": 0.2})
    d = run_sweep(spec)
    assert len(d.cells) == 4
    assert all(c.parity == -1 and c.n_Z == 0 for c in d.cells)
    assert d.field("parity").shape == (2, 2)


def test_row_major_layout():
    spec = GridSpec(Axis("g", 0.5, 1.5, 3), Axis("chi", -0.2, 0.2, 2), {"omega": 0.5, "lambda": 0.4})
    d = run_sweep(spec, wavefunction=False)
    assert d.cell(2, 1).params.chi == pytest.approx(0.2)
    assert d.cell(2, 1).params.g_over_gs == pytest.approx(1.5)


def test_parallel_result_is_identical():
    spec = GridSpec(Axis("g", 1.0, 3.0, 4), Axis("lambda", 0.2, 1.4, 3), {"omega": 0.5, "chi": 0.2})
    a = run_sweep(spec, parallelism=1)
    b = run_sweep(spec, parallelism=3)
    for ca, cb in zip(a.cells, b.cells):
        ra, rb = ca.as_row(), cb.as_row()
        assert list(ra) == list(rb)
        for k in ra:
            assert ra[k] == rb[k] or (isinstance(ra[k], float) and math.isnan(ra[k]) and math.isnan(rb[k]))


def test_failed_cells_are_flagged_not_fatal():
    # omega = 1e-4 at g = 4 g_s needs far more than 4096 photons
    spec = GridSpec(Axis("g", 0.5, 4.0, 2), Axis("omega", 1e-4, 0.5, 2),
                    {"lambda": 1.0, "chi": 0.0})
    d = run_sweep(spec, wavefunction=False)
    assert len(d.cells) == 4
    assert d.cell(1, 0) is None and "TruncationCeiling" in d.flags[1]
    assert sum(f is not None for f in d.flags) == 1
    detect_boundaries(d, refine=False)


def test_lambda_mirror_symmetry():
    spec = GridSpec(Axis("g", 1.5, 3.0, 3), Axis("lambda", -1.2, 1.2, 3), {"omega": 0.5, "chi": 0.2})
    d = run_sweep(spec)
    for f in ("parity", "n_Z", "gap", "mean_sx"):
        F = d.field(f)
        assert np.allclose(F[0], F[2], atol=1e-6)
    D = d.field("mean_x2") - d.field("mean_p2")
    assert np.allclose(D[0], -D[2], atol=1e-6)


def test_gap_closings_with_parity_alternation():
    spec = GridSpec(Axis("g", 1.6, 4.0, 13), Axis("lambda", 0.0, 0.8, 5), {"omega": 0.5, "chi": 0.2})
    d = detect_boundaries(run_sweep(spec, parallelism=2), parallelism=2)
    assert {b.kind for b in d.boundaries} <= set(BOUNDARY_KINDS)
    flips = d.boundaries_of("parity_flip")
    gaps = d.boundaries_of("gap_min")
    assert flips and gaps
    # the lowest flip at each lambda row follows the exact first crossing
    rows = spec.y_axis.values()
    lowest = {}
    for b in flips:
        for g, lam in b.points:
            k = np.argmin(np.abs(rows - lam))
            if abs(rows[k] - lam) < 1e-9:
                lowest[rows[k]] = min(lowest.get(rows[k], np.inf), g)
    assert len(lowest) == rows.size
    for lam, g in lowest.items():
        assert g == pytest.approx(g_T1E(lam, 0.2), rel=0.03)
    # parity alternates along g at fixed lambda
    for P in d.field("parity")[:2]:
        assert np.count_nonzero(np.diff(P)) >= 2


def test_unconventional_node_boundary_for_negative_chi():
    spec = GridSpec(Axis("g", 2.0, 4.5, 11), Axis("chi", -0.6, -0.1, 6), {"omega": 0.5, "lambda": 0.5})
    d = detect_boundaries(run_sweep(spec, parallelism=2), parallelism=2)
    assert d.boundaries_of("node_jump_without_parity")


def test_polyline_geometry():
    a = np.array([[0.0, 0.0], [2.0, 2.0]])
    b = np.array([[0.0, 2.0], [2.0, 0.0]])
    (pt,) = polyline_intersections(a, b)
    assert np.allclose(pt, [1.0, 1.0])
    assert polyline_intersections(a, a + [0.0, 5.0]) == []
    p, dist = closest_approach(a, a + [0.0, 0.1])
    assert dist == pytest.approx(0.1)
    assert closest_approach(a, a + [0.0, 0.1], scale=(1.0, 0.1))[1] == pytest.approx(1.0)


def test_collapse_shares_sampling_grid():
    ds = build_collapse("x2p2", [(0.0, 0.4), (0.5, 0.4)], points=5, omega=0.05)
    xs = [c[0] for c in ds.curves.values()]
    assert np.array_equal(xs[0], xs[1])
    assert ds.max_pairwise_dev >= 0 and np.isfinite(ds.max_reference_dev)
    with pytest.raises(ValueError):
        build_collapse("nope", [(0.5, 0.4)])


def test_collapse_reference_points():
    ds = build_collapse("x2", [(0.0, 0.4), (0.5, 0.4)], g_range=(1.5, 1.5), points=2, omega=0.05)
    refs = {k: v[1][0] for k, v in ds.references.items()}
    assert refs["lambda=0.5,chi=0.4"] == pytest.approx(2 * refs["lambda=0,chi=0.4"])
