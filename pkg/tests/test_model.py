import math

import pytest
from hypothesis import given, strategies as st

from rabistark.exceptions import ChiOutOfRange, NonPositiveFrequency, ParameterError
from rabistark.model import ModelParams, derived_scales, validate


def test_valid_point_is_returned_unchanged():
    p = ModelParams(omega=0.01, Omega=1.0, g=1.0, lam=0.5, chi=0.4)
    assert validate(p) == p


def test_chi_above_one_rejected():
    with pytest.raises(ChiOutOfRange):
        validate(ModelParams(omega=0.01, g=1.0, lam=0.5, chi=1.2))


def test_chi_of_exactly_one_is_allowed():
    assert validate(ModelParams(omega=0.5, chi=-1.0)).chi == -1.0


@pytest.mark.parametrize("omega, Omega", [(0.0, 1.0), (-0.1, 1.0), (0.5, 0.0)])
def test_non_positive_frequencies_rejected(omega, Omega):
    with pytest.raises(NonPositiveFrequency):
        validate(ModelParams(omega=omega, Omega=Omega))


def test_nan_rejected():
    with pytest.raises(ParameterError):
        validate(ModelParams(omega=0.5, g=math.nan))


def test_negative_coupling_normalized():
    assert validate(ModelParams(omega=0.5, g=-0.3, lam=0.2)).g == 0.3


def test_scales_at_low_frequency():
    sc = derived_scales(ModelParams(omega=0.01))
    assert sc.g_s == pytest.approx(0.05, abs=1e-15)
    assert sc.x_s == pytest.approx(7.0710678118654755, abs=1e-14)
    assert sc.n_s == pytest.approx(25.0, abs=1e-12)


def test_scales_in_symmetric_units():
    sc = derived_scales(ModelParams(omega=1.0))
    assert sc.g_s == pytest.approx(0.5)
    assert sc.x_s == pytest.approx(math.sqrt(0.5))
    assert sc.n_s == pytest.approx(0.25)


def test_isotropic_limit_has_no_g_y():
    sc = derived_scales(ModelParams(omega=0.5, g=2.0, lam=1.0))
    assert sc.g_z == 2.0
    assert sc.g_y == 0.0
    assert sc.gp_y == 0.0


def test_from_scaled_round_trip():
    p = ModelParams.from_scaled(0.01, 3.0, 0.5, 0.4)
    assert p.g == pytest.approx(0.15)
    assert p.g_over_gs == pytest.approx(3.0)


pos = st.floats(1e-3, 10.0)


@given(pos, pos, st.floats(0.0, 5.0), st.floats(-3.0, 3.0), st.floats(1e-2, 100.0))
def test_scale_covariance(omega, Omega, g, lam, c):
    a = derived_scales(ModelParams(omega, Omega, g, lam, 0.1))
    b = derived_scales(ModelParams(c * omega, c * Omega, c * g, lam, 0.1))
    assert b.g_s == pytest.approx(c * a.g_s, rel=1e-12)
    assert b.x_s == pytest.approx(a.x_s, rel=1e-12)
    assert b.n_s == pytest.approx(a.n_s, rel=1e-12)


@given(pos, st.floats(0.0, 5.0), st.floats(-3.0, 3.0))
def test_identities_and_duality_swap(omega, g, lam):
    p = ModelParams(omega, 1.0, g, lam, 0.0)
    a = derived_scales(p)
    assert a.x_s == pytest.approx(math.sqrt(2.0) * a.g_s / omega, rel=1e-12)
    assert a.n_s == pytest.approx(a.x_s ** 2 / 2.0, rel=1e-12)
    b = derived_scales(p.with_(lam=-lam))
    assert b.g_z == pytest.approx(a.g_y, abs=1e-15)
    assert b.g_y == pytest.approx(a.g_z, abs=1e-15)
