"""scikit-learn style wrappers around the per-point analysis.

Rows of ``X`` are parameter points ``(g/g_s, lambda, chi)``, optionally with a
fourth column ``omega/Omega`` that overrides the estimator's ``omega``.
Nothing is learned; ``fit`` only validates input and records shapes, so the
objects compose with pipelines and parameter grids.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .eigensolve import DEFAULT_TOL
from .observables import analyze
from .sweep import params_at

__all__ = ["GroundStateTransformer", "TopologicalPhaseClassifier", "check_parameter_rows"]

_DEFAULT_FEATURES = ("E0", "gap", "parity", "n_Z", "mean_n", "mean_x2", "mean_p2",
                     "mean_sx", "mean_aa", "zeta")
_NEEDS_WF = {"n_Z", "zeta"}


def check_parameter_rows(X, omega: float) -> np.ndarray:
    """Validate parameter rows and return an ``(n, 4)`` array ``g, lambda, chi, omega``."""
    X = check_array(X, dtype=float, ensure_2d=True)
    if X.shape[1] not in (3, 4):
        raise ValueError(f"expected 3 or 4 columns (g, lambda, chi[, omega]), got {X.shape[1]}")
    if X.shape[1] == 3:
        X = np.column_stack([X, np.full(X.shape[0], omega)])
    if np.any(np.abs(X[:, 2]) > 1):
        raise ValueError("chi column must satisfy |chi| <= 1")
    if np.any(X[:, 3] <= 0):
        raise ValueError("omega must be positive")
    return X


def _points(X):
    return [params_at({"g": g, "lambda": l, "chi": c, "omega": w}) for g, l, c, w in X]


class GroundStateTransformer(TransformerMixin, BaseEstimator):
    """Map parameter rows to ground-state observables.

    Parameters
    ----------
    omega : float
        Boson frequency in units of Omega, used when ``X`` has three columns.
    features : tuple of str
        Fields of the analysis record to return, in order.
    tol : float
        Energy convergence tolerance.
    """

    def __init__(self, omega=0.5, features=_DEFAULT_FEATURES, tol=DEFAULT_TOL):
        self.omega = omega
        self.features = features
        self.tol = tol

    def fit(self, X, y=None):
        self.n_features_in_ = check_array(X, dtype=float).shape[1]
        check_parameter_rows(X, self.omega)
        self.feature_names_out_ = np.asarray(self.features, dtype=object)
        return self

    def transform(self, X):
        check_is_fitted(self, "feature_names_out_")
        X = check_parameter_rows(X, self.omega)
        wf = bool(_NEEDS_WF.intersection(self.features) or
                  any(f.startswith("E_") and f not in ("E0", "E_even", "E_odd")
                      for f in self.features))
        out = np.empty((X.shape[0], len(self.features)))
        for i, p in enumerate(_points(X)):
            row = analyze(p, self.tol, wavefunction=wf).as_row()
            out[i] = [row[f] for f in self.features]
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "feature_names_out_")
        return self.feature_names_out_.copy()


class TopologicalPhaseClassifier(BaseEstimator):
    """Label parameter rows with their topological phase ``(parity, n_Z)``.

    ``predict`` returns strings like ``"P=-1,nZ=0"``; ``predict_parts``
    returns the integer pair.
    """

    def __init__(self, omega=0.5, tol=DEFAULT_TOL):
        self.omega = omega
        self.tol = tol

    def fit(self, X, y=None):
        check_parameter_rows(X, self.omega)
        self.is_fitted_ = True
        return self

    def predict_parts(self, X):
        check_is_fitted(self, "is_fitted_")
        X = check_parameter_rows(X, self.omega)
        res = [analyze(p, self.tol) for p in _points(X)]
        return np.array([[a.parity, a.n_Z] for a in res], dtype=int)

    def predict(self, X):
        parts = self.predict_parts(X)
        return np.array([f"P={p:+d},nZ={n}" for p, n in parts], dtype=object)
