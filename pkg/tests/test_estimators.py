import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from rabistark.estimators import GroundStateTransformer, TopologicalPhaseClassifier
from rabistark.observables import analyze

from conftest import scaled


def test_transformer_matches_analysis():
    X = np.array([[2.6, 2.0, 0.1], [1.0, 0.5, 0.0]])
    tr = GroundStateTransformer(omega=0.5, features=("E0", "mean_sx", "n_Z")).fit(X)
    out = tr.transform(X)
    ref = analyze(scaled(0.5, 2.6, 2.0, 0.1))
    assert out.shape == (2, 3)
    assert out[0, 0] == pytest.approx(ref.E0, abs=1e-12)
    assert out[0, 2] == ref.n_Z
    assert list(tr.get_feature_names_out()) == ["E0", "mean_sx", "n_Z"]
    assert tr.n_features_in_ == 3


def test_transformer_omega_column_and_pipeline():
    X = np.array([[1.5, 0.5, 0.2, 0.3], [1.5, 0.5, 0.2, 0.5]])
    pipe = make_pipeline(GroundStateTransformer(features=("E0", "gap")), StandardScaler())
    Z = pipe.fit_transform(X)
    assert Z.shape == (2, 2)
    raw = GroundStateTransformer(features=("E0",)).fit_transform(X)
    assert raw[0, 0] != raw[1, 0]


def test_transformer_rejects_bad_rows():
    with pytest.raises(ValueError):
        GroundStateTransformer().fit(np.array([[1.0, 0.5]]))
    with pytest.raises(ValueError):
        GroundStateTransformer().fit(np.array([[1.0, 0.5, 1.5]]))


def test_clone_preserves_parameters():
    c = clone(GroundStateTransformer(omega=0.2, features=("gap",)))
    assert c.get_params()["omega"] == 0.2 and c.get_params()["features"] == ("gap",)
    assert not hasattr(c, "feature_names_out_")


def test_phase_labels():
    X = np.array([[2.6, 1.1, 0.1], [2.6, 2.0, 0.1], [3.3, 2.0, 0.1]])
    clf = TopologicalPhaseClassifier(omega=0.5).fit(X)
    assert list(clf.predict(X)) == ["P=-1,nZ=0", "P=-1,nZ=1", "P=+1,nZ=2"]
