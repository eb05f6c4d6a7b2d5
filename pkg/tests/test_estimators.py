import warnings

import numpy as np
import pytest
from sklearn.base import clone

from amdyn import empirical_stationary, from_resonance
from amdyn.errors import NonconvergenceWarning, ParameterOutOfRange
from amdyn.estimators import LocalDimensionEstimator, StationaryMeasureEstimator


def test_params_and_clone():
    est = StationaryMeasureEstimator(a_minus=2 / 3, b_minus=2, a_plus=2 / 3, b_plus=2, seed=4)
    c = clone(est)
    assert c.get_params() == est.get_params()
    c.set_params(method="orbit", samples=1000)
    assert c.method == "orbit" and est.method == "transfer"


def test_transfer_border_is_uniform():
    est = StationaryMeasureEstimator(2 / 3, 2, 2 / 3, 2).fit()
    assert est.converged_ and est.n_iter_ == 0
    x = np.linspace(0, 1, 11)
    assert est.transform(x) == pytest.approx(x, abs=1e-12)


def test_orbit_method_and_score():
    kw = dict(a_minus=0.5, b_minus=5, a_plus=0.5, b_plus=5)
    orb = StationaryMeasureEstimator(**kw, method="orbit", samples=200_000).fit()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonconvergenceWarning)
        ces = StationaryMeasureEstimator(**kw, method="cesaro", max_iter=60).fit()
    assert -ces.score(orb) < 0.02
    assert orb.transform([0.0, 1.0]).tolist() == [0.0, 1.0]


def test_bad_inputs():
    with pytest.raises(ParameterOutOfRange):
        StationaryMeasureEstimator(method="nope").fit()
    with pytest.raises(ParameterOutOfRange):
        StationaryMeasureEstimator(p_minus=1.5).fit()
    est = StationaryMeasureEstimator(2 / 3, 2, 2 / 3, 2).fit()
    with pytest.raises(ParameterOutOfRange):
        est.transform([1.5])


def test_local_dimension_estimator():
    xs = empirical_stationary(from_resonance(0.5, 2, 1), 0.5, 1000, 300_000, 10, seed=2).samples
    est = LocalDimensionEstimator(centers=1000).fit(xs)
    assert est.predict() == pytest.approx(0.694, abs=0.06)
    assert est.log_masses_.shape == (1000, 12)
    assert LocalDimensionEstimator(centers=1000).fit(xs.reshape(-1, 1)).dimension_ == est.dimension_
