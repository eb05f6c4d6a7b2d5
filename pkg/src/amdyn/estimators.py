"""scikit-learn style front ends for the two estimation tasks that fit the fit/transform mould."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .core import new_system
from .measure import (empirical_stationary, iterate_to_stationary, kolmogorov_distance,
                      local_dimension_estimate)
from .errors import ParameterOutOfRange


class StationaryMeasureEstimator(TransformerMixin, BaseEstimator):
    """Estimate the stationary measure of an AM-system.

    fit() ignores X; transform(X) maps points to their stationary CDF values,
    which is the probability integral transform of the fitted measure.
    """

    def __init__(self, a_minus=0.5, b_minus=4.0, a_plus=0.5, b_plus=4.0, p_minus=0.5,
                 method="transfer", max_iter=200, tol=1e-10, samples=100_000, burn_in=1000,
                 bins=100, seed=0):
        self.a_minus = a_minus
        self.b_minus = b_minus
        self.a_plus = a_plus
        self.b_plus = b_plus
        self.p_minus = p_minus
        self.method = method
        self.max_iter = max_iter
        self.tol = tol
        self.samples = samples
        self.burn_in = burn_in
        self.bins = bins
        self.seed = seed

    def fit(self, X=None, y=None):
        system = new_system(self.a_minus, self.b_minus, self.a_plus, self.b_plus)
        if not 0 < self.p_minus < 1:
            raise ParameterOutOfRange("p_minus must lie in (0, 1)")
        if self.method in ("transfer", "cesaro"):
            mode = "direct" if self.method == "transfer" else "cesaro"
            est = iterate_to_stationary(system, self.p_minus, max_iter=self.max_iter,
                                        tol=self.tol, mode=mode)
            self.measure_ = est.density
            self.converged_ = est.converged
            self.n_iter_ = est.iterations
            self.distance_ = est.distance
        elif self.method == "orbit":
            self.measure_ = empirical_stationary(system, self.p_minus, self.burn_in,
                                                 self.samples, self.bins, self.seed)
            self.converged_ = True
            self.n_iter_ = self.samples
            self.distance_ = float("nan")
        else:
            raise ParameterOutOfRange(f"unknown method {self.method!r}")
        self.system_ = system
        return self

    def _cdf(self, x):
        m = self.measure_
        if hasattr(m, "samples") and m.samples is not None:
            xs = np.sort(m.samples)
            return np.searchsorted(xs, x, side="right") / len(xs)
        return m.cdf(x)

    def transform(self, X):
        check_is_fitted(self, "measure_")
        X = check_array(X, ensure_2d=False, dtype=float)
        if np.any((X < 0) | (X > 1)):
            raise ParameterOutOfRange("points must lie in [0, 1]")
        return self._cdf(X)

    def score(self, X, y=None):
        """Negative Kolmogorov distance to another fitted estimator or measure in X."""
        check_is_fitted(self, "measure_")
        other = X.measure_ if isinstance(X, StationaryMeasureEstimator) else X
        return -kolmogorov_distance(self.measure_, other)


class LocalDimensionEstimator(BaseEstimator):
    """Mean local dimension of a point cloud on [0, 1] from ball-mass scaling."""

    def __init__(self, radii=None, centers=2000, seed=0):
        self.radii = radii
        self.centers = centers
        self.seed = seed

    def fit(self, X, y=None):
        X = check_array(X, ensure_2d=False, dtype=float)
        if X.ndim != 1:
            X = X.ravel()
        self.dimension_, self.log_masses_ = local_dimension_estimate(
            X, self.radii, self.centers, self.seed, return_details=True)
        return self

    def predict(self, X=None):
        check_is_fitted(self, "dimension_")
        return self.dimension_
