"""scikit-learn style wrappers around the numerical core.

Rows of ``X`` are sampled boundary functions on the midpoint grid with
``X.shape[1]`` nodes.  Hyperparameters live in ``__init__`` untouched,
fitted state carries a trailing underscore, and ``get_params`` /
``set_params`` come from ``BaseEstimator``.
"""
import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_boundary_samples, check_disk_points, check_log_modulus
from .classify import DEFAULT_EPSILON, DEFAULT_GRID, DEFAULT_T_MAX, DEFAULT_TOL, smirnov_test
from .functions import RadialSchedule, synth_outer
from .integrability import (
    DEFAULT_LEVELS,
    DEFAULT_THRESHOLDS,
    BoundarySampleFamily,
    _TailTable,
    build_gauge,
    gauge_eval,
    gauge_integrals,
    ui_verdict,
)
from .quadrature import make_grid


class VallePoussinGauge(TransformerMixin, BaseEstimator):
    """Fit a gauge ``omega`` to a uniformly integrable family; transform applies it."""

    def __init__(self, levels=DEFAULT_LEVELS):
        self.levels = levels

    def fit(self, X, y=None):
        X, grid = check_boundary_samples(X, nonnegative=True)
        family = BoundarySampleFamily(grid, X)
        self.gauge_ = build_gauge(family, self.levels)
        self.knots_ = np.array(self.gauge_.knots)
        self.integrals_ = gauge_integrals(family, self.gauge_)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "gauge_")
        return gauge_eval(self.gauge_, np.asarray(X, dtype=float))

    def score(self, X, y=None):
        """Negated worst member integral of ``omega``; at least ``-1`` on the fitted family."""
        check_is_fitted(self, "gauge_")
        X, grid = check_boundary_samples(X, nonnegative=True)
        return -float(gauge_integrals(BoundarySampleFamily(grid, X), self.gauge_).max())


class UniformIntegrabilityTest(TransformerMixin, BaseEstimator):
    """Tail-curve verdict for a family; ``transform`` gives per-member tails."""

    def __init__(self, epsilon=DEFAULT_EPSILON, t_max=DEFAULT_T_MAX,
                 n_thresholds=DEFAULT_THRESHOLDS):
        self.epsilon = epsilon
        self.t_max = t_max
        self.n_thresholds = n_thresholds

    def fit(self, X, y=None):
        X, grid = check_boundary_samples(X, nonnegative=True)
        self.report_ = ui_verdict(BoundarySampleFamily(grid, X), self.epsilon,
                                  self.t_max, self.n_thresholds)
        self.thresholds_ = self.report_.thresholds
        self.tail_sup_ = self.report_.tail_sup
        self.verdict_ = self.report_.verdict
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        """``int_{g >= t} g dmu`` for each row and each fitted threshold."""
        check_is_fitted(self, "thresholds_")
        X, grid = check_boundary_samples(X, nonnegative=True)
        table = _TailTable(BoundarySampleFamily(grid, X))
        return np.column_stack([table.tails(t) for t in self.thresholds_])


class OuterSynthesizer(BaseEstimator):
    """Outer function from boundary log-moduli; ``predict`` evaluates it in the disk."""

    def __init__(self, c_angle=0.0):
        self.c_angle = c_angle

    def fit(self, X, y=None):
        log_rho = check_log_modulus(X)
        self.function_ = synth_outer(log_rho, np.exp(1j * self.c_angle), make_grid(log_rho.size))
        self.n_features_in_ = log_rho.size
        return self

    def predict(self, z):
        check_is_fitted(self, "function_")
        return self.function_.value(check_disk_points(z))


class SmirnovClassifier(ClassifierMixin, BaseEstimator):
    """Labels AnalyticFunction objects ``smirnov``, ``not-smirnov`` or ``inconclusive``.

    There is nothing to learn; ``fit`` only fixes the grid and radial schedule.
    """

    def __init__(self, n_grid=DEFAULT_GRID, n_radii=12, tol=DEFAULT_TOL):
        self.n_grid = n_grid
        self.n_radii = n_radii
        self.tol = tol

    def fit(self, X=None, y=None):
        self.grid_ = make_grid(self.n_grid)
        self.schedule_ = RadialSchedule.dyadic(self.n_radii)
        self.classes_ = np.array(["inconclusive", "not-smirnov", "smirnov"])
        return self

    def predict(self, functions):
        check_is_fitted(self, "grid_")
        return np.array([smirnov_test(f, self.schedule_, self.grid_, self.tol).classification
                         for f in functions])
