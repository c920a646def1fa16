"""Input checks shared by the estimator wrappers."""
import numpy as np
from sklearn.utils import check_array

from .errors import InvalidArgumentError, NonIntegrableSampleError
from .quadrature import make_grid


def check_boundary_samples(X, nonnegative=False):
    """2-D float array, one sampled member per row on a midpoint grid."""
    try:
        X = check_array(X, dtype=np.float64, ensure_all_finite=True,
                        ensure_min_features=4)
    except ValueError as exc:
        if "NaN" in str(exc) or "infinity" in str(exc):
            raise NonIntegrableSampleError(str(exc)) from exc
        raise InvalidArgumentError(str(exc)) from exc
    if nonnegative and np.any(X < 0):
        raise InvalidArgumentError("samples must be nonnegative")
    return X, make_grid(X.shape[1])


def check_log_modulus(y):
    """1-D finite float array of boundary log-moduli; a single row is accepted."""
    y = np.asarray(y, dtype=float)
    if y.ndim == 2 and y.shape[0] == 1:
        y = y[0]
    if y.ndim != 1 or y.size < 4:
        raise InvalidArgumentError("expected a 1-D vector of at least 4 log-moduli")
    if not np.all(np.isfinite(y)):
        raise NonIntegrableSampleError("log-moduli must be finite")
    return y


def check_disk_points(z):
    """Complex array strictly inside the unit disk."""
    z = np.asarray(z)
    if z.dtype.kind not in "biufc":
        raise InvalidArgumentError(f"expected numeric points, got dtype {z.dtype}")
    z = z.astype(complex)
    if not np.all(np.isfinite(z)):
        raise InvalidArgumentError("points must be finite")
    if not np.all(np.abs(z) < 1.0):
        raise InvalidArgumentError("points must lie in the open unit disk")
    return z
