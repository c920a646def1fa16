"""Evaluable holomorphic functions on the unit disk.

Each variant knows four things about itself: its values and log-moduli in
the open disk, and its values and log-moduli on the circle.  The log forms
are what the classification code consumes, since functions such as
``exp((1 + z) / (1 - z))`` overflow long before their logarithms do.

Boundary values come from closed forms wherever the variant has one
(finite Blaschke products, point-mass singular inner functions, the named
closed forms, and the spectral boundary series of an outer function).  The
radial route ``f(r_K e^{i theta})`` is kept as a fallback and a cross-check.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    BoundaryEstimationError,
    EvaluationUnderflowError,
    InvalidArgumentError,
    NonIntegrableSampleError,
)
from .quadrature import TWO_PI, make_grid
from .schur import Scale

#: log of the overflow threshold 1e300
LOG_OVERFLOW = float(np.log(1e300))
UNDERFLOW = 1e-300
_TRIM_REL = 1e-16
_CHUNK = 1 << 16


@dataclass(frozen=True)
class RadialSchedule:
    """Increasing radii ``r_k`` in (0, 1) approaching 1."""

    radii: tuple

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.ndim != 1 or r.size < 2:
            raise InvalidArgumentError("a radial schedule needs at least two radii")
        if np.any(r <= 0.0) or np.any(r >= 1.0) or np.any(np.diff(r) <= 0.0):
            raise InvalidArgumentError("radii must be strictly increasing in (0, 1)")
        object.__setattr__(self, "radii", tuple(float(x) for x in r))

    @classmethod
    def dyadic(cls, K=12):
        """``r_k = 1 - 2**-k`` for ``k = 1..K``."""
        return cls(tuple(1.0 - 2.0 ** -k for k in range(1, K + 1)))

    @property
    def last(self):
        return self.radii[-1]

    def __len__(self):
        return len(self.radii)

    def __iter__(self):
        return iter(self.radii)


def _as_theta(theta):
    return np.asarray(theta, dtype=float)


def _ignore_fp():
    return np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore")


class AnalyticFunction:
    """Base class for the evaluable variants.

    Subclasses implement ``value``, ``log_abs``, ``boundary_value`` and
    ``boundary_log_abs`` on numpy arrays without domain checks; ``__call__``
    is the checked entry point.
    """

    kind = "function"
    zero_free = False

    def __call__(self, z):
        return evaluate(self, z)

    def value(self, z):
        raise NotImplementedError

    def log_abs(self, z):
        raise NotImplementedError

    def boundary_value(self, theta):
        raise NotImplementedError

    def boundary_log_abs(self, theta):
        raise NotImplementedError

    def boundary_log_abs_on(self, grid):
        """``log|f*|`` at the nodes of ``grid``."""
        return self.boundary_log_abs(grid.nodes)

    def circle_log_abs(self, r, grid):
        """``log|f(r e^{i theta_j})|`` at the nodes of ``grid``."""
        return self.log_abs(r * grid.points)

    def to_dict(self):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}<{self.kind}>"


class Constant(AnalyticFunction):
    kind = "constant"

    def __init__(self, c):
        self.c = complex(c)
        self.zero_free = self.c != 0

    def value(self, z):
        return np.full(np.shape(z), self.c, dtype=complex)

    def log_abs(self, z):
        with _ignore_fp():
            return np.full(np.shape(z), np.log(abs(self.c)))

    def boundary_value(self, theta):
        return self.value(_as_theta(theta))

    def boundary_log_abs(self, theta):
        return self.log_abs(_as_theta(theta))

    def to_dict(self):
        return {"kind": "constant", "re": self.c.real, "im": self.c.imag}


class BlaschkeProduct(AnalyticFunction):
    """``prod_k (|a_k| / a_k) (a_k - z) / (1 - conj(a_k) z)``, with ``z`` for ``a_k = 0``."""

    kind = "blaschke"

    def __init__(self, zeros):
        zeros = np.atleast_1d(np.asarray(zeros, dtype=complex))
        if np.any(np.abs(zeros) >= 1.0):
            raise InvalidArgumentError("Blaschke zeros must satisfy |a_k| < 1")
        self.zeros = zeros
        self.zero_free = zeros.size == 0

    def value(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones(z.shape, dtype=complex)
        for a in self.zeros:
            if a == 0:
                out = out * z
            else:
                # |a|/a as a pure phase, finite even for subnormal a
                out = out * np.exp(-1j * np.angle(a)) * (a - z) / (1.0 - np.conj(a) * z)
        return out

    def log_abs(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape)
        with _ignore_fp():
            for a in self.zeros:
                out += np.log(np.abs(a - z)) - np.log(np.abs(1.0 - np.conj(a) * z))
        return out

    def boundary_value(self, theta):
        return self.value(np.exp(1j * _as_theta(theta)))

    def boundary_log_abs(self, theta):
        # inner: |B*| = 1 identically on the circle
        return np.zeros(np.shape(theta))

    def to_dict(self):
        return {"kind": "blaschke", "zeros": [[a.real, a.imag] for a in self.zeros]}


def _boundary_cot(theta, alpha):
    """``cot((theta - alpha) / 2)``, NaN where the argument is a multiple of pi."""
    half = 0.5 * (_as_theta(theta) - alpha)
    s = np.sin(half)
    with _ignore_fp():
        out = np.cos(half) / s
    return np.where(s == 0.0, np.nan, out)


class SingularInner(AnalyticFunction):
    """``exp(-sum_i m_i (e^{i a_i} + z) / (e^{i a_i} - z))`` for point masses ``(a_i, m_i)``."""

    kind = "singular_inner"
    zero_free = True

    def __init__(self, masses):
        masses = [(float(a), float(m)) for a, m in masses]
        if any(m < 0 for _, m in masses):
            raise InvalidArgumentError("singular masses must be nonnegative")
        self.masses = masses

    def _exponent(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros(z.shape, dtype=complex)
        for a, m in self.masses:
            e = np.exp(1j * a)
            acc += m * (e + z) / (e - z)
        return -acc

    def value(self, z):
        return np.exp(self._exponent(z))

    def log_abs(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros(z.shape)
        for a, m in self.masses:
            d = np.exp(1j * a) - z
            acc += m * (1.0 - np.abs(z) ** 2) / (d.real ** 2 + d.imag ** 2)
        return -acc

    def boundary_value(self, theta):
        theta = _as_theta(theta)
        phase = np.zeros(theta.shape)
        for a, m in self.masses:
            phase = phase - m * _boundary_cot(theta, a)
        return np.exp(1j * phase)

    def boundary_log_abs(self, theta):
        theta = _as_theta(theta)
        out = np.zeros(theta.shape)
        for a, m in self.masses:
            if m > 0:
                out[np.isnan(_boundary_cot(theta, a))] = np.nan
        return out

    def to_dict(self):
        return {"kind": "singular_inner", "masses": [[a, m] for a, m in self.masses]}


CLOSED_FORMS = ("identity", "one_minus_z", "exp", "exp_cayley")


class ClosedForm(AnalyticFunction):
    """Named closed forms ``z``, ``1 - z``, ``e^z``, ``exp((1+z)/(1-z))`` and their reciprocals."""

    kind = "closed_form"

    def __init__(self, name, reciprocal=False):
        if name not in CLOSED_FORMS:
            raise InvalidArgumentError(f"unknown closed form {name!r}")
        if name == "identity" and reciprocal:
            raise InvalidArgumentError("1/z is not holomorphic on the disk")
        self.name = name
        self.reciprocal = bool(reciprocal)
        self.zero_free = name != "identity"

    def _log_value(self, z):
        # principal logs are fine here: only the real part and exp() are used
        z = np.asarray(z, dtype=complex)
        with _ignore_fp():
            if self.name == "identity":
                out = np.log(z)
            elif self.name == "one_minus_z":
                out = np.log(1.0 - z)
            elif self.name == "exp":
                out = z
            else:
                out = (1.0 + z) / (1.0 - z)
        return -out if self.reciprocal else out

    def value(self, z):
        z = np.asarray(z, dtype=complex)
        with _ignore_fp():
            if self.name == "identity":
                return z.copy()
            if self.name == "one_minus_z":
                v = 1.0 - z
                return 1.0 / v if self.reciprocal else v
            return np.exp(self._log_value(z))

    def log_abs(self, z):
        z = np.asarray(z, dtype=complex)
        with _ignore_fp():
            if self.name == "identity":
                out = np.log(np.abs(z))
            elif self.name == "one_minus_z":
                out = np.log(np.abs(1.0 - z))
            elif self.name == "exp":
                out = z.real
            else:
                d = 1.0 - z
                out = (1.0 - np.abs(z) ** 2) / (d.real ** 2 + d.imag ** 2)
        return -out if self.reciprocal else out

    def boundary_value(self, theta):
        theta = _as_theta(theta)
        if self.name == "exp_cayley":
            # (1 + e^{it}) / (1 - e^{it}) = i cot(t / 2) on the circle
            phase = _boundary_cot(theta, 0.0)
            return np.exp(-1j * phase if self.reciprocal else 1j * phase)
        return self.value(np.exp(1j * theta))

    def boundary_log_abs(self, theta):
        theta = _as_theta(theta)
        with _ignore_fp():
            if self.name == "identity":
                return np.zeros(theta.shape)
            if self.name == "one_minus_z":
                out = np.log(np.abs(2.0 * np.sin(0.5 * theta)))
            elif self.name == "exp":
                out = np.cos(theta)
            else:
                out = 0.0 * _boundary_cot(theta, 0.0)
        return -out if self.reciprocal else out

    def to_dict(self):
        return {"kind": "closed_form", "name": self.name, "reciprocal": self.reciprocal}


class Outer(AnalyticFunction):
    """Outer function with boundary modulus ``rho`` sampled on a midpoint grid.

    The Herglotz integral is discretized by the grid's midpoint rule. Writing
    the kernel as ``1 + 2 sum_k (z e^{-i theta})^k``, the quadrature becomes a
    power series whose coefficients are the discrete Fourier coefficients of
    ``log rho``; the series is kept up to the Nyquist index, which is the
    Herglotz integral of the trigonometric interpolant of ``log rho``.  It
    agrees with direct kernel summation in the interior (see ``direct_log``)
    and, unlike it, stays accurate up to the circle.
    """

    kind = "outer"
    zero_free = True

    def __init__(self, log_rho, c_angle=0.0):
        log_rho = np.array(log_rho, dtype=float)
        if log_rho.ndim != 1:
            raise InvalidArgumentError("log_rho must be one-dimensional")
        if not np.all(np.isfinite(log_rho)):
            raise NonIntegrableSampleError("log rho samples must be finite")
        self.grid = make_grid(log_rho.size)
        log_rho.setflags(write=False)
        self.log_rho = log_rho
        self.c_angle = float(c_angle)
        self.c = np.exp(1j * self.c_angle)
        self.coefficients = _herglotz_coefficients(log_rho)

    def series(self, z):
        """Quadrature of the Herglotz integral at ``z`` (``|z| <= 1``)."""
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex),
                                                self.coefficients)

    def direct_log(self, z):
        """Explicit kernel sum ``sum_j w_j H(theta_j, z) log rho_j / 2pi``, interior only."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        e = self.grid.points
        out = np.empty(z.shape, dtype=complex)
        flat = z.ravel()
        res = out.ravel()
        step = max(1, _CHUNK // self.grid.size)
        for i in range(0, flat.size, step):
            zz = flat[i:i + step, None]
            res[i:i + step] = ((e + zz) / (e - zz)) @ self.log_rho / self.grid.size
        return out.reshape(z.shape)

    def value(self, z):
        with _ignore_fp():
            return self.c * np.exp(self.series(z))

    def log_abs(self, z):
        return self.series(z).real

    def _node_index(self, theta):
        N = self.grid.size
        pos = np.mod(theta, TWO_PI) * N / TWO_PI - 0.5
        idx = np.rint(pos)
        hit = np.abs(pos - idx) < 1e-9
        return hit, np.mod(idx.astype(int), N)

    def boundary_log_abs(self, theta):
        theta = _as_theta(theta)
        out = np.asarray(self.series(np.exp(1j * theta)).real, dtype=float)
        hit, idx = self._node_index(theta)
        return np.where(hit, self.log_rho[idx], out)

    def boundary_value(self, theta):
        theta = _as_theta(theta)
        s = self.series(np.exp(1j * theta))
        with _ignore_fp():
            return self.c * np.exp(self.boundary_log_abs(theta) + 1j * s.imag)

    def boundary_log_abs_on(self, grid):
        if grid.size == self.grid.size:
            return self.log_rho.copy()
        return self.boundary_log_abs(grid.nodes)

    def circle_log_abs(self, r, grid):
        M = grid.size
        K = self.coefficients.size
        if K > M:
            return super().circle_log_abs(r, grid)
        # midpoint nodes: e^{ik theta_j} = e^{i pi k / M} e^{2 pi i jk / M}
        k = np.arange(K)
        b = np.zeros(M, dtype=complex)
        with _ignore_fp():
            b[:K] = self.coefficients * r ** k * np.exp(1j * np.pi * k / M)
        return (M * np.fft.ifft(b)).real

    def to_dict(self):
        return {"kind": "outer", "c_angle": self.c_angle,
                "log_rho": [float(x) for x in self.log_rho]}


def _herglotz_coefficients(log_rho):
    N = log_rho.size
    k = np.arange(N // 2 + 1)
    a = np.fft.rfft(log_rho) / N * np.exp(-1j * np.pi * k / N)
    coeffs = 2.0 * a
    coeffs[0] = a[0].real
    if N % 2 == 0:
        coeffs[-1] = a[-1]
    scale = np.sum(np.abs(coeffs))
    keep = np.nonzero(np.abs(coeffs) > _TRIM_REL * max(scale, 1e-300))[0]
    last = int(keep[-1]) + 1 if keep.size else 1
    return coeffs[:last].copy()


class Quotient(AnalyticFunction):
    kind = "quotient"

    def __init__(self, numerator, denominator):
        if not denominator.zero_free:
            raise InvalidArgumentError(
                "quotient denominators must be structurally zero-free"
            )
        self.numerator = numerator
        self.denominator = denominator
        self.zero_free = numerator.zero_free

    def value(self, z):
        d = self.denominator.value(z)
        if np.any(np.abs(d) < UNDERFLOW):
            raise EvaluationUnderflowError("quotient denominator underflowed")
        with _ignore_fp():
            return self.numerator.value(z) / d

    def log_abs(self, z):
        return self.numerator.log_abs(z) - self.denominator.log_abs(z)

    def boundary_value(self, theta):
        with _ignore_fp():
            return self.numerator.boundary_value(theta) / self.denominator.boundary_value(theta)

    def boundary_log_abs(self, theta):
        return self.numerator.boundary_log_abs(theta) - self.denominator.boundary_log_abs(theta)

    def boundary_log_abs_on(self, grid):
        return (self.numerator.boundary_log_abs_on(grid)
                - self.denominator.boundary_log_abs_on(grid))

    def circle_log_abs(self, r, grid):
        return self.numerator.circle_log_abs(r, grid) - self.denominator.circle_log_abs(r, grid)

    def to_dict(self):
        return {"kind": "quotient", "num": self.numerator.to_dict(),
                "den": self.denominator.to_dict()}


class Product(AnalyticFunction):
    kind = "product"

    def __init__(self, factors):
        factors = list(factors)
        if not factors:
            raise InvalidArgumentError("a product needs at least one factor")
        self.factors = factors
        self.zero_free = all(f.zero_free for f in factors)

    def value(self, z):
        out = self.factors[0].value(z)
        with _ignore_fp():
            for f in self.factors[1:]:
                out = out * f.value(z)
        return out

    def log_abs(self, z):
        return sum(f.log_abs(z) for f in self.factors)

    def boundary_value(self, theta):
        out = self.factors[0].boundary_value(theta)
        with _ignore_fp():
            for f in self.factors[1:]:
                out = out * f.boundary_value(theta)
        return out

    def boundary_log_abs(self, theta):
        return sum(f.boundary_log_abs(theta) for f in self.factors)

    def boundary_log_abs_on(self, grid):
        return sum(f.boundary_log_abs_on(grid) for f in self.factors)

    def circle_log_abs(self, r, grid):
        return sum(f.circle_log_abs(r, grid) for f in self.factors)

    def to_dict(self):
        return {"kind": "product", "factors": [f.to_dict() for f in self.factors]}


class Composition(AnalyticFunction):
    """``f o psi`` for a Schur map ``psi``.

    On the circle ``(f o psi)* = f* o psi*`` when ``psi`` is inner (it is
    then analytic across the circle), and ``f(psi*)`` otherwise, since a
    non-inner map in this package keeps the closed disk inside a smaller disk.
    """

    kind = "compose"

    def __init__(self, f, psi):
        self.f = f
        self.psi = psi
        self.zero_free = f.zero_free

    def value(self, z):
        return self.f.value(self.psi(z))

    def log_abs(self, z):
        return self.f.log_abs(self.psi(z))

    def boundary_value(self, theta):
        w = self.psi.boundary(theta)
        if self.psi.is_inner:
            return self.f.boundary_value(np.angle(w))
        return self.f.value(w)

    def boundary_log_abs(self, theta):
        w = self.psi.boundary(theta)
        if self.psi.is_inner:
            return self.f.boundary_log_abs(np.angle(w))
        return self.f.log_abs(w)

    def boundary_log_abs_on(self, grid):
        if isinstance(self.psi, Scale):
            # (f o rz)* is f on the circle of radius r
            return self.f.circle_log_abs(self.psi.r, grid)
        return self.boundary_log_abs(grid.nodes)

    def to_dict(self):
        return {"kind": "compose", "f": self.f.to_dict(), "psi": self.psi.to_dict()}


def reciprocal(f):
    """``1 / f`` for a structurally zero-free ``f``."""
    return Quotient(Constant(1.0), f)


def synth_outer(log_rho, c=1.0, grid=None):
    """Outer function with ``log|f*| = log_rho`` on ``grid`` and unimodular constant ``c``."""
    log_rho = np.asarray(log_rho, dtype=float)
    if grid is not None and grid.size != log_rho.size:
        raise InvalidArgumentError(
            f"{log_rho.size} samples given for a {grid.size}-node grid"
        )
    c = complex(c)
    if abs(abs(c) - 1.0) > 1e-12:
        raise InvalidArgumentError("the outer constant c must be unimodular")
    return Outer(log_rho, float(np.angle(c)))


def evaluate(f, z):
    """``f(z)`` for ``z`` in the open disk; scalar in, scalar out."""
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.abs(arr) < 1.0):
        raise InvalidArgumentError("evaluation points must lie in the open unit disk")
    out = f.value(arr)
    return complex(out) if out.ndim == 0 else out


def compose(f, psi):
    return Composition(f, psi)


class RadialLimit(NamedTuple):
    value: complex
    converged: bool
    divergent: bool
    method: str


def radial_limit(f, theta, schedule=None, tol=1e-6, method="auto"):
    """Estimate ``f*(e^{i theta})``.

    ``method="auto"`` returns the variant's closed-form boundary value when
    it is finite and falls back to the radial route otherwise;
    ``method="radial"`` always uses ``f(r_K e^{i theta})`` with a Cauchy
    convergence flag over the last two radii.  Overflow is reported through
    ``divergent``, never raised.
    """
    schedule = schedule or RadialSchedule.dyadic()
    theta = float(theta)
    if method == "auto":
        b = complex(f.boundary_value(np.array(theta)))
        if np.isfinite(b) and abs(b) <= 1e300:
            return RadialLimit(b, True, False, "boundary")
    elif method != "radial":
        raise InvalidArgumentError(f"unknown method {method!r}")
    r_prev, r_last = schedule.radii[-2], schedule.radii[-1]
    pts = np.array([r_prev, r_last]) * np.exp(1j * theta)
    logs = f.log_abs(pts)
    if not np.isfinite(logs[1]) and logs[1] < 0:
        return RadialLimit(0j, False, False, "radial")
    if not np.isfinite(logs[1]) or logs[1] > LOG_OVERFLOW:
        return RadialLimit(complex(np.inf), False, True, "radial")
    vals = f.value(pts)
    last = complex(vals[1])
    if logs[0] > LOG_OVERFLOW or not np.isfinite(vals[0]):
        return RadialLimit(last, False, False, "radial")
    converged = abs(last - vals[0]) <= tol * (1.0 + abs(last))
    return RadialLimit(last, bool(converged), False, "radial")


class BoundarySamples(NamedTuple):
    values: np.ndarray
    divergent: list


CLIPS = ("log", "log+", "log-")


def _clip(values, clip):
    if clip == "log":
        return values
    if clip == "log+":
        return np.maximum(values, 0.0)
    if clip == "log-":
        return np.maximum(-values, 0.0)
    raise InvalidArgumentError(f"clip must be one of {CLIPS}, got {clip!r}")


def boundary_log_modulus(f, grid, schedule=None, clip="log", method="auto",
                         max_divergent_fraction=0.01):
    """``log|f*|`` at every node of ``grid``, optionally clipped to log+ or log-.

    Nodes whose boundary log-modulus is non-finite are listed in
    ``divergent`` and filled with the last radial iterate (capped at
    ``log 1e300``).  More than ``max_divergent_fraction`` of such nodes
    raises ``BoundaryEstimationError``.
    """
    schedule = schedule or RadialSchedule.dyadic()
    if clip not in CLIPS:
        raise InvalidArgumentError(f"clip must be one of {CLIPS}, got {clip!r}")
    with _ignore_fp():
        if method == "auto":
            values = np.array(f.boundary_log_abs_on(grid), dtype=float)
        elif method == "radial":
            values = np.array(f.circle_log_abs(schedule.last, grid), dtype=float)
        else:
            raise InvalidArgumentError(f"unknown method {method!r}")
    # log-moduli are stored directly, so |f*| overflowing 1e300 is still data
    bad = ~np.isfinite(values)
    divergent = [int(j) for j in np.nonzero(bad)[0]]
    if len(divergent) > max_divergent_fraction * grid.size:
        raise BoundaryEstimationError(
            f"{len(divergent)} of {grid.size} boundary nodes diverged"
        )
    if divergent:
        with _ignore_fp():
            pts = schedule.last * grid.points[bad]
            fill = np.asarray(f.log_abs(pts), dtype=float)
        fill = np.where(np.isnan(fill), 0.0, fill)
        values[bad] = np.clip(fill, -LOG_OVERFLOW, LOG_OVERFLOW)
    return BoundarySamples(_clip(values, clip), divergent)
