"""Uniform integrability of sampled boundary families.

A family ``G`` is uniformly integrable when

    T(t) = sup_{g in G} int_{|g| >= t} |g| dmu  ->  0   as t -> infinity,

with ``dmu = dtheta / 2pi`` on the circle.  The de la Vallee Poussin gauge
``omega(t) = sum_n (t - t_n)^+`` turns this into the single bound
``sup_g int omega(|g|) dmu <= 1`` and back again.

Families here are finite samples of the continua the theory quantifies
over, so a "not" verdict is conclusive only for the sample and a
"uniformly-integrable" verdict is evidence, never proof.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BoundUnavailableError,
    GaugeUnavailableError,
    InvalidArgumentError,
    InvariantViolationError,
    NonIntegrableSampleError,
)
from .quadrature import TWO_PI

UI = "uniformly-integrable"
NOT_UI = "not"
INCONCLUSIVE = "inconclusive"

DEFAULT_LEVELS = 20
SEARCH_BITS = 20
DEFAULT_THRESHOLDS = 100
DEFAULT_T_MAX = 20.0


@dataclass(frozen=True, eq=False)
class BoundarySampleFamily:
    """Real sample vectors on a shared grid, one row per member."""

    grid: object
    members: np.ndarray = field(repr=False)
    labels: tuple = ()
    nonnegative: bool = True

    def __post_init__(self):
        m = np.array(self.members, dtype=float, ndmin=2)
        if m.size == 0:
            m = m.reshape(0, self.grid.size)
        if m.ndim != 2 or m.shape[1] != self.grid.size:
            raise InvalidArgumentError(
                f"members must have shape (n, {self.grid.size}), got {m.shape}"
            )
        if not np.all(np.isfinite(m)):
            raise NonIntegrableSampleError("family members contain non-finite samples")
        if self.nonnegative and np.any(m < 0):
            raise InvalidArgumentError("log+ families must be nonnegative")
        m.setflags(write=False)
        object.__setattr__(self, "members", m)
        labels = tuple(self.labels) or tuple(f"g#{i}" for i in range(m.shape[0]))
        if len(labels) != m.shape[0]:
            raise InvalidArgumentError("one label per member is required")
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return self.members.shape[0]

    @property
    def max_value(self):
        return float(self.members.max()) if len(self) else 0.0

    def means(self):
        return self.members @ self.grid.weights / TWO_PI


class _TailTable:
    """Sorted members with suffix sums, so each tail costs one binary search."""

    def __init__(self, family):
        w = family.grid.weights / TWO_PI
        order = np.argsort(family.members, axis=1, kind="stable")
        self.values = np.take_along_axis(family.members, order, axis=1)
        mass = self.values * w[order]
        # suffix[i, k] = sum of mass[i, k:]
        self.suffix = np.concatenate(
            [np.cumsum(mass[:, ::-1], axis=1)[:, ::-1],
             np.zeros((mass.shape[0], 1))], axis=1)
        self.rows = np.arange(mass.shape[0])

    def tails(self, t):
        """Per-member ``int_{g >= t} g dmu``."""
        idx = np.array([np.searchsorted(v, t, side="left") for v in self.values])
        return self.suffix[self.rows, idx]

    def sup(self, t):
        return float(self.tails(t).max())


def tail_function(family, t):
    """``T(t) = max_g circle_mean(g * 1{g >= t})`` over the sampled family."""
    if len(family) == 0:
        raise InvalidArgumentError("tail of an empty family is undefined")
    if t < 0:
        raise InvalidArgumentError("threshold must be nonnegative")
    return _TailTable(family).sup(t)


@dataclass(frozen=True, eq=False)
class UIReport:
    thresholds: np.ndarray
    tail_sup: np.ndarray
    verdict: str
    epsilon: float
    t_max: float
    size: int = 0
    note: str = "sample-relative: a finite family only evidences uniform integrability"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "epsilon": self.epsilon,
            "t_max": self.t_max,
            "family_size": self.size,
            "thresholds": [float(t) for t in self.thresholds],
            "tail_sup": [float(v) for v in self.tail_sup],
            "note": self.note,
        }


def tail_curve(family, thresholds):
    if len(family) == 0:
        raise InvalidArgumentError("tail of an empty family is undefined")
    table = _TailTable(family)
    return np.array([table.sup(t) for t in thresholds])


def ui_verdict(family, epsilon, t_max, n_thresholds=DEFAULT_THRESHOLDS):
    """Tail curve on ``linspace(0, t_max, n_thresholds)`` and a verdict.

    ``uniformly-integrable`` if ``T(t) <= epsilon`` somewhere on the grid;
    ``not`` if over the top half of the grid ``T`` stays above ``epsilon``
    and varies by at most ``epsilon / 10``; ``inconclusive`` otherwise.
    """
    if epsilon <= 0:
        raise InvalidArgumentError("epsilon must be positive")
    if t_max <= 0:
        raise InvalidArgumentError("t_max must be positive")
    thresholds = np.linspace(0.0, float(t_max), int(n_thresholds))
    T = tail_curve(family, thresholds)
    top = T[len(T) // 2:]
    if np.any(T <= epsilon):
        verdict = UI
    elif top.min() > epsilon and top.max() - top.min() <= epsilon / 10.0:
        verdict = NOT_UI
    else:
        verdict = INCONCLUSIVE
    return UIReport(thresholds, T, verdict, float(epsilon), float(t_max), len(family))


@dataclass(frozen=True)
class Gauge:
    """Convex increasing ``omega(t) = sum_n (t - t_n)^+``, zero for ``t <= t_1``.

    Only finitely many knots are stored, so ``omega(t) / t`` tends to the
    number of knots rather than to infinity.
    """

    knots: tuple

    def __post_init__(self):
        k = np.asarray(self.knots, dtype=float)
        if k.ndim != 1 or k.size == 0:
            raise InvalidArgumentError("a gauge needs at least one knot")
        if np.any(k <= 0) or np.any(np.diff(k) <= 0):
            raise InvalidArgumentError("knots must be positive and strictly increasing")
        object.__setattr__(self, "knots", tuple(float(x) for x in k))

    def __call__(self, t):
        return gauge_eval(self, t)

    @property
    def levels(self):
        return len(self.knots)


def gauge_eval(gauge, t):
    """Piecewise-linear ``omega(t) = n(t) t - (t_1 + ... + t_n(t))``, ``n(t) = #{t_k < t}``."""
    t = np.asarray(t, dtype=float)
    knots = np.asarray(gauge.knots)
    prefix = np.concatenate([[0.0], np.cumsum(knots)])
    n = np.searchsorted(knots, t, side="left")
    # rounding in n t - prefix can dip a hair below zero right past a knot
    out = np.maximum(n * t - prefix[n], 0.0)
    return out[()] if out.ndim == 0 else out


def gauge_integrals(family, gauge):
    """``circle_mean(omega(g))`` for each member ``g``."""
    return gauge_eval(gauge, family.members) @ family.grid.weights / TWO_PI


def build_gauge(family, levels=DEFAULT_LEVELS, t_max=DEFAULT_T_MAX):
    """Knots ``t_1 < ... < t_L`` with ``T(t_n) <= 2**-n``.

    Each ``t_n`` is the smallest point of a ``2**-20``-resolution grid on
    ``[0, 1 + 2 max g]`` whose tail is at most ``2**-n``, bumped one grid step
    when needed to keep the knots strictly increasing.  The resulting gauge
    satisfies ``sup_g circle_mean(omega(g)) <= sum_n 2**-n < 1``.

    The family must first pass ``ui_verdict`` at ``epsilon = 2**-L`` on
    ``[0, t_max]``.  The knot search range alone would not do: a finite
    sample's tail always vanishes past its largest value.
    """
    if len(family) == 0:
        raise InvalidArgumentError("cannot build a gauge for an empty family")
    if not family.nonnegative:
        raise InvalidArgumentError("gauges are built from nonnegative families")
    levels = int(levels)
    if levels < 1:
        raise InvalidArgumentError("levels must be >= 1")
    report = ui_verdict(family, 2.0 ** -levels, t_max)
    if report.verdict != UI:
        raise GaugeUnavailableError(
            f"tail stays above 2**-{levels} on [0, {t_max}]: not uniformly integrable"
        )
    t_max = 1.0 + 2.0 * family.max_value
    table = _TailTable(family)
    cells = 2 ** SEARCH_BITS
    step = t_max / cells
    knots = []
    prev = 0
    for n in range(1, levels + 1):
        target = 2.0 ** -n
        if table.sup(cells * step) > target:
            raise GaugeUnavailableError(f"tail never drops below 2**-{n} on [0, {t_max}]")
        lo, hi = prev, cells  # invariant: tail(hi) <= target
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if table.sup(mid * step) <= target:
                hi = mid
            else:
                lo = mid
        k = max(hi, prev + 1)
        knots.append(k * step)
        prev = k
    gauge = Gauge(tuple(knots))
    worst = float(gauge_integrals(family, gauge).max())
    if worst > 1.0 + 1e-12:
        raise InvariantViolationError(f"gauge integral {worst} exceeds 1")
    return gauge


def gauge_implies_ui(family, gauge, t):
    """Bound ``eps(t) * M`` on the tail ``T(t)`` implied by the gauge.

    ``eps(t) = sup_{s >= t} s / omega(s)``, which equals ``t / omega(t)``
    because ``s / omega(s)`` is nonincreasing past the first knot, and
    ``M = sup_g circle_mean(omega(g))``.  ``t`` may be an array; the bound is
    checked against the measured tail at every entry.
    """
    if len(family) == 0:
        raise InvalidArgumentError("empty family")
    t = np.asarray(t, dtype=float)
    w = np.asarray(gauge_eval(gauge, t))
    if np.any(w <= 0.0):
        bad = float(t.ravel()[np.argmax(w.ravel() <= 0.0)])
        raise BoundUnavailableError(f"omega vanishes at t={bad}: need a knot below t")
    M = float(gauge_integrals(family, gauge).max())
    bound = t / w * M
    table = _TailTable(family)
    tails = np.array([table.sup(x) for x in t.ravel()]).reshape(t.shape)
    over = tails > bound * (1.0 + 1e-12) + 1e-15
    if np.any(over):
        i = int(np.argmax(over.ravel()))
        raise InvariantViolationError(
            f"tail {tails.ravel()[i]} exceeds gauge bound {bound.ravel()[i]} at t={t.ravel()[i]}"
        )
    return float(bound) if bound.ndim == 0 else bound
