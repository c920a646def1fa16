"""Smirnov and outer classification plus the composition-theorem harness.

Two independent routes decide membership of ``f`` in the Smirnov class:

* the limit route compares ``lim_{r->1} mean log+|f(r e^{it})|`` with
  ``mean log+|f*|`` (``smirnov_test``);
* the integrability route asks whether ``{log+|f_r*|}`` is uniformly
  integrable (``ui_smirnov_test``).

The harness then checks the composition statements: for ``f`` in the
Smirnov class the family ``{log+|(f o psi)*| : psi in S_a}`` is uniformly
integrable, and for outer ``f`` so is ``{log|(f o psi)*|}``.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import FactorizationUnavailableError, InvalidArgumentError
from .functions import (
    Quotient,
    RadialSchedule,
    boundary_log_modulus,
    compose,
    reciprocal,
    synth_outer,
)
from .integrability import (
    INCONCLUSIVE,
    NOT_UI,
    UI,
    DEFAULT_T_MAX,
    BoundarySampleFamily,
    gauge_eval,
    ui_verdict,
)
from .quadrature import TWO_PI, circle_mean, make_grid, poisson_kernel, resolving_grid
from .schur import Scale, sample_family

DEFAULT_GRID = 4096
DEFAULT_TOL = 5e-3
DEFAULT_EPSILON = 0.25
MONOTONE_SLACK = 1e-9

SMIRNOV = "smirnov"
NOT_SMIRNOV = "not-smirnov"
OUTER = "outer"
NOT_OUTER = "not-outer"

_VERDICT_OF_UI = {UI: SMIRNOV, NOT_UI: NOT_SMIRNOV, INCONCLUSIVE: INCONCLUSIVE}


def _defaults(grid, schedule):
    return grid or make_grid(DEFAULT_GRID), schedule or RadialSchedule.dyadic()


def _log_plus(values):
    return np.maximum(values, 0.0)


@dataclass(frozen=True)
class SmirnovVerdict:
    interior_integrals: tuple
    interior_limit: float
    boundary_integral: float
    gap: float
    classification: str
    tolerance: float
    plateau: bool
    monotone: bool
    divergent_nodes: int = 0
    note: str = "plateau detection is heuristic: no convergence rate is known"

    def to_dict(self):
        return {
            "classification": self.classification,
            "interior_integrals": [[r, i] for r, i in self.interior_integrals],
            "interior_limit": self.interior_limit,
            "boundary_integral": self.boundary_integral,
            "gap": self.gap,
            "tolerance": self.tolerance,
            "plateau": self.plateau,
            "monotone": self.monotone,
            "divergent_nodes": self.divergent_nodes,
            "note": self.note,
        }


def interior_means(f, schedule, grid, clip=_log_plus):
    """``(r, mean clip(log|f(r e^{it})|))`` for each scheduled radius.

    Each circle is sampled on a refinement of ``grid`` fine enough for its
    radius (see ``resolving_grid``).
    """
    out = []
    for r in schedule:
        g = resolving_grid(grid, r)
        out.append((r, float(circle_mean(clip(f.circle_log_abs(r, g)), g))))
    return tuple(out)


def smirnov_test(f, schedule=None, grid=None, tol=DEFAULT_TOL):
    """Compare ``lim_r mean log+|f_r|`` with ``mean log+|f*|``.

    ``smirnov`` when the gap is within ``tol``; ``not-smirnov`` when it
    exceeds ``3 tol`` and the interior means are monotone and have
    plateaued (last two within ``tol``); ``inconclusive`` otherwise.
    """
    grid, schedule = _defaults(grid, schedule)
    interior = interior_means(f, schedule, grid)
    boundary = boundary_log_modulus(f, grid, schedule, clip="log+")
    b = float(circle_mean(boundary.values, grid))
    values = np.array([i for _, i in interior])
    limit = float(values[-1])
    gap = limit - b
    scale = max(1.0, float(np.abs(values).max()))
    monotone = bool(np.all(np.diff(values) >= -MONOTONE_SLACK * scale))
    plateau = bool(abs(values[-1] - values[-2]) <= tol)
    if abs(gap) <= tol:
        label = SMIRNOV
    elif gap > 3 * tol and monotone and plateau:
        label = NOT_SMIRNOV
    else:
        label = INCONCLUSIVE
    return SmirnovVerdict(interior, limit, b, gap, label, tol, plateau, monotone,
                          len(boundary.divergent))


def radial_family(f, schedule=None, grid=None, clip="log+"):
    """``{clip log|f_r*| : r in schedule}`` on a grid resolving the last radius."""
    grid, schedule = _defaults(grid, schedule)
    fine = resolving_grid(grid, schedule.last)
    rows = []
    for r in schedule:
        v = f.circle_log_abs(r, fine)
        rows.append(_log_plus(v) if clip == "log+" else _log_plus(-v))
    labels = tuple(f"r={r:.8g}" for r in schedule)
    return BoundarySampleFamily(fine, np.array(rows), labels)


def ui_smirnov_test(f, schedule=None, grid=None, epsilon=DEFAULT_EPSILON,
                    t_max=DEFAULT_T_MAX):
    """Uniform-integrability verdict for ``{log+|f_r*| : r in schedule}``."""
    return ui_verdict(radial_family(f, schedule, grid), epsilon, t_max)


def agreement(smirnov, ui_report):
    """True when the limit and the integrability routes give the same answer."""
    return _VERDICT_OF_UI[ui_report.verdict] == smirnov.classification


@dataclass(frozen=True)
class OuterVerdict:
    smirnov_f: SmirnovVerdict
    smirnov_recip: SmirnovVerdict
    mean_value_gap: float
    classification: str
    tolerance: float

    def to_dict(self):
        return {
            "classification": self.classification,
            "mean_value_gap": self.mean_value_gap,
            "tolerance": self.tolerance,
            "smirnov_f": self.smirnov_f.to_dict(),
            "smirnov_recip": self.smirnov_recip.to_dict(),
        }


def mean_value_gap(f, grid, schedule=None):
    """``|log|f(0)| - mean log|f*||``; zero for outer functions."""
    signed = boundary_log_modulus(f, grid, schedule, clip="log").values
    return abs(float(f.log_abs(np.zeros(1))[0]) - float(circle_mean(signed, grid)))


def outer_test(f, schedule=None, grid=None, tol=DEFAULT_TOL):
    """A zero-free ``f`` is outer iff ``f`` and ``1/f`` are both Smirnov.

    The mean-value identity ``log|f(0)| = mean log|f*|`` is checked as well.
    """
    if not f.zero_free:
        raise InvalidArgumentError("outer_test needs a structurally zero-free function")
    grid, schedule = _defaults(grid, schedule)
    sf = smirnov_test(f, schedule, grid, tol)
    sr = smirnov_test(reciprocal(f), schedule, grid, tol)
    gap = mean_value_gap(f, grid, schedule)
    subs = (sf.classification, sr.classification)
    if subs == (SMIRNOV, SMIRNOV) and gap <= tol:
        label = OUTER
    elif NOT_SMIRNOV in subs or gap > 3 * tol:
        label = NOT_OUTER
    else:
        label = INCONCLUSIVE
    return OuterVerdict(sf, sr, gap, label, tol)


def probe_points(n=50, r_min=0.1, r_max=0.9):
    """Deterministic probes on a golden-angle spiral inside the disk."""
    j = np.arange(n)
    radii = r_min + (r_max - r_min) * (j + 0.5) / n
    golden = np.pi * (3.0 - np.sqrt(5.0))
    return radii * np.exp(1j * golden * j)


@dataclass(frozen=True, eq=False)
class Factorization:
    inner: object
    outer: object
    probes: np.ndarray = field(repr=False)
    inner_moduli: np.ndarray = field(repr=False)
    boundary_inner_error: float
    inner_bound_ok: bool
    boundary_unimodular_ok: bool

    def reconstruction_error(self, z):
        """``max |inner(z) outer(z) - f(z)| / (1 + |f(z)|)``."""
        f = self.inner.numerator
        fz = f.value(z)
        got = self.inner.value(z) * self.outer.value(z)
        return float(np.max(np.abs(got - fz) / (1.0 + np.abs(fz))))


def factorize(f, grid=None, schedule=None, tol=DEFAULT_TOL, n_probes=50):
    """Split a Smirnov-class ``f`` as ``inner * outer``.

    The outer part is synthesized from ``log|f*|``; its unimodular constant
    is fixed so that the inner part is real and positive at the probe where
    ``|f|`` is largest.
    """
    grid, schedule = _defaults(grid, schedule)
    verdict = smirnov_test(f, schedule, grid, tol)
    if verdict.classification != SMIRNOV:
        raise FactorizationUnavailableError(
            f"f is {verdict.classification}; inner-outer factorization needs the Smirnov class"
        )
    log_rho = boundary_log_modulus(f, grid, schedule, clip="log").values
    probes = probe_points(n_probes)
    fz = f.value(probes)
    # nudge probes that sit on zeros of f
    for _ in range(8):
        hit = np.abs(fz) == 0
        if not hit.any():
            break
        probes = np.where(hit, probes * (1.0 + 1e-3) + 1e-3j, probes)
        fz = f.value(probes)
    base = synth_outer(log_rho, 1.0, grid)
    k = int(np.argmax(np.abs(fz)))
    phase = np.angle(fz[k] / base.value(probes[k : k + 1])[0])
    outer = synth_outer(log_rho, np.exp(1j * phase), grid)
    inner = Quotient(f, outer)
    moduli = np.abs(inner.value(probes))
    bnd = np.abs(inner.boundary_log_abs_on(grid))
    bnd_err = float(np.max(np.abs(np.expm1(bnd))))
    return Factorization(inner, outer, probes, moduli, bnd_err,
                         bool(moduli.max() <= 1.0 + 1e-6), bool(bnd_err <= 1e-3))


@dataclass(frozen=True)
class MajorantReport:
    lhs: float
    majorant: float
    slack: float
    holds: bool
    psi_at_zero: complex
    radius: float

    def to_dict(self):
        return {"lhs": self.lhs, "majorant": self.majorant, "slack": self.slack,
                "holds": self.holds, "radius": self.radius,
                "psi_at_zero": [self.psi_at_zero.real, self.psi_at_zero.imag]}


def harmonic_majorant_check(f, gauge, psi, r, grid=None, schedule=None, tol=1e-6):
    """Check ``mean omega(log+|f(psi(r e^{it}))|) <= h(psi(0))``.

    ``h`` is the Poisson extension of ``omega(log+|f*|)``.  For ``f`` in the
    Smirnov class it dominates ``omega(log+|f|)`` (Jensen's inequality for
    the convex increasing ``omega``), and ``h o psi`` is harmonic, so its
    circle means equal ``h(psi(0))``.
    """
    if not 0.0 < r < 1.0:
        raise InvalidArgumentError("r must lie in (0, 1)")
    grid, schedule = _defaults(grid, schedule)
    g = resolving_grid(grid, r)
    inside = _log_plus(f.log_abs(psi(r * g.points)))
    lhs = float(circle_mean(gauge_eval(gauge, inside), g))
    bnd = gauge_eval(gauge, boundary_log_modulus(f, grid, schedule, clip="log+").values)
    w = psi.value_at_zero
    majorant = float(circle_mean(poisson_kernel(grid.nodes, w) * bnd, grid))
    slack = majorant - lhs
    return MajorantReport(lhs, majorant, slack, bool(slack >= -tol), w, float(r))


def harness_maps(a, count, seed, max_degree=3, schedule=None, include_scale=True):
    """Sampled S_a maps, followed by ``Scale(r)`` for each scheduled radius."""
    maps = list(sample_family(a, count, seed, max_degree))
    if include_scale:
        schedule = schedule or RadialSchedule.dyadic()
        maps += [Scale(r) for r in schedule]
    return maps


def _map_label(i, psi):
    if isinstance(psi, Scale):
        return f"scale r={psi.r:.8g}"
    return f"psi#{i}:{psi.kind}"


@dataclass(frozen=True, eq=False)
class HarnessReport:
    mode: str
    a: float
    families: dict = field(repr=False)
    ui: dict = field(repr=False)
    ui_scale: dict = field(repr=False)
    verdicts: dict = field(repr=False)
    spot_checks: list = field(repr=False)
    mean_value: list = field(repr=False)
    psi_at_zero: list = field(repr=False)
    note: str = "sampled evidence over a finite subset of S_a, not a proof"

    @property
    def max_mean_value_gap(self):
        return max((m["gap"] for m in self.mean_value), default=0.0)

    def to_dict(self):
        labels = next(iter(self.families.values())).labels
        return {
            "mode": self.mode,
            "a": self.a,
            "family_size": len(labels),
            "grid_size": next(iter(self.families.values())).grid.size,
            "verdicts": self.verdicts,
            "ui": {clip: rep.to_dict() for clip, rep in self.ui.items()},
            "ui_scale_subfamily": {clip: rep.to_dict() for clip, rep in self.ui_scale.items()},
            "members": [
                {"label": lab, "psi_at_zero": [w.real, w.imag],
                 **{f"mean_{clip}": float(m) for clip, m in
                    ((c, fam.means()[i]) for c, fam in self.families.items())}}
                for i, (lab, w) in enumerate(zip(labels, self.psi_at_zero))
            ],
            "mean_value": self.mean_value,
            "spot_checks": self.spot_checks,
            "note": self.note,
        }


def verify_composition_theorem(f, a, maps, mode="smirnov", grid=None, schedule=None,
                               epsilon=DEFAULT_EPSILON, t_max=DEFAULT_T_MAX,
                               n_spot=3, tol=DEFAULT_TOL):
    """Sampled check of the composition theorems over ``maps`` in S_a.

    ``smirnov`` mode builds ``{log+|(f o psi)*|}``; ``outer`` mode builds the
    log+ and log- families (the signed family is uniformly integrable iff
    both clips are) and also checks ``log|f(psi(0))| = mean log|(f o psi)*|``
    for every map.  An inconclusive family whose scale-map members alone are
    not uniformly integrable is reported as ``not``.  Spot checks run the
    full Smirnov or outer test on the first ``n_spot`` non-scale compositions.
    """
    if mode not in ("smirnov", "outer"):
        raise InvalidArgumentError(f"mode must be 'smirnov' or 'outer', got {mode!r}")
    if mode == "outer" and not f.zero_free:
        raise InvalidArgumentError("outer mode needs a structurally zero-free function")
    maps = list(maps)
    if not maps:
        raise InvalidArgumentError("the map family is empty")
    for psi in maps:
        if abs(psi.value_at_zero) > a + 1e-12:
            raise InvalidArgumentError(f"{psi!r} is not in S_a for a={a}")
    grid, schedule = _defaults(grid, schedule)
    r_top = max((psi.r for psi in maps if isinstance(psi, Scale)), default=0.0)
    sample_grid = resolving_grid(grid, r_top)
    labels = tuple(_map_label(i, psi) for i, psi in enumerate(maps))
    signed = np.array([
        boundary_log_modulus(compose(f, psi), sample_grid, schedule, clip="log").values
        for psi in maps
    ])
    clips = ("log+",) if mode == "smirnov" else ("log+", "log-")
    families = {}
    for clip in clips:
        rows = _log_plus(signed) if clip == "log+" else _log_plus(-signed)
        families[clip] = BoundarySampleFamily(sample_grid, rows, labels)
    ui = {clip: ui_verdict(fam, epsilon, t_max) for clip, fam in families.items()}
    # uniform integrability passes to subfamilies, so a non-UI scale-map
    # subfamily settles an otherwise inconclusive full family
    scale_rows = [i for i, psi in enumerate(maps) if isinstance(psi, Scale)]
    ui_scale = {}
    if len(scale_rows) >= 2:
        for clip, fam in families.items():
            sub = BoundarySampleFamily(sample_grid, fam.members[scale_rows],
                                       tuple(labels[i] for i in scale_rows))
            ui_scale[clip] = ui_verdict(sub, epsilon, t_max)
    verdicts = {}
    for clip, rep in ui.items():
        verdicts[clip] = rep.verdict
        if rep.verdict == INCONCLUSIVE and clip in ui_scale and ui_scale[clip].verdict == NOT_UI:
            verdicts[clip] = NOT_UI

    mean_value = []
    if mode == "outer":
        means = signed @ sample_grid.weights / TWO_PI
        for lab, psi, m in zip(labels, maps, means):
            at0 = float(f.log_abs(np.array([psi.value_at_zero]))[0])
            mean_value.append({"label": lab, "log_abs_at_psi0": at0,
                               "boundary_mean": float(m), "gap": abs(at0 - float(m))})

    spot = []
    picks = [(lab, psi) for lab, psi in zip(labels, maps) if not isinstance(psi, Scale)]
    for lab, psi in picks[:n_spot]:
        h = compose(f, psi)
        if mode == "outer":
            v = outer_test(h, schedule, grid, tol)
        else:
            v = smirnov_test(h, schedule, grid, tol)
        spot.append({"label": lab, "classification": v.classification,
                     "verdict": v.to_dict()})
    return HarnessReport(mode, float(a), families, ui, ui_scale, verdicts, spot,
                         mean_value, [psi.value_at_zero for psi in maps])
