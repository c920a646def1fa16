"""``hardylab`` command line: synth, classify, gauge and harness.

Exit codes: 0 ok, 2 parse, 3 data, 4 estimation, 5 gauge unavailable.
Verdicts never change the exit code.
"""
import argparse
import json
import os
import sys
from contextlib import nullcontext
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .classify import (
    DEFAULT_EPSILON,
    DEFAULT_GRID,
    DEFAULT_T_MAX,
    DEFAULT_TOL,
    harness_maps,
    outer_test,
    radial_family,
    smirnov_test,
    ui_verdict,
    verify_composition_theorem,
)
from .errors import (
    BoundUnavailableError,
    GaugeUnavailableError,
    HardyLabError,
    InvalidArgumentError,
    NonIntegrableSampleError,
    SpecParseError,
)
from .functions import RadialSchedule, synth_outer
from .integrability import (
    DEFAULT_LEVELS,
    build_gauge,
    gauge_implies_ui,
    gauge_integrals,
)
from .quadrature import make_grid
from .serialize import (
    SCHEMA_VERSION,
    dump_function,
    dumps,
    format_float,
    load_function,
    read_samples,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DATA = 3
EXIT_ESTIMATION = 4
EXIT_GAUGE = 5

THREADS_ENV = "HARDYLAB_THREADS"
TABLE_RADII = (0.0, 0.25, 0.5, 0.75, 0.9)
TABLE_ANGLES = 8


class CommandError(Exception):
    """Operational failure carrying its exit code and an optional partial report."""

    def __init__(self, code, message, report=None):
        super().__init__(message)
        self.code = code
        self.report = report


@dataclass(frozen=True)
class RunConfig:
    grid: int = DEFAULT_GRID
    radii: int = 12
    tol: float = DEFAULT_TOL
    epsilon: float = DEFAULT_EPSILON
    t_max: float = DEFAULT_T_MAX
    a: float = 0.5
    count: int = 50
    seed: int = 0
    max_degree: int = 3
    mode: str = "smirnov"
    levels: int = DEFAULT_LEVELS

    def __post_init__(self):
        if self.grid < 4:
            raise InvalidArgumentError("--grid must be at least 4")
        if self.radii < 2:
            raise InvalidArgumentError("--radii must be at least 2")
        if not self.tol > 0 or not self.epsilon > 0 or not self.t_max > 0:
            raise InvalidArgumentError("--tol, --epsilon and --t-max must be positive")
        if not 0.0 <= self.a < 1.0:
            raise InvalidArgumentError("--a must lie in [0, 1)")
        if self.count < 1 or self.max_degree < 1 or self.levels < 1:
            raise InvalidArgumentError("--count, --max-degree and --levels must be >= 1")

    @property
    def schedule(self):
        return RadialSchedule.dyadic(self.radii)

    def make_grid(self):
        return make_grid(self.grid)


def _config(args):
    keys = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(args).items() if k in keys and v is not None})


def _write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _emit_report(report, out, name="report.json"):
    text = dumps(report)
    if out is None:
        sys.stdout.write(text)
    else:
        out = Path(out)
        _write(out / name if out.suffix != ".json" else out, text)


def _csv(header, rows):
    lines = [",".join(header)]
    lines += [",".join(format_float(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _resample(values, n):
    """Periodic linear interpolation onto an ``n``-node midpoint grid."""
    m = values.size
    if m == n:
        return values
    src = (np.arange(m) + 0.5) / m
    dst = (np.arange(n) + 0.5) / n
    return np.interp(dst, src, values, period=1.0)


def cmd_synth(args):
    cfg = _config(args)
    log_rho = read_samples(args.data)
    if not np.all(np.isfinite(log_rho)):
        raise NonIntegrableSampleError("boundary data contain non-finite log-moduli")
    grid = cfg.make_grid()
    log_rho = _resample(log_rho, grid.size)
    f = synth_outer(log_rho, np.exp(1j * args.c_angle), grid)
    rows = []
    angles = 2.0 * np.pi * np.arange(TABLE_ANGLES) / TABLE_ANGLES
    for r in TABLE_RADII:
        z = r * np.exp(1j * angles)
        w = f.value(z)
        rows += [(r, t, v.real, v.imag, abs(v)) for t, v in zip(angles, w)]
    table = _csv(("r", "theta", "re", "im", "abs"), rows)
    out = Path(args.out or ".")
    _write(out / "function.json", dump_function(f))
    _write(out / "table.csv", table)
    sys.stdout.write(dumps({"schema_version": SCHEMA_VERSION, "command": "synth",
                            "grid": grid.size, "c_angle": args.c_angle,
                            "function": str(out / "function.json"),
                            "table": str(out / "table.csv")}))
    return EXIT_OK


def _classify_report(f, spec, cfg):
    grid, schedule = cfg.make_grid(), cfg.schedule
    report = {"schema_version": SCHEMA_VERSION, "command": "classify",
              "config": asdict(cfg), "spec": spec}
    try:
        sv = smirnov_test(f, schedule, grid, cfg.tol)
        report["smirnov"] = sv.to_dict()
        ui = ui_verdict(radial_family(f, schedule, grid), cfg.epsilon, cfg.t_max)
        report["uniform_integrability"] = ui.to_dict()
        if f.zero_free:
            report["outer"] = outer_test(f, schedule, grid, cfg.tol).to_dict()
    except HardyLabError as exc:
        if isinstance(exc, (SpecParseError, InvalidArgumentError)):
            raise
        report["error"] = f"{type(exc).__name__}: {exc}"
        raise CommandError(EXIT_ESTIMATION, report["error"], report) from exc
    return report


def cmd_classify(args):
    cfg = _config(args)
    f, spec = load_function(args.spec)
    _emit_report(_classify_report(f, spec, cfg), args.out)
    return EXIT_OK


def _gauge_source(args, cfg):
    if args.report is not None:
        try:
            doc = json.loads(Path(args.report).read_text(encoding="utf-8"))
            spec = doc["spec"]
            saved = {k: v for k, v in doc.get("config", {}).items()
                     if k in RunConfig.__dataclass_fields__}
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise SpecParseError(f"cannot use {args.report} as a classify report: {exc!r}")
        # grid and schedule come from the classify run; --levels stays in force
        saved["levels"] = cfg.levels
        cfg = RunConfig(**saved)
        f, _ = load_function(json.dumps(spec))
        return f, spec, cfg
    if args.spec is None:
        raise SpecParseError("gauge needs --spec or --report")
    f, spec = load_function(args.spec)
    return f, spec, cfg


def cmd_gauge(args):
    f, spec, cfg = _gauge_source(args, _config(args))
    family = radial_family(f, cfg.schedule, cfg.make_grid())
    gauge = build_gauge(family, cfg.levels, cfg.t_max)
    integrals = gauge_integrals(family, gauge)
    checks = []
    # the bound needs omega(t) > 0, i.e. t past the first knot
    first = gauge.knots[0]
    top = max(family.max_value, gauge.knots[-1], 2.0 * first)
    for t in np.linspace(first, top, 10)[1:]:
        checks.append({"t": float(t), "tail_bound": gauge_implies_ui(family, gauge, t)})
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "gauge",
        "config": asdict(cfg),
        "spec": spec,
        "levels": gauge.levels,
        "knots": list(gauge.knots),
        "members": [{"label": lab, "integral": float(v)}
                    for lab, v in zip(family.labels, integrals)],
        "verification": {
            "sup_integral": float(integrals.max()),
            "asserted_bound": 1.0,
            "holds": bool(integrals.max() <= 1.0 + 1e-12),
            "tail_bounds": checks,
        },
    }
    _emit_report(report, args.out, "gauge.json")
    return EXIT_OK


def cmd_harness(args):
    cfg = _config(args)
    f, spec = load_function(args.spec)
    maps = harness_maps(cfg.a, cfg.count, cfg.seed, cfg.max_degree, cfg.schedule)
    rep = verify_composition_theorem(f, cfg.a, maps, cfg.mode, cfg.make_grid(),
                                     cfg.schedule, cfg.epsilon, cfg.t_max, tol=cfg.tol)
    report = {"schema_version": SCHEMA_VERSION, "command": "harness",
              "config": asdict(cfg), "spec": spec,
              "maps": [psi.to_dict() for psi in maps], **rep.to_dict()}
    _emit_report(report, args.out)
    if args.out is not None:
        for clip, ui in rep.ui.items():
            name = "tail_" + clip.replace("+", "plus").replace("-", "minus") + ".csv"
            _write(Path(args.out) / name, _csv(("t", "T"), zip(ui.thresholds, ui.tail_sup)))
    return EXIT_OK


def _add_common(p, spec=True):
    if spec:
        p.add_argument("spec", help="function spec: JSON file or inline JSON object")
    p.add_argument("--grid", type=int, help=f"quadrature nodes N (default {DEFAULT_GRID})")
    p.add_argument("--radii", type=int, help="dyadic radii r_k = 1 - 2^-k, k <= K (default 12)")
    p.add_argument("--tol", type=float, help=f"verdict tolerance (default {DEFAULT_TOL})")
    p.add_argument("--epsilon", type=float, help=f"UI tail level (default {DEFAULT_EPSILON})")
    p.add_argument("--t-max", dest="t_max", type=float,
                   help=f"largest UI threshold (default {DEFAULT_T_MAX})")
    p.add_argument("--out", help="output directory or .json path (default stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hardylab",
        description="Hardy-space numerics on the unit disk.",
        epilog=f"{THREADS_ENV} caps the number of numeric threads.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize an outer function from boundary data")
    p.add_argument("data", help="one log-modulus per line, or a 'modulus' header then moduli")
    p.add_argument("--c-angle", type=float, default=0.0,
                   help="angle of the unimodular constant, radians")
    _add_common(p, spec=False)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("classify", help="Smirnov, UI and outer verdicts for a function")
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("gauge", help="de la Vallee Poussin gauge for the radial family")
    p.add_argument("--spec", help="function spec: JSON file or inline JSON object")
    p.add_argument("--report", help="classify report to take spec and config from")
    p.add_argument("--levels", type=int, help=f"gauge levels L (default {DEFAULT_LEVELS})")
    _add_common(p, spec=False)
    p.set_defaults(func=cmd_gauge)

    p = sub.add_parser("harness", help="composition-theorem check over sampled S_a")
    _add_common(p)
    p.add_argument("--a", type=float, help="S_a radius, |psi(0)| <= a (default 0.5)")
    p.add_argument("--count", type=int, help="number of sampled maps (default 50)")
    p.add_argument("--seed", type=int, help="sampler seed (default 0)")
    p.add_argument("--max-degree", dest="max_degree", type=int,
                   help="largest sampled Blaschke degree (default 3)")
    p.add_argument("--mode", choices=("smirnov", "outer"), help="theorem to check")
    p.set_defaults(func=cmd_harness)
    return parser


def _thread_limit():
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return nullcontext()
    try:
        n = int(raw)
    except ValueError:
        raise InvalidArgumentError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    if n < 1:
        raise InvalidArgumentError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    from threadpoolctl import threadpool_limits
    return threadpool_limits(limits=n)


def _exit_code(exc):
    if isinstance(exc, (SpecParseError, InvalidArgumentError)):
        return EXIT_PARSE
    if isinstance(exc, NonIntegrableSampleError):
        return EXIT_DATA
    if isinstance(exc, (GaugeUnavailableError, BoundUnavailableError)):
        return EXIT_GAUGE
    return EXIT_ESTIMATION


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with _thread_limit():
            return args.func(args)
    except CommandError as exc:
        if exc.report is not None:
            _emit_report(exc.report, args.out)
        print(f"hardylab: {exc}", file=sys.stderr)
        return exc.code
    except HardyLabError as exc:
        print(f"hardylab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _exit_code(exc)

