"""Numerical Hardy-space theory on the unit disk.

Outer functions are synthesized from sampled boundary moduli and functions
are sorted into the Smirnov and outer classes.  Uniform integrability of
boundary families is decided from tail curves and certified by
de la Vallee Poussin gauges, including over sampled Schur families.
"""
__version__ = "0.1.0"

from .classify import (
    factorize,
    harmonic_majorant_check,
    harness_maps,
    outer_test,
    radial_family,
    smirnov_test,
    ui_smirnov_test,
    verify_composition_theorem,
)
from .errors import HardyLabError
from .functions import (
    BlaschkeProduct,
    ClosedForm,
    Constant,
    Outer,
    Product,
    Quotient,
    RadialSchedule,
    SingularInner,
    boundary_log_modulus,
    compose,
    evaluate,
    radial_limit,
    reciprocal,
    synth_outer,
)
from .integrability import (
    BoundarySampleFamily,
    Gauge,
    build_gauge,
    gauge_eval,
    gauge_implies_ui,
    tail_function,
    ui_verdict,
)
from .quadrature import circle_mean, herglotz_kernel, make_grid, poisson_kernel
from .schur import (
    Automorphism,
    FiniteBlaschke,
    PostScaled,
    Scale,
    containment_radius,
    sample_family,
    scale_map,
    schur_compose,
)

__all__ = [
    "Automorphism", "BlaschkeProduct", "BoundarySampleFamily", "ClosedForm", "Constant",
    "FiniteBlaschke", "Gauge", "HardyLabError", "Outer", "PostScaled", "Product",
    "Quotient", "RadialSchedule", "Scale", "SingularInner", "boundary_log_modulus",
    "build_gauge", "circle_mean", "compose", "containment_radius", "evaluate",
    "factorize", "gauge_eval", "gauge_implies_ui", "harmonic_majorant_check",
    "harness_maps", "herglotz_kernel", "make_grid", "outer_test", "poisson_kernel",
    "radial_family", "radial_limit", "reciprocal", "sample_family", "scale_map",
    "schur_compose", "smirnov_test", "synth_outer", "tail_function",
    "ui_smirnov_test", "ui_verdict", "verify_composition_theorem",
]
