"""Orlicz mixed volumes and Orlicz affine and geominimal surface areas of convex bodies."""

from types import ModuleType

from .bodies import (
    Atomic,
    Ball,
    ConvexBody,
    Density,
    Ellipsoid,
    HPolytope,
    SLTransform,
    SmoothSampled,
    StarBody,
    VPolytope,
    apply_sl,
    normalize_volume,
    polar,
    random_body,
    random_sl,
    sample,
    surface_area_measure,
    translate,
    volume,
    vrad,
)
from .errors import OrliczError
from .functionals import (
    FunctionalResult,
    OptimizerOptions,
    affine_orlicz,
    affine_orlicz_multi,
    ball_functional,
    ellipsoid_closed_form,
    geominimal_orlicz,
    geominimal_orlicz_multi,
    ith_mixed,
    lp_affine_closed_form,
    lp_reference,
    lutwak_gp,
    orlicz_to_lp,
)
from .harness import SUITES, SuiteReport, equality_witness, golden_corpus, run_suite
from .io import body_from_dict, body_to_dict, load_body, parse_phi
from .mixed_volumes import s_phi, v_phi, v_phi_ith, v_phi_multi, v_phi_polar, v_p
from .orlicz import OrliczFunction, audit_composition, classify
from .spheregrid import SphereGrid, ball_volume, build_grid, integrate

__version__ = "0.1.0"

__all__ = [name for name, obj in globals().items()
           if not name.startswith("_") and not isinstance(obj, ModuleType)]
