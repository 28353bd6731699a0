"""gaugelab: a numerical laboratory for gauge-normed intermediate spaces.

Desk-scale models of a Gaussian-measured function space, its Cameron-Martin
space, and the normed spaces generated in between by radial shape functions:
samplers, norms, Minkowski-gauge evaluation by linear programming, and the
diagnostic suite that stress-tests the construction.
"""

__version__ = "0.1.0"

from .function_core import (
    GridFunction,
    HolderParams,
    SeqPoint,
    calibrate_metric_scale,
    frechet_metric,
    h12_norm,
    holder_norm,
    modulus_of_continuity,
    refine,
    small_holder_defect,
    sup_norm,
)
from .gaussian_models import (
    CMVector,
    KLExpansion,
    ProductGaussianModel,
    WienerModel,
    bridge_refine,
    cm_norm,
    covariance_estimate,
    sample_kl,
    sample_product_gaussian,
    sample_sphere_H,
    sample_wiener,
)
from .generated_space import (
    AtomSet,
    GaugeResult,
    build_atoms,
    enlarge_atoms,
    full_measure_enlargement,
    gauge,
    gauge_profile,
    lsc_probe,
    membership,
    sandwich_check,
)
from .shape_functions import (
    ShapeCheckReport,
    ShapeFunction,
    eval_shape,
    floor_metric_shape,
    homogeneous_extension,
    identity_shape,
    reciprocal_holder_shape,
    reciprocal_norm_shape,
    verify_shape,
)

__all__ = [
    "AtomSet",
    "CMVector",
    "GaugeResult",
    "GridFunction",
    "HolderParams",
    "KLExpansion",
    "ProductGaussianModel",
    "SeqPoint",
    "ShapeCheckReport",
    "ShapeFunction",
    "WienerModel",
    "__version__",
    "bridge_refine",
    "build_atoms",
    "calibrate_metric_scale",
    "cm_norm",
    "covariance_estimate",
    "enlarge_atoms",
    "eval_shape",
    "floor_metric_shape",
    "frechet_metric",
    "full_measure_enlargement",
    "gauge",
    "gauge_profile",
    "h12_norm",
    "holder_norm",
    "homogeneous_extension",
    "identity_shape",
    "lsc_probe",
    "membership",
    "modulus_of_continuity",
    "reciprocal_holder_shape",
    "reciprocal_norm_shape",
    "refine",
    "sample_kl",
    "sample_product_gaussian",
    "sample_sphere_H",
    "sample_wiener",
    "sandwich_check",
    "small_holder_defect",
    "sup_norm",
    "verify_shape",
]
