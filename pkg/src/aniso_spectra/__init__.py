"""Fundamental frequencies of anisotropic p-Laplace operators generated by
asymmetric seminorms, in 1D (closed forms + finite-difference oracle) and 2D
(piecewise-linear Rayleigh-quotient minimization), with the geometric width
machinery and spectral-optimization bounds tying the two together.
"""

__version__ = "0.1.0"

from .anisotropy import (
    Anisotropy2D,
    AsymmetricLinear,
    EuclideanScaled,
    KernelCategory,
    KernelClass,
    Regularized,
    SplitPNorm,
    SupportPolygon,
    anisotropy_from_json,
    differentiability_scan,
    dual,
    evaluate,
    kernel_classify,
    lower_bound_rotation,
    norm_sup,
    rotation,
    rotation_normal_form,
)
from .errors import (
    BadExponent,
    BadParams,
    DegenerateKernel,
    EmptyInterval,
    EmptyMesh,
    InputError,
    NonConvergence,
    NotDegenerateLine,
    SandwichViolation,
    ZeroAnisotropy,
    ZeroProfile,
)
