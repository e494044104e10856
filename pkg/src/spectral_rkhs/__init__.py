"""Reproducing kernels of Sobolev and diffusion spaces on S^1, S^{d-1} and R^n."""
from .curves import EmbeddedCurve, arc_length, isometry_to_circle, pullback_kernel
from .kernels import (
    AbelPolicy,
    FixedLevels,
    Heat,
    KernelSpec,
    Power,
    Sobolev,
    TailBound,
    abel_kernel,
    evaluate,
    heat_kernel,
    kernel_power,
    sobolev_closed_circle,
    sobolev_euclidean,
    sobolev_kernel,
)
from .quadrature import apply_integral_operator, build_rule, integrate
from .rkhs import (
    GramMatrix,
    SpectralFunction,
    diffusion_norm,
    gram,
    interpolate,
    rkhs_diag_test,
    sobolev_norm,
)
from .spectra import Circle, Euclidean, Sphere, eigen_level, eigenfunction, projector

__version__ = "0.1.0"
