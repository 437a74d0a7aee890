"""Gaussian Radon transform on classical Wiener space.

Conditions Wiener measure on closed affine subspaces of the Cameron-Martin
space given by finitely many linear constraints, evaluates transforms of
Wiener integrals, bridges and multiple Ito integrals in closed form, and
checks them against a seeded Monte Carlo oracle.
"""

from .affine import (
    AffineSubspace, ConditionedLaw, bridge_subspace, closest_point, gram_matrix,
    orthonormal_bridge_basis, project, subspace_from_json, unconditioned,
)
from .cm_space import (
    CmVector, Grid, evaluate, grid_for_times, inner_product, kernel_vector, norm, refine,
    vector_from_json,
)
from .errors import *  # noqa: F401,F403
from .grt_core import (
    GaussianLaw1D, conditioned_cov, conditioned_cov_matrix, conditioned_law,
    exponential_moment, grt_linear, multi_bridge_mean,
)
from .hermite_ito import (
    ProductFunctional, chaos_expansion_coeffs, exp_martingale_grt, grt_power_ito,
    grt_symmetric_ito, hermite, shift_of_variance_check,
)
from .mc_oracle import (
    Composite, ExpOfWiener, HermiteOfWiener, McEstimate, PathEval, PathSample, SymmetricIto,
    WienerIntegral, compare, discretize_law, estimate, estimate_many, sample_paths,
)

__version__ = "0.1.0"
