"""Numerical symplectic laboratory: explicit fibration models and checks."""

from .models import (  # noqa: F401
    FibrationModel,
    MODEL_IDS,
    gamma,
    make_model,
    sample_domain,
)
from .reduction import ReductionMap, gamma_t, gamma_t_inverse, omega_t_matrix, reduction_check  # noqa: F401
from .amoeba import AmoebaRaster, amoeba_membership, amoeba_raster  # noqa: F401
from .poisson import poisson_check  # noqa: F401
from .twist import hamiltonian_twist, h0_quarter_turn, cutoff_hamiltonian, symplecticity_defect  # noqa: F401
from .discriminant import discriminant_sample  # noqa: F401
from .smoothing import rho_zero, rho_one_smooth, smoothing_one  # noqa: F401
