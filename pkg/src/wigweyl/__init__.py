"""Classical phase-space distributions and quantum states in one Wigner-Weyl framework.

Layered diagnostics for two-mode states: covariance-level uncertainty and PPT
tests, operator positivity of Weyl-transformed densities, and Wigner
negativity, combined into the RE / HE / GE classification.
"""
from .classify import Diagnostics, Region, classify
from .fock_bench import beamsplitter_output, pt_spectrum, two_mode_wigner_min
from .grids import GridSpec, WignerGrid
from .phase_space import (
    SUBVACUUM_PARAMS,
    HYBRID_PARAMS,
    Constants,
    DisplacedPairParams,
    GaussianComponent,
    GaussianMixture2Mode,
    density_at,
    make_displaced_pair,
    mixture_covariance,
)
from .symplectic import closed_form_spectrum, ppt_test, rs_test, scan_displacement, symplectic_eigenvalues
from .weyl_kernel import Verdict, build_kernel_matrix, min_eigenvalue, positivity_scan

__version__ = "0.1.0"
