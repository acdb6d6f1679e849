"""Nonseparability regimes: representational, hybrid and genuine entanglement."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .fock_bench import beamsplitter_output, pt_spectrum, two_mode_wigner_min
from .grids import GridSpec
from .phase_space import Constants, DisplacedPairParams, make_displaced_pair, mixture_covariance
from .symplectic import criteria_report
from .weyl_kernel import DEFAULT_REL_TOL, build_kernel_matrix, min_eigenvalue

__all__ = [
    "Diagnostics",
    "Region",
    "classify",
    "diagnose_displaced_pair",
    "diagnose_beamsplitter",
    "PPT_CAVEAT",
]

PPT_CAVEAT = "PPT is necessary but not sufficient for separability beyond Gaussian states"


class Region(str, enum.Enum):
    SEPARABLE = "SEPARABLE"
    RE = "RE"
    HE = "HE"
    GE = "GE"
    UNDETERMINED = "UNDETERMINED"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Diagnostics:
    """Outcomes of the layered tests.

    ``rs_pass`` is carried along for reporting only; operator positivity
    subsumes it. ``None`` marks a test that was not run.
    """

    rs_pass: Optional[bool]
    ppt_pass: Optional[bool]
    operator_positive: Optional[bool] = None
    wigner_nonnegative: Optional[bool] = None


def classify(d: Diagnostics) -> Region:
    """Map diagnostics to a region.

    A PPT pass is reported as SEPARABLE at the level tested (see
    :data:`PPT_CAVEAT`). Otherwise a non-positive operator is RE, and a positive
    one is HE or GE depending on the sign of its Wigner function.
    """
    if d.ppt_pass is None:
        return Region.UNDETERMINED
    if d.ppt_pass:
        return Region.SEPARABLE
    if d.operator_positive is None:
        return Region.UNDETERMINED
    if not d.operator_positive:
        return Region.RE
    if d.wigner_nonnegative is None:
        return Region.UNDETERMINED
    return Region.HE if d.wigner_nonnegative else Region.GE


def diagnose_displaced_pair(
    p: DisplacedPairParams,
    grid: GridSpec = GridSpec(),
    c: Constants = Constants(),
    rel_tol: float = DEFAULT_REL_TOL,
) -> Diagnostics:
    """Run the covariance tests and the kernel positivity test on a displaced pair.

    The phase-space density of a Gaussian mixture is a probability density,
    so its Wigner function is nonnegative by construction.
    """
    rep = criteria_report(mixture_covariance(make_displaced_pair(p)), c)
    pos = min_eigenvalue(build_kernel_matrix(p, grid, c), rel_tol)
    return Diagnostics(rep.rs_pass, rep.ppt_pass, pos.positive, True)


def diagnose_beamsplitter(p: float, atol: float = 1e-12) -> Diagnostics:
    """Diagnostics of the beamsplitter output state from its Fock-basis matrix."""
    rho = beamsplitter_output(p).matrix
    operator_positive = bool(np.linalg.eigvalsh(rho)[0] >= -atol)
    ppt_pass = pt_spectrum(p).lambda_min >= -atol
    return Diagnostics(None, ppt_pass, operator_positive, two_mode_wigner_min(p) >= 0)
