"""Symplectic spectra, the Robertson-Schroedinger test and the covariance-level PPT test."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from .phase_space import (
    Constants,
    DisplacedPairParams,
    check_symmetric,
    make_displaced_pair,
    mixture_covariance,
)

__all__ = [
    "OMEGA",
    "PT_FLIP",
    "CriteriaReport",
    "symplectic_eigenvalues",
    "partial_transpose_cov",
    "rs_test",
    "ppt_test",
    "closed_form_spectrum",
    "criteria_report",
    "scan_displacement",
    "rs_crossing",
]

PASS_ATOL = 1e-12
PAIRING_RTOL = 1e-8

OMEGA = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])
OMEGA.setflags(write=False)

# p2 -> -p2
PT_FLIP = np.array([1.0, 1.0, 1.0, -1.0])
PT_FLIP.setflags(write=False)


@dataclass(frozen=True)
class CriteriaReport:
    nu_min: float
    nu_tilde_min: float
    rs_pass: bool
    ppt_pass: bool
    hbar: float
    d: Optional[float] = None


def symplectic_eigenvalues(sigma) -> np.ndarray:
    """Return the two symplectic eigenvalues of a 4x4 covariance, ascending.

    The spectrum of ``i Omega Sigma`` is real and comes in ``+/-`` pairs for a
    positive-semidefinite ``Sigma``; the moduli of each pair are the
    symplectic eigenvalues. A spectrum that does not pair up is rejected.

    Raises
    ------
    ValueError
        If ``sigma`` is not a symmetric 4x4 matrix or its spectrum fails to pair.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (4, 4):
        raise ValueError(f"covariance must be 4x4, got {sigma.shape}")
    check_symmetric(sigma, name="covariance")
    ev = np.linalg.eigvals(1j * OMEGA @ sigma)
    scale = max(np.max(np.abs(ev)), np.finfo(float).tiny)
    if np.max(np.abs(ev.imag)) > PAIRING_RTOL * scale:
        raise ValueError("i*Omega*Sigma has non-real eigenvalues; not a valid covariance")
    ev = np.sort(ev.real)
    pos = ev[2:]
    neg = -ev[:2][::-1]
    if np.any(pos < 0) or np.max(np.abs(pos - neg)) > PAIRING_RTOL * scale:
        raise ValueError(f"eigenvalues of i*Omega*Sigma do not pair: {ev}")
    return 0.5 * (pos + neg)


def partial_transpose_cov(sigma) -> np.ndarray:
    """Flip the sign of the second mode's momentum: ``L Sigma L`` with ``L = diag(1, 1, 1, -1)``."""
    sigma = np.asarray(sigma, dtype=float)
    return sigma * np.outer(PT_FLIP, PT_FLIP)


def rs_test(sigma, c: Constants = Constants()) -> tuple[bool, float]:
    """Robertson-Schroedinger test. Returns ``(passed, nu_min - hbar/2)``."""
    margin = float(symplectic_eigenvalues(sigma)[0] - c.hbar / 2)
    return margin >= -PASS_ATOL, margin


def ppt_test(sigma, c: Constants = Constants()) -> tuple[bool, float]:
    """RS test on the partial transpose. A failure signals nonseparable covariance."""
    return rs_test(partial_transpose_cov(sigma), c)


def closed_form_spectrum(p: DisplacedPairParams) -> tuple[float, float, float, float]:
    """Closed-form ``(nu1, nu2, nu_tilde1, nu_tilde2)`` of the displaced pair covariance."""
    sq, sp, kq, kp, d = p.s_q, p.s_p, p.k_q, p.k_p, p.d
    d2 = d * d
    radicands = (
        kp * kq + kp * sq + kq * sp + sp * sq,
        -2 * d2 * kp + 2 * d2 * sp + kp * kq - kp * sq - kq * sp + sq * sp,
        -kp * kq - kp * sq + kq * sp + sp * sq,
        2 * d2 * kp + 2 * d2 * sp - kp * kq + kp * sq - kq * sp + sp * sq,
    )
    if min(radicands) < 0:
        raise ValueError(f"negative radicand in closed-form spectrum: {radicands}")
    return tuple(float(np.sqrt(r)) for r in radicands)


def criteria_report(sigma, c: Constants = Constants(), d: Optional[float] = None) -> CriteriaReport:
    nu_min = float(symplectic_eigenvalues(sigma)[0])
    nu_tilde_min = float(symplectic_eigenvalues(partial_transpose_cov(sigma))[0])
    half = c.hbar / 2
    return CriteriaReport(
        nu_min=nu_min,
        nu_tilde_min=nu_tilde_min,
        rs_pass=nu_min >= half - PASS_ATOL,
        ppt_pass=nu_tilde_min >= half - PASS_ATOL,
        hbar=c.hbar,
        d=d,
    )


def _report_at(p: DisplacedPairParams, d: float, c: Constants) -> CriteriaReport:
    sigma = mixture_covariance(make_displaced_pair(p.with_d(d)))
    return criteria_report(sigma, c, d=d)


def scan_displacement(
    p: DisplacedPairParams,
    d_grid: Sequence[float],
    c: Constants = Constants(),
    jobs: int = 1,
) -> list[CriteriaReport]:
    """Run the RS and PPT tests on the mixture covariance for every ``d`` in ``d_grid``.

    ``p.d`` is ignored. Rows come back in the order of ``d_grid``.
    """
    d_grid = [float(d) for d in d_grid]
    if not d_grid:
        raise ValueError("d_grid is empty")
    if any(d < 0 for d in d_grid):
        raise ValueError("displacements must be nonnegative")
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda d: _report_at(p, d, c), d_grid))
    return [_report_at(p, d, c) for d in d_grid]


def rs_crossing(
    p: DisplacedPairParams,
    c: Constants = Constants(),
    lo: float = 0.0,
    hi: float = 2.0,
    xtol: float = 1e-9,
) -> float:
    """Displacement where the smallest symplectic eigenvalue reaches ``hbar/2``, by bisection."""

    def gap(d):
        return _report_at(p, d, c).nu_min - c.hbar / 2

    return float(bisect(gap, lo, hi, xtol=xtol))
