"""Position-space kernels of Weyl-transformed phase-space densities and their positivity.

A phase-space function ``f(q, p)`` maps to the operator with matrix elements

    <x|chi|x'> = int dp f((x + x')/2, p) exp(i p (x - x') / hbar),

which has unit trace whenever ``f`` is normalized. Kernels are discretized on a
lattice with the configuration-space measure folded in,
``K_ij = K(X_i, X_j) * dx**dims``, so the matrix spectrum approximates the
operator spectrum.
"""
from __future__ import annotations

import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .grids import GridSpec, WignerGrid
from .phase_space import Constants, DisplacedPairParams

__all__ = [
    "GridSpec",
    "KernelMatrix",
    "Verdict",
    "PositivityReport",
    "EigensolverError",
    "kernel_element",
    "build_kernel_matrix",
    "min_eigenvalue",
    "positivity_scan",
    "wigner_to_kernel",
    "DEFAULT_REL_TOL",
    "MAX_KERNEL_SIZE",
]

log = logging.getLogger(__name__)

DEFAULT_REL_TOL = 1e-8
MAX_KERNEL_SIZE = 10_000
_ROW_BLOCK = 512


class EigensolverError(RuntimeError):
    pass


class Verdict(str, enum.Enum):
    POSITIVE = "POSITIVE"
    NON_POSITIVE = "NON_POSITIVE"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class KernelMatrix:
    entries: np.ndarray
    grid: GridSpec
    measure_weighted: bool = True
    raw_trace: Optional[float] = None

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> float:
        return float(np.real(np.trace(self.entries)))


@dataclass(frozen=True)
class PositivityReport:
    lambda_min: float
    trace: float
    verdict: Verdict
    tolerance: float
    spectrum: Optional[np.ndarray] = None

    @property
    def positive(self) -> bool:
        return self.verdict is Verdict.POSITIVE


def _q_block_inverse(p: DisplacedPairParams):
    q0 = p.q_block
    det = float(np.linalg.det(q0))
    if det <= 0:
        raise ValueError("position block of the component covariance is singular")
    return np.linalg.inv(q0), det


def kernel_element(x, x_prime, p: DisplacedPairParams, c: Constants = Constants()) -> float:
    """Matrix element ``<x|chi|x'>`` of the Weyl-transformed displaced pair.

    Each component contributes a normalized Gaussian in the midpoint
    ``(x + x')/2`` (covariance ``Q0``, centred on the component's position
    mean) times ``exp(-D^T P0 D / 2 hbar^2)`` in the offset ``D = x - x'``.
    """
    x = np.asarray(x, dtype=float)
    x_prime = np.asarray(x_prime, dtype=float)
    q_inv, det = _q_block_inverse(p)
    m = 0.5 * (x + x_prime)
    delta = x - x_prime
    offset = np.exp(-(delta @ p.p_block @ delta) / (2 * c.hbar**2))
    norm = 1.0 / (2 * np.pi * np.sqrt(det))
    total = 0.0
    for mean in p.position_means:
        r = m - mean
        total += 0.5 * norm * np.exp(-0.5 * r @ q_inv @ r)
    return float(total * offset)


def _kernel_rows(rows, pts, p, q_inv, det, hbar):
    a = pts[rows]
    mx = 0.5 * (a[:, None, 0] + pts[None, :, 0])
    my = 0.5 * (a[:, None, 1] + pts[None, :, 1])
    dx = a[:, None, 0] - pts[None, :, 0]
    dy = a[:, None, 1] - pts[None, :, 1]
    pb = p.p_block
    block = np.zeros_like(mx)
    for mean in p.position_means:
        rx = mx - mean[0]
        ry = my - mean[1]
        block += np.exp(-0.5 * (q_inv[0, 0] * rx * rx + 2 * q_inv[0, 1] * rx * ry + q_inv[1, 1] * ry * ry))
    block *= 0.5 / (2 * np.pi * np.sqrt(det))
    block *= np.exp(-(pb[0, 0] * dx * dx + 2 * pb[0, 1] * dx * dy + pb[1, 1] * dy * dy) / (2 * hbar**2))
    return block


def build_kernel_matrix(
    p: DisplacedPairParams,
    g: GridSpec = GridSpec(),
    c: Constants = Constants(),
    max_size: int = MAX_KERNEL_SIZE,
    jobs: int = 1,
) -> KernelMatrix:
    """Discretize the two-mode kernel on the ``n x n`` position lattice.

    Raises
    ------
    ValueError
        If ``g.dims != 2`` or the matrix dimension ``n**2`` exceeds ``max_size``.
    """
    if g.dims != 2:
        raise ValueError("the two-mode kernel lives on a dims=2 configuration grid")
    M = g.size
    if M > max_size:
        suggested = int(np.floor(np.sqrt(max_size)))
        raise ValueError(
            f"kernel dimension {M} (n={g.n}) exceeds the limit {max_size}; "
            f"use n <= {suggested} or raise the limit explicitly"
        )
    q_inv, det = _q_block_inverse(p)
    pts = g.points()
    blocks = [np.arange(s, min(s + _ROW_BLOCK, M)) for s in range(0, M, _ROW_BLOCK)]
    K = np.empty((M, M))

    def fill(rows):
        K[rows] = _kernel_rows(rows, pts, p, q_inv, det, c.hbar)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(fill, blocks))
    else:
        for rows in blocks:
            fill(rows)
    K *= g.step**2
    K = 0.5 * (K + K.T)
    return KernelMatrix(K, g, measure_weighted=True)


def min_eigenvalue(
    k: KernelMatrix,
    rel_tol: float = DEFAULT_REL_TOL,
    keep_spectrum: bool = False,
) -> PositivityReport:
    """Smallest eigenvalue of the (symmetrized) kernel and a positivity verdict.

    The verdict is POSITIVE when ``lambda_min >= -rel_tol * ||K||_2``; the
    spectral norm comes from the same full diagonalization.
    """
    K = np.asarray(k.entries)
    K = 0.5 * (K + K.conj().T)
    if not np.all(np.isfinite(K)):
        raise EigensolverError("kernel contains non-finite entries")
    try:
        spectrum = np.linalg.eigvalsh(K)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver failed: {exc}") from exc
    norm = float(np.max(np.abs(spectrum))) if spectrum.size else 0.0
    tol = rel_tol * norm
    lam = float(spectrum[0])
    verdict = Verdict.POSITIVE if lam >= -tol else Verdict.NON_POSITIVE
    return PositivityReport(
        lambda_min=lam,
        trace=float(np.real(np.trace(K))),
        verdict=verdict,
        tolerance=tol,
        spectrum=spectrum if keep_spectrum else None,
    )


def positivity_scan(
    p: DisplacedPairParams,
    d_grid: Sequence[float],
    g: GridSpec = GridSpec(),
    c: Constants = Constants(),
    rel_tol: float = DEFAULT_REL_TOL,
    max_size: int = MAX_KERNEL_SIZE,
    jobs: int = 1,
) -> list[tuple[float, PositivityReport]]:
    """Kernel positivity for each displacement in ``d_grid`` (``p.d`` is ignored)."""
    d_grid = [float(d) for d in d_grid]
    if not d_grid:
        raise ValueError("d_grid is empty")
    if g.size > max_size:
        build_kernel_matrix(p, g, c, max_size=max_size)  # raises with a suggested n

    def row(d):
        k = build_kernel_matrix(p.with_d(d), g, c, max_size=max_size)
        return d, min_eigenvalue(k, rel_tol)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(row, d_grid))
    return [row(d) for d in d_grid]


def _half_step_shift(W: np.ndarray, h: float) -> np.ndarray:
    """Band-limited values of ``W`` at ``q + h/2`` along axis 0 (all but the last row)."""
    n = W.shape[0]
    k = 2 * np.pi * np.fft.fftfreq(n, d=h)
    shift = np.exp(0.5j * k * h)
    if n % 2 == 0:
        shift[n // 2] = np.cos(0.5 * k[n // 2] * h)  # keep the Nyquist term real
    return np.real(np.fft.ifft(np.fft.fft(W, axis=0) * shift[:, None], axis=0))[:-1]


def wigner_to_kernel(w: WignerGrid, c: Constants = Constants(), normalize: bool = True) -> KernelMatrix:
    """Weyl-transform a sampled single-mode Wigner function into a position kernel.

    The kernel lives on the ``q`` lattice of ``w``. Midpoints ``(x_i + x_j)/2``
    fall on the half-step lattice, where ``W`` is obtained by a band-limited
    (Fourier) half-step shift along ``q``; this presumes ``W`` has decayed at
    the grid edges. Low-order interpolation there leaves a checkerboard that
    shows up as spurious +/- eigenvalue pairs. The momentum integral is a
    direct Riemann sum against ``exp(i p D / hbar)``.

    With ``normalize`` the kernel is rescaled to unit trace and the raw trace
    is kept on the result (and logged). A zero Wigner function gives the zero
    kernel.

    Raises
    ------
    ValueError
        If the momentum sampling cannot resolve the phase ``p * D / hbar`` for
        the largest offset ``D`` on the ``q`` lattice.
    """
    q, pm, W = w.q_axis, w.p_axis, w.values
    n = len(q)
    h = w.dq
    dp = w.dp
    max_offset = q[-1] - q[0]
    if max_offset * dp / c.hbar >= np.pi:
        raise ValueError(
            f"momentum step {dp:.4g} too coarse for offsets up to {max_offset:.4g}: "
            f"need dp < pi*hbar/{max_offset:.4g}"
        )
    half = np.empty((2 * n - 1, len(pm)))
    half[0::2] = W
    half[1::2] = _half_step_shift(W, h)
    offsets = np.arange(-(n - 1), n) * h
    phase = np.exp(1j * np.outer(pm, offsets) / c.hbar)
    F = (half @ phase) * dp
    i, j = np.indices((n, n))
    K = F[i + j, (i - j) + (n - 1)] * h
    K = 0.5 * (K + K.conj().T)
    scale = max(np.max(np.abs(K)), np.finfo(float).tiny)
    if np.max(np.abs(K.imag)) <= 1e-12 * scale:
        K = K.real
    raw = float(np.real(np.trace(K)))
    if normalize and raw != 0.0:
        log.info("wigner_to_kernel: raw trace %.12g, rescaled to 1", raw)
        K = K / raw
    grid = GridSpec(float(q[0]), float(q[-1]), n, dims=1)
    return KernelMatrix(K, grid, measure_weighted=True, raw_trace=raw)
