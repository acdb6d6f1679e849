"""Classical phase-space densities built from two-mode Gaussian mixtures.

Phase-space vectors are always ordered ``z = (q1, q2, p1, p2)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Constants",
    "GaussianComponent",
    "GaussianMixture2Mode",
    "DisplacedPairParams",
    "density_at",
    "make_displaced_pair",
    "mixture_covariance",
    "displaced_pair_covariance",
]

SYM_RTOL = 1e-12
WEIGHT_ATOL = 1e-12


def _frozen(a, shape, name):
    arr = np.array(a, dtype=float)
    if arr.shape != shape:
        raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


def check_symmetric(m: np.ndarray, rtol: float = SYM_RTOL, name: str = "matrix") -> None:
    scale = max(np.max(np.abs(m)), np.finfo(float).tiny)
    if np.max(np.abs(m - m.T)) > rtol * scale:
        raise ValueError(f"{name} is not symmetric")


@dataclass(frozen=True)
class Constants:
    """Physical constants; only the action unit is needed."""

    hbar: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and np.isfinite(self.hbar)):
            raise ValueError(f"hbar must be positive, got {self.hbar}")


@dataclass(frozen=True)
class GaussianComponent:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mean", _frozen(self.mean, (4,), "mean"))
        cov = _frozen(self.cov, (4, 4), "cov")
        check_symmetric(cov, name="cov")
        if np.linalg.eigvalsh(cov)[0] <= 0:
            raise ValueError("component covariance must be positive definite")
        object.__setattr__(self, "cov", cov)


@dataclass(frozen=True)
class GaussianMixture2Mode:
    """Weighted sum of two-mode Gaussian densities. Any number of components >= 1."""

    weights: tuple
    components: tuple

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        components = tuple(self.components)
        if not components:
            raise ValueError("mixture needs at least one component")
        if len(weights) != len(components):
            raise ValueError("weights and components differ in length")
        if any(w < 0 for w in weights):
            raise ValueError("weights must be nonnegative")
        if abs(sum(weights) - 1.0) > WEIGHT_ATOL:
            raise ValueError(f"weights sum to {sum(weights)!r}, not 1")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "components", components)


@dataclass(frozen=True)
class DisplacedPairParams:
    """Parameters of the symmetric two-Gaussian mixture.

    ``s_q``/``s_p`` are the intra-mode variances, ``k_q``/``k_p`` the
    inter-mode correlations of the shared component covariance and ``d`` the
    displacement: component means sit at ``(+d, -d, 0, 0)`` and ``(-d, +d, 0, 0)``.
    """

    s_q: float
    s_p: float
    k_q: float
    k_p: float
    d: float = 0.0

    def __post_init__(self):
        if self.s_q <= 0 or self.s_p <= 0:
            raise ValueError("s_q and s_p must be positive")
        if abs(self.k_q) >= self.s_q:
            raise ValueError(f"|k_q| must be < s_q (got k_q={self.k_q}, s_q={self.s_q})")
        if abs(self.k_p) >= self.s_p:
            raise ValueError(f"|k_p| must be < s_p (got k_p={self.k_p}, s_p={self.s_p})")
        if self.d < 0:
            raise ValueError("displacement d must be nonnegative")

    def with_d(self, d: float) -> "DisplacedPairParams":
        return DisplacedPairParams(self.s_q, self.s_p, self.k_q, self.k_p, d)

    @property
    def q_block(self) -> np.ndarray:
        return np.array([[self.s_q, self.k_q], [self.k_q, self.s_q]])

    @property
    def p_block(self) -> np.ndarray:
        return np.array([[self.s_p, self.k_p], [self.k_p, self.s_p]])

    @property
    def sigma0(self) -> np.ndarray:
        out = np.zeros((4, 4))
        out[:2, :2] = self.q_block
        out[2:, 2:] = self.p_block
        return out

    @property
    def position_means(self) -> tuple:
        return np.array([self.d, -self.d]), np.array([-self.d, self.d])


# Reference parameter sets: sub-vacuum correlated pair and hybrid point.
SUBVACUUM_PARAMS = DisplacedPairParams(s_q=0.5, s_p=0.5, k_q=0.3, k_p=0.3)
HYBRID_PARAMS = DisplacedPairParams(s_q=1.0, s_p=1.0, k_q=0.3, k_p=-0.8)


def _gaussian_pdf(z, mean, cov):
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise ValueError("singular or indefinite component covariance") from exc
    diff = np.asarray(z, dtype=float) - mean
    r = np.linalg.solve(chol, diff.reshape(-1, len(mean)).T)
    log_det = 2.0 * np.sum(np.log(np.diag(chol)))
    k = len(mean)
    out = np.exp(-0.5 * np.sum(r * r, axis=0) - 0.5 * log_det - 0.5 * k * np.log(2 * np.pi))
    return out.reshape(diff.shape[:-1])


def density_at(mix: GaussianMixture2Mode, z, c: Constants | None = None):
    """Evaluate the mixture density at phase-space points.

    ``z`` has shape ``(4,)`` (returns a float) or ``(..., 4)`` (returns an
    array of the leading shape). The density is a classical probability
    density and does not depend on ``c``; the argument is accepted for
    interface symmetry.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim == 0 or z.shape[-1] != 4:
        raise ValueError("z must end in a 4-vector (q1, q2, p1, p2)")
    total = sum(w * _gaussian_pdf(z, comp.mean, comp.cov) for w, comp in zip(mix.weights, mix.components))
    return float(total) if z.ndim == 1 else total


def make_displaced_pair(p: DisplacedPairParams) -> GaussianMixture2Mode:
    sigma0 = p.sigma0
    plus = np.array([p.d, -p.d, 0.0, 0.0])
    return GaussianMixture2Mode(
        weights=(0.5, 0.5),
        components=(GaussianComponent(plus, sigma0), GaussianComponent(-plus, sigma0)),
    )


def mixture_covariance(mix: GaussianMixture2Mode) -> np.ndarray:
    """Total second central moment: mean internal covariance plus the spread of the means."""
    w = np.array(mix.weights)
    means = np.array([c.mean for c in mix.components])
    covs = np.array([c.cov for c in mix.components])
    mu = w @ means
    centred = means - mu
    sigma = np.einsum("i,ijk->jk", w, covs) + np.einsum("i,ij,ik->jk", w, centred, centred)
    sigma = 0.5 * (sigma + sigma.T)
    sigma.setflags(write=False)
    return sigma


def displaced_pair_covariance(p: DisplacedPairParams) -> np.ndarray:
    """Closed-form covariance of the displaced pair, written out entrywise."""
    d2 = p.d**2
    return np.array(
        [
            [p.s_q + d2, p.k_q - d2, 0.0, 0.0],
            [p.k_q - d2, p.s_q + d2, 0.0, 0.0],
            [0.0, 0.0, p.s_p, p.k_p],
            [0.0, 0.0, p.k_p, p.s_p],
        ]
    )
