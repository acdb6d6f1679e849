"""Uniform lattices shared by the kernel and tomography code."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RegularGridInterpolator

__all__ = ["GridSpec", "WignerGrid", "uniform_step"]


@dataclass(frozen=True)
class GridSpec:
    """``n`` points per axis on ``[lo, hi]`` (endpoints included), ``dims`` axes."""

    lo: float = -8.0
    hi: float = 8.0
    n: int = 50
    dims: int = 2

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")
        if int(self.dims) != self.dims or self.dims < 1:
            raise ValueError(f"dims must be a positive integer, got {self.dims}")

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)

    @property
    def size(self) -> int:
        return self.n**self.dims

    def points(self) -> np.ndarray:
        """All lattice points, shape ``(n**dims, dims)``, first axis slowest."""
        axes = np.meshgrid(*([self.axis] * self.dims), indexing="ij")
        return np.stack([a.ravel() for a in axes], axis=-1)


def uniform_step(axis: np.ndarray, name: str = "axis") -> float:
    axis = np.asarray(axis, dtype=float)
    if axis.ndim != 1 or len(axis) < 2:
        raise ValueError(f"{name} must be a 1-D grid with at least 2 points")
    steps = np.diff(axis)
    h = (axis[-1] - axis[0]) / (len(axis) - 1)
    if h <= 0 or np.max(np.abs(steps - h)) > 1e-9 * abs(h):
        raise ValueError(f"{name} must be uniform and increasing")
    return float(h)


@dataclass(frozen=True)
class WignerGrid:
    """Single-mode Wigner function sampled on a rectangular grid.

    ``values[i, j]`` is ``W(q_axis[i], p_axis[j])``.
    """

    values: np.ndarray
    q_axis: np.ndarray
    p_axis: np.ndarray

    def __post_init__(self):
        q = np.array(self.q_axis, dtype=float)
        p = np.array(self.p_axis, dtype=float)
        uniform_step(q, "q_axis")
        uniform_step(p, "p_axis")
        vals = np.array(self.values, dtype=float)
        if vals.shape != (len(q), len(p)):
            raise ValueError(f"values shape {vals.shape} does not match axes ({len(q)}, {len(p)})")
        for arr in (q, p, vals):
            arr.setflags(write=False)
        object.__setattr__(self, "q_axis", q)
        object.__setattr__(self, "p_axis", p)
        object.__setattr__(self, "values", vals)

    @property
    def dq(self) -> float:
        return uniform_step(self.q_axis)

    @property
    def dp(self) -> float:
        return uniform_step(self.p_axis)

    def total(self) -> float:
        """Riemann sum times cell area; 1 for a normalized state on an adequate grid."""
        return float(self.values.sum() * self.dq * self.dp)

    def at(self, q, p):
        """Bilinear interpolation of ``W`` at ``(q, p)``."""
        interp = RegularGridInterpolator((self.q_axis, self.p_axis), self.values)
        q, p = np.broadcast_arrays(np.asarray(q, float), np.asarray(p, float))
        out = interp(np.stack([q, p], axis=-1).reshape(-1, 2)).reshape(q.shape)
        return float(out) if out.ndim == 0 else out

    @classmethod
    def from_function(cls, func, lo: float = -6.0, hi: float = 6.0, n: int = 256) -> "WignerGrid":
        """Sample ``func(Q, P)`` on an ``n x n`` square grid over ``[lo, hi]^2``."""
        axis = np.linspace(lo, hi, n)
        Q, P = np.meshgrid(axis, axis, indexing="ij")
        return cls(func(Q, P), axis, axis)
