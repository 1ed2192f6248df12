"""Volatility and covariance uncertainty sets and the sublinear generator G.

A one-dimensional set is a volatility band [sigma_lo, sigma_hi]; a
two-dimensional set is a finite family of PSD covariance-rate matrices.
Either one induces the generator

    G(a) = 0.5 * (sigma_hi**2 * a_plus - sigma_lo**2 * a_minus)   (d = 1)
    G(A) = 0.5 * max_Q trace(A @ Q)                                (d = 2)

which is positively homogeneous and sub-additive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

_SYM_TOL = 1e-12


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root, eigenvalues clamped at zero for round-off."""
    w, v = np.linalg.eigh(mat)
    w = np.maximum(w, 0.0)
    return (v * np.sqrt(w)) @ v.T


@dataclass(frozen=True, eq=False)
class UncertaintySet:
    """Uncertain instantaneous covariance of the driving noise.

    For ``dimension == 1`` the volatility per sqrt(time-unit) ranges over
    ``[sigma_lo, sigma_hi]`` with ``0 <= sigma_lo <= sigma_hi < inf``.
    For ``dimension == 2`` the covariance rate ranges over the finite set
    ``covariances`` of symmetric PSD 2x2 matrices.
    """

    dimension: int
    sigma_lo: float = 0.0
    sigma_hi: float = 0.0
    covariances: tuple = field(default=())

    def __post_init__(self):
        if self.dimension == 1:
            lo, hi = float(self.sigma_lo), float(self.sigma_hi)
            if not (0.0 <= lo <= hi < np.inf):
                raise ValueError(
                    f"volatility band must satisfy 0 <= lo <= hi < inf, got [{lo}, {hi}]"
                )
            object.__setattr__(self, "sigma_lo", lo)
            object.__setattr__(self, "sigma_hi", hi)
        elif self.dimension == 2:
            if not self.covariances:
                raise ValueError("dimension 2 requires a non-empty covariance family")
            mats = []
            for q in self.covariances:
                q = np.asarray(q, dtype=float)
                if q.shape != (2, 2):
                    raise ValueError(f"covariance must be 2x2, got shape {q.shape}")
                if np.max(np.abs(q - q.T)) > _SYM_TOL * max(1.0, np.max(np.abs(q))):
                    raise ValueError("covariance matrix is not symmetric")
                if np.min(np.linalg.eigvalsh(q)) < -1e-10:
                    raise ValueError("covariance matrix is not positive semidefinite")
                q.setflags(write=False)
                mats.append(q)
            object.__setattr__(self, "covariances", tuple(mats))
        else:
            raise ValueError(f"dimension must be 1 or 2, got {self.dimension}")

    @classmethod
    def interval(cls, sigma_lo: float, sigma_hi: float) -> "UncertaintySet":
        return cls(dimension=1, sigma_lo=sigma_lo, sigma_hi=sigma_hi)

    @classmethod
    def matrix_family(cls, covariances: Sequence) -> "UncertaintySet":
        return cls(dimension=2, covariances=tuple(covariances))

    # -- generator ---------------------------------------------------------

    def g(self, alpha) -> float:
        return g_function(alpha, self)

    # -- derived quantities --------------------------------------------------

    def variance_bounds(self) -> tuple[float, float]:
        """Bounds on the instantaneous variance rate (d=1)."""
        if self.dimension != 1:
            raise ValueError("variance_bounds is a d=1 quantity; see qv_rate_bounds")
        return self.sigma_lo**2, self.sigma_hi**2

    def qv_rate_bounds(self) -> np.ndarray:
        """Per-axis (lo, hi) bounds on the diagonal quadratic-variation rate.

        Shape (d, 2); axis v bounds the rate of <B^v>.
        """
        if self.dimension == 1:
            return np.array([[self.sigma_lo**2, self.sigma_hi**2]])
        diags = np.array([np.diag(q) for q in self.covariances])
        return np.stack([diags.min(axis=0), diags.max(axis=0)], axis=1)

    def directional_variances(self, a) -> tuple[float, float]:
        """(lo, hi) variance rates of the scalar projection a . B.

        hi = 2 G(a a^T) and lo = -2 G(-a a^T), so the projection behaves as a
        one-dimensional noise with that volatility band.
        """
        a = np.asarray(a, dtype=float)
        if self.dimension == 1:
            s = float(a) ** 2 if a.ndim == 0 else float(a[0]) ** 2
            return s * self.sigma_lo**2, s * self.sigma_hi**2
        outer = np.outer(a, a)
        return -2.0 * self.g(-outer), 2.0 * self.g(outer)

    def default_choices(self):
        """The default per-step control grid: band endpoints (d=1), the family (d=2)."""
        if self.dimension == 1:
            if self.sigma_lo == self.sigma_hi:
                return np.array([self.sigma_hi])
            return np.array([self.sigma_lo, self.sigma_hi])
        return list(self.covariances)

    def increment_points(self, choice, dt: float) -> np.ndarray:
        """Equiprobable increment support for one step of length dt.

        d=1: the two points +-sigma*sqrt(dt), shape (2, 1).
        d=2: the four points S @ (+-1, +-1) with S = sqrt(Q dt), shape (4, 2).
        Each support has mean zero and covariance exactly Q*dt.
        """
        if self.dimension == 1:
            step = float(choice) * np.sqrt(dt)
            return np.array([[step], [-step]])
        s = _psd_sqrt(np.asarray(choice, dtype=float) * dt)
        signs = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)
        return signs @ s.T


def g_function(alpha, uset: UncertaintySet) -> float:
    """Evaluate the generator G on a scalar (d=1) or symmetric matrix (d=2)."""
    if uset.dimension == 1:
        a = float(alpha)
        pos = max(a, 0.0)
        neg = max(-a, 0.0)
        return 0.5 * (uset.sigma_hi**2 * pos - uset.sigma_lo**2 * neg)
    a = np.asarray(alpha, dtype=float)
    if a.shape != (2, 2):
        raise ValueError(f"expected a 2x2 symmetric matrix, got shape {a.shape}")
    if np.max(np.abs(a - a.T)) > _SYM_TOL * max(1.0, np.max(np.abs(a))):
        raise ValueError("matrix argument of G must be symmetric")
    return 0.5 * max(float(np.trace(a @ q)) for q in uset.covariances)
