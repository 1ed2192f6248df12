"""Time partitions of [0, T]."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_GRID_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Partition:
    """Ordered grid 0 = t_0 < t_1 < ... < t_N = T."""

    times: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size < 2:
            raise ValueError("a partition needs at least two points (N >= 1)")
        if abs(t[0]) > 0.0:
            raise ValueError(f"partition must start at 0, got t_0 = {t[0]}")
        if np.any(np.diff(t) <= 0):
            raise ValueError("partition times must be strictly increasing")
        t.setflags(write=False)
        object.__setattr__(self, "times", t)

    @classmethod
    def uniform(cls, horizon: float, n_steps: int) -> "Partition":
        if n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {n_steps}")
        return cls(np.linspace(0.0, float(horizon), n_steps + 1))

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    @property
    def n_steps(self) -> int:
        return len(self.times) - 1

    @property
    def dt(self) -> np.ndarray:
        return np.diff(self.times)

    @property
    def mesh(self) -> float:
        return float(np.max(self.dt))

    def index_of(self, t: float) -> int:
        """Index of grid time t; raises if t is not on the grid."""
        idx = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[idx] - t) > _GRID_TOL * max(1.0, self.horizon):
            raise ValueError(f"time {t} is not a partition point")
        return idx

    def indices_of(self, ts) -> np.ndarray:
        return np.array([self.index_of(t) for t in np.atleast_1d(ts)], dtype=int)

    def refine(self, factor: int = 2) -> "Partition":
        """Insert factor-1 equally spaced points in every step (nested grids)."""
        if factor < 2:
            raise ValueError("refinement factor must be >= 2")
        t = self.times
        pieces = [
            np.linspace(t[k], t[k + 1], factor, endpoint=False)
            for k in range(self.n_steps)
        ]
        return Partition(np.concatenate(pieces + [t[-1:]]))

    def is_subgrid_of(self, other: "Partition") -> bool:
        try:
            other.indices_of(self.times)
        except ValueError:
            return False
        return True

    def round_up(self, t: float) -> float:
        """Smallest grid point >= t; the horizon if t exceeds it."""
        if t > self.horizon:
            return self.horizon
        idx = int(np.searchsorted(self.times, t - _GRID_TOL, side="left"))
        return float(self.times[min(idx, self.n_steps)])
