"""Payoff functionals evaluated on discrete noise paths.

Two flavours:

* ``CylinderPayoff`` - a function of the noise at finitely many monitoring
  times, specified either on the B-values at those times or on the
  consecutive increments between them (with an implicit start at t=0).
* ``PathPayoff`` - an arbitrary functional of the whole sampled path
  (B and its quadratic variation), used for integral-type payoffs and
  event indicators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

_GRID_TOL = 1e-9


def _columns_at(times_axis: np.ndarray, monitor_times, values: np.ndarray) -> list:
    """Columns of a path array at the requested monitoring times."""
    cols = []
    for t in monitor_times:
        idx = int(np.argmin(np.abs(times_axis - t)))
        if abs(times_axis[idx] - t) > _GRID_TOL * max(1.0, float(times_axis[-1])):
            raise ValueError(f"monitoring time {t} is not on the path grid")
        cols.append(values[..., idx])
    return cols


@dataclass(frozen=True, eq=False)
class CylinderPayoff:
    """phi evaluated at finitely many monitoring times of a scalar noise path.

    ``mode == "values"``     : fn(B_{t_1}, ..., B_{t_n})
    ``mode == "increments"`` : fn(B_{t_1} - B_{t_0}, ..., B_{t_n} - B_{t_{n-1}})
    with t_0 = 0. ``fn`` must broadcast over numpy arrays.
    """

    times: tuple
    fn: Callable
    mode: str = "increments"
    name: str = ""

    def __post_init__(self):
        ts = tuple(float(t) for t in self.times)
        if len(ts) == 0:
            raise ValueError("a cylinder payoff needs at least one monitoring time")
        if any(b <= a for a, b in zip(ts, ts[1:])) or ts[0] <= 0:
            raise ValueError("monitoring times must be strictly increasing and positive")
        if self.mode not in ("values", "increments"):
            raise ValueError(f"unknown payoff mode {self.mode!r}")
        object.__setattr__(self, "times", ts)

    @property
    def n_times(self) -> int:
        return len(self.times)

    def on_values(self, *bvals):
        if self.mode == "values":
            return self.fn(*bvals)
        prev = np.zeros_like(bvals[0])
        incs = []
        for b in bvals:
            incs.append(b - prev)
            prev = b
        return self.fn(*incs)

    def on_increments(self, *incs):
        if self.mode == "increments":
            return self.fn(*incs)
        vals, acc = [], 0.0
        for x in incs:
            acc = acc + x
            vals.append(acc)
        return self.fn(*vals)

    def evaluate_paths(self, times_axis, B, QV=None) -> np.ndarray:
        cols = _columns_at(np.asarray(times_axis, dtype=float), self.times, B)
        return np.asarray(self.on_values(*cols), dtype=float)


@dataclass(frozen=True, eq=False)
class PathPayoff:
    """A functional fn(times, B, QV) -> value per path (leading axis)."""

    fn: Callable
    name: str = ""

    def evaluate_paths(self, times_axis, B, QV=None) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(times_axis, dtype=float), B, QV), dtype=float)


def constant_payoff(c: float, horizon: float) -> CylinderPayoff:
    return CylinderPayoff((horizon,), lambda x: np.full_like(np.asarray(x, dtype=float), float(c)),
                          mode="values", name=f"const[{c}]")


def terminal_payoff(fn: Callable, horizon: float, name: str = "") -> CylinderPayoff:
    """phi(B_T) as a cylinder payoff on the single time T."""
    return CylinderPayoff((horizon,), fn, mode="values", name=name or "terminal")
