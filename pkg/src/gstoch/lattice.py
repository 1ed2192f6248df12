"""Recombining-lattice evaluation of worst-case terminal expectations (d=1).

The backward induction on the path tree only ever consults the current noise
value when the payoff depends on B_T alone, so the value function lives on the
lattice of reachable points a*sigma_lo*sqrt(dt) + b*sigma_hi*sqrt(dt) rather
than on path prefixes. That collapses the exponential tree to O(N^2) states
per level and supports the fine time grids needed for non-smooth payoffs.
Agrees with the path tree exactly (same recursion) wherever both fit in memory.
"""

from __future__ import annotations

import numpy as np

from .partition import Partition
from .uncertainty import UncertaintySet


def lattice_expectation(uset: UncertaintySet, partition: Partition, terminal_fn) -> float:
    """Worst-case expectation of terminal_fn(B_T) over adapted band controls.

    Requires a uniform partition; ``terminal_fn`` must broadcast over arrays.
    """
    if uset.dimension != 1:
        raise ValueError("the lattice evaluator is one-dimensional")
    dts = partition.dt
    if np.max(dts) - np.min(dts) > 1e-12 * partition.horizon:
        raise ValueError("the lattice evaluator needs a uniform partition")
    n = partition.n_steps
    dt = float(dts[0])
    lo = uset.sigma_lo * np.sqrt(dt)
    hi = uset.sigma_hi * np.sqrt(dt)

    # State (a, b): a steps at the low and b at the high volatility, signed.
    idx = np.arange(-n, n + 1)
    a_grid, b_grid = np.meshgrid(idx, idx, indexing="ij")
    v = np.asarray(terminal_fn(a_grid * lo + b_grid * hi), dtype=float)
    if v.shape != a_grid.shape:
        raise ValueError("terminal_fn must evaluate elementwise")

    for _ in range(n):
        low_move = 0.5 * (v[2:, 1:-1] + v[:-2, 1:-1])
        high_move = 0.5 * (v[1:-1, 2:] + v[1:-1, :-2])
        inner = np.maximum(low_move, high_move)
        v = np.pad(inner, 1)  # border never reached from the shrinking core
    return float(v[n, n])
