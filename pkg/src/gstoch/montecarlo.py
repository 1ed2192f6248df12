"""Seeded path simulation under a fixed volatility control.

Each path owns an independent RNG stream derived from (seed, path index), so
bundles are bit-reproducible no matter how the work is chunked; increments are
Gaussian with the controlled covariance and the quadratic variation tracks the
compensator sigma_t^2 dt exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .partition import Partition
from .uncertainty import UncertaintySet, _psd_sqrt


def path_rng(seed: int, index: int) -> np.random.Generator:
    """The RNG stream owned by one path of one bundle."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),)))
    )


class ConstantPolicy:
    """One volatility (d=1) or one covariance index (d=2) for every step."""

    def __init__(self, value):
        self.value = value

    def choices(self, k, t, B_prefix, QV_prefix, rng_draws):
        return np.full(B_prefix.shape[0], self.value)


class TablePolicy:
    """A deterministic per-step table of volatilities / covariance indices."""

    def __init__(self, table):
        self.table = np.asarray(table)

    def choices(self, k, t, B_prefix, QV_prefix, rng_draws):
        return np.full(B_prefix.shape[0], self.table[k])


class FeedbackPolicy:
    """State feedback fn(t, b) -> volatility (d=1) or covariance index (d=2)."""

    def __init__(self, fn: Callable):
        self.fn = fn

    def choices(self, k, t, B_prefix, QV_prefix, rng_draws):
        return np.asarray(self.fn(t, B_prefix[:, -1]))


class RandomSwitchPolicy:
    """Per-step random pick among the endpoint choices, from the path streams."""

    def choices(self, k, t, B_prefix, QV_prefix, rng_draws):
        return rng_draws[:, k]


def resolve_policy(policy, uset: UncertaintySet):
    """Accept a policy object, a constant, a per-step table, a callable, or a name."""
    if isinstance(policy, str):
        if policy == "sigma-lo":
            return ConstantPolicy(uset.sigma_lo if uset.dimension == 1 else 0)
        if policy == "sigma-hi":
            return ConstantPolicy(uset.sigma_hi if uset.dimension == 1
                                  else len(uset.covariances) - 1)
        if policy == "random-switch":
            return RandomSwitchPolicy()
        raise ValueError(f"unknown policy name {policy!r}; "
                         "known: ['random-switch', 'sigma-hi', 'sigma-lo']")
    if hasattr(policy, "choices"):
        return policy
    if callable(policy):
        return FeedbackPolicy(policy)
    if np.ndim(policy) == 0:
        return ConstantPolicy(float(policy) if uset.dimension == 1 else int(policy))
    return TablePolicy(policy)


@dataclass(eq=False)
class PathBundle:
    """Sampled noise paths under one control, with seed provenance.

    d=1: B and QV have shape (M, N+1); d=2: B is (M, N+1, 2) and QV is
    (M, N+1, 2, 2). ``control_trace`` records the realized per-step choice
    (None after subsampling, where a step aggregates several fine choices).
    """

    partition: Partition
    dimension: int
    B: np.ndarray
    QV: np.ndarray
    control_trace: Optional[np.ndarray]
    seed: Optional[int]
    path_indices: np.ndarray

    @property
    def n_paths(self) -> int:
        return self.B.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.partition.times

    def subsample(self, coarse: Partition) -> "PathBundle":
        """Restrict the paths to a subgrid (quadratic variation aggregates exactly)."""
        idx = self.partition.indices_of(coarse.times)
        return PathBundle(partition=coarse, dimension=self.dimension,
                          B=self.B[:, idx], QV=self.QV[:, idx],
                          control_trace=None, seed=self.seed,
                          path_indices=self.path_indices)

    def component(self, axis: int) -> "PathBundle":
        """One coordinate of a 2-d bundle viewed as a 1-d bundle."""
        if self.dimension != 2:
            raise ValueError("component extraction needs a 2-d bundle")
        return PathBundle(partition=self.partition, dimension=1,
                          B=self.B[:, :, axis], QV=self.QV[:, :, axis, axis],
                          control_trace=None, seed=self.seed,
                          path_indices=self.path_indices)

    def envelope_violation(self, uset: UncertaintySet) -> float:
        """Worst violation of the quadratic-variation envelope (0.0 when clean)."""
        bounds = uset.qv_rate_bounds()
        dts = self.partition.dt
        worst = 0.0
        for v in range(self.dimension):
            dqv = np.diff(self.QV[:, :, v, v] if self.dimension == 2 else self.QV, axis=1)
            worst = max(worst,
                        float(np.max(bounds[v, 0] * dts - dqv, initial=0.0)),
                        float(np.max(dqv - bounds[v, 1] * dts, initial=0.0)))
        return worst


def _draw_streams(uset, rule, partition, seed, indices):
    """Per-path draws in a fixed order: increment normals, then switch uniforms."""
    n = partition.n_steps
    m = len(indices)
    shape = (m, n) if uset.dimension == 1 else (m, n, 2)
    normals = np.empty(shape)
    switches = np.empty((m, n)) if isinstance(rule, RandomSwitchPolicy) else None
    for row, index in enumerate(indices):
        rng = path_rng(seed, index)
        normals[row] = rng.standard_normal(shape[1:])
        if switches is not None:
            switches[row] = rng.random(n)
    return normals, switches


def _step_paths(uset, rule, partition, normals, switches):
    d = uset.dimension
    n = partition.n_steps
    dts = partition.dt
    m = normals.shape[0]
    if d == 1:
        lo, hi = uset.sigma_lo, uset.sigma_hi
        rng_draws = np.where(switches < 0.5, lo, hi) if switches is not None else None
        B = np.zeros((m, n + 1))
        QV = np.zeros((m, n + 1))
        trace = np.empty((m, n))
        for k in range(n):
            sig = np.broadcast_to(
                np.asarray(rule.choices(k, partition.times[k], B[:, : k + 1],
                                        QV[:, : k + 1], rng_draws), dtype=float),
                (m,))
            if np.any(sig < lo - 1e-12) or np.any(sig > hi + 1e-12):
                raise ValueError("policy produced a volatility outside the band")
            B[:, k + 1] = B[:, k] + sig * np.sqrt(dts[k]) * normals[:, k]
            QV[:, k + 1] = QV[:, k] + sig**2 * dts[k]
            trace[:, k] = sig
        return B, QV, trace

    n_q = len(uset.covariances)
    roots = [_psd_sqrt(np.asarray(q, dtype=float)) for q in uset.covariances]
    rng_draws = (np.minimum((switches * n_q).astype(int), n_q - 1)
                 if switches is not None else None)
    B = np.zeros((m, n + 1, 2))
    QV = np.zeros((m, n + 1, 2, 2))
    trace = np.empty((m, n), dtype=int)
    for k in range(n):
        qi = np.broadcast_to(
            np.asarray(rule.choices(k, partition.times[k], B[:, : k + 1],
                                    QV[:, : k + 1], rng_draws)).astype(int),
            (m,))
        if np.any(qi < 0) or np.any(qi >= n_q):
            raise ValueError("policy produced a covariance index out of range")
        sd = np.sqrt(dts[k])
        for j in range(n_q):
            mask = qi == j
            if not np.any(mask):
                continue
            B[mask, k + 1] = B[mask, k] + sd * normals[mask, k] @ roots[j].T
            QV[mask, k + 1] = QV[mask, k] + np.asarray(uset.covariances[j]) * dts[k]
        trace[:, k] = qi
    return B, QV, trace


def simulate_paths(uset: UncertaintySet, policy, partition: Partition,
                   n_paths: int, seed: int) -> PathBundle:
    """Sample ``n_paths`` controlled paths on the partition grid."""
    if n_paths < 1:
        raise ValueError(f"n_paths must be >= 1, got {n_paths}")
    rule = resolve_policy(policy, uset)
    indices = np.arange(n_paths)
    normals, switches = _draw_streams(uset, rule, partition, seed, indices)
    B, QV, trace = _step_paths(uset, rule, partition, normals, switches)
    return PathBundle(partition=partition, dimension=uset.dimension, B=B, QV=QV,
                      control_trace=trace, seed=seed, path_indices=indices)


def simulate_single(uset: UncertaintySet, policy, partition: Partition,
                    seed: int, index: int) -> PathBundle:
    """Rebuild, in isolation, the path a bundle would hold at ``index``."""
    rule = resolve_policy(policy, uset)
    indices = np.asarray([index])
    normals, switches = _draw_streams(uset, rule, partition, seed, indices)
    B, QV, trace = _step_paths(uset, rule, partition, normals, switches)
    return PathBundle(partition=partition, dimension=uset.dimension, B=B, QV=QV,
                      control_trace=trace, seed=seed, path_indices=indices)
