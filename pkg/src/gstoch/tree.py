"""Finite adapted scenario trees and worst-case expectation by backward induction.

Every level offers a finite menu of volatility choices; under each choice the
increment is a mean-zero equiprobable support with covariance exactly Q*dt
(two points +-sigma*sqrt(dt) in one dimension, four matched points in two).
An adapted control policy picks one choice per node and induces one ordinary
probability measure on the leaves; the worst-case (sublinear) expectation is
the supremum over all such policies, computed exactly by dynamic programming:

    value(node) = max over choices of the mean of the child values.

The tree is the brute-force oracle the rest of the package is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError
from .partition import Partition
from .uncertainty import UncertaintySet

DEFAULT_NODE_BUDGET = 2_000_000


@dataclass(frozen=True, eq=False)
class NodeFunction:
    """A real value attached to every node of one tree level."""

    level: int
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))


@dataclass(frozen=True, eq=False)
class ControlPolicy:
    """An adapted volatility choice: one choice index per non-leaf node."""

    choice_indices: tuple  # per level k: int array of shape (n_k,)

    def choice_at(self, level: int, node: int) -> int:
        return int(self.choice_indices[level][node])


@dataclass(frozen=True, eq=False)
class TreePaths:
    """All root-to-node paths of one level, as dense arrays."""

    times: np.ndarray  # (k+1,)
    B: np.ndarray      # (n, k+1) or (n, k+1, 2)
    QV: np.ndarray     # (n, k+1) or (n, k+1, 2, 2)

    @property
    def n(self) -> int:
        return self.B.shape[0]

    def increments(self) -> np.ndarray:
        return np.diff(self.B, axis=1)


class ScenarioTree:
    """Path-prefix tree of increments under all admissible volatility choices."""

    def __init__(self, uset: UncertaintySet, partition: Partition,
                 choices_per_level=None, node_budget: int = DEFAULT_NODE_BUDGET):
        self.uset = uset
        self.partition = partition
        self.node_budget = int(node_budget)
        d = uset.dimension
        n_steps = partition.n_steps

        if choices_per_level is None:
            choices_per_level = [uset.default_choices()] * n_steps
        elif len(choices_per_level) != n_steps:
            raise ValueError("need one choice set per partition step")
        self.choice_sets = [self._validated_choices(c) for c in choices_per_level]

        branch = 2 if d == 1 else 4
        self._branch = branch
        sizes = [1]
        for cs in self.choice_sets:
            sizes.append(sizes[-1] * len(cs) * branch)
        total = sum(sizes)
        if total > self.node_budget:
            raise BudgetExceededError(
                f"tree would hold {total} node states; the budget is {self.node_budget}"
            )
        self.level_sizes = sizes

        # Per-level edge data: one row per child slot of a single parent.
        self._edge_incr = []    # (c_k, d) increments added to B
        self._edge_qv = []      # (c_k,) or (c_k, 2, 2) increments added to <B>
        self._edge_choice = []  # (c_k,) index into the level's choice set
        dts = partition.dt
        for k, cs in enumerate(self.choice_sets):
            incr_rows, qv_rows, choice_rows = [], [], []
            for ci, choice in enumerate(cs):
                pts = uset.increment_points(choice, dts[k])
                incr_rows.append(pts)
                if d == 1:
                    qv_rows.append(np.full(branch, float(choice) ** 2 * dts[k]))
                else:
                    qv_rows.append(np.broadcast_to(np.asarray(choice) * dts[k],
                                                   (branch, 2, 2)).copy())
                choice_rows.append(np.full(branch, ci, dtype=int))
            self._edge_incr.append(np.concatenate(incr_rows, axis=0))
            self._edge_qv.append(np.concatenate(qv_rows, axis=0))
            self._edge_choice.append(np.concatenate(choice_rows))

        # Node state arrays per level.
        if d == 1:
            b = [np.zeros(1)]
            qv = [np.zeros(1)]
        else:
            b = [np.zeros((1, 2))]
            qv = [np.zeros((1, 2, 2))]
        for k in range(n_steps):
            c_k = len(self._edge_choice[k])
            n_k = self.level_sizes[k]
            if d == 1:
                b.append(np.repeat(b[k], c_k) + np.tile(self._edge_incr[k][:, 0], n_k))
                qv.append(np.repeat(qv[k], c_k) + np.tile(self._edge_qv[k], n_k))
            else:
                b.append(np.repeat(b[k], c_k, axis=0)
                         + np.tile(self._edge_incr[k], (n_k, 1)))
                qv.append(np.repeat(qv[k], c_k, axis=0)
                          + np.tile(self._edge_qv[k], (n_k, 1, 1)))
        self.b = b
        self.qv = qv

    def _validated_choices(self, choices):
        if self.uset.dimension == 1:
            arr = np.sort(np.atleast_1d(np.asarray(choices, dtype=float)))
            lo, hi = self.uset.sigma_lo, self.uset.sigma_hi
            if arr[0] < lo - 1e-12 or arr[-1] > hi + 1e-12:
                raise ValueError("volatility choices must lie within the band")
            return arr
        return list(choices)

    # -- structure -----------------------------------------------------------

    @property
    def dimension(self) -> int:
        return self.uset.dimension

    @property
    def n_levels(self) -> int:
        return self.partition.n_steps

    def level_size(self, k: int) -> int:
        return self.level_sizes[k]

    def ancestor_map(self, level: int, ancestor_level: int) -> np.ndarray:
        """Index of the ancestor at ``ancestor_level`` for every node of ``level``."""
        stride = self.level_sizes[level] // self.level_sizes[ancestor_level]
        return np.arange(self.level_sizes[level]) // stride

    def paths_to_level(self, level: int) -> TreePaths:
        n = self.level_sizes[level]
        cols_b, cols_qv = [], []
        for j in range(level + 1):
            stride = n // self.level_sizes[j]
            cols_b.append(np.repeat(self.b[j], stride, axis=0))
            cols_qv.append(np.repeat(self.qv[j], stride, axis=0))
        return TreePaths(times=self.partition.times[: level + 1],
                         B=np.stack(cols_b, axis=1),
                         QV=np.stack(cols_qv, axis=1))

    def leaf_paths(self) -> TreePaths:
        return self.paths_to_level(self.n_levels)

    def window_tree(self, i: int, j: int | None = None) -> "ScenarioTree":
        """The structurally identical tree spanning grid levels [i, j], re-based at 0."""
        j = self.n_levels if j is None else j
        if not (0 <= i < j <= self.n_levels):
            raise ValueError(f"need 0 <= i < j <= {self.n_levels}, got ({i}, {j})")
        times = self.partition.times[i: j + 1] - self.partition.times[i]
        return ScenarioTree(self.uset, Partition(times),
                            choices_per_level=self.choice_sets[i:j],
                            node_budget=self.node_budget)

    # -- backward induction ----------------------------------------------------

    def _step_back(self, values: np.ndarray, level: int, with_argmax: bool = False):
        """One backward step from level+1 to level."""
        n_k = self.level_sizes[level]
        m_k = len(self.choice_sets[level])
        means = values.reshape(n_k, m_k, self._branch).mean(axis=2)
        if self.dimension == 1:
            # ties resolved toward the larger volatility (choices sorted ascending)
            pick = m_k - 1 - np.argmax(means[:, ::-1], axis=1)
        else:
            # ties resolved toward the lower family index
            pick = np.argmax(means, axis=1)
        best = means[np.arange(n_k), pick]
        return (best, pick) if with_argmax else (best, None)

    def backward(self, values: np.ndarray, from_level: int, to_level: int) -> np.ndarray:
        v = np.asarray(values, dtype=float)
        for k in range(from_level - 1, to_level - 1, -1):
            v, _ = self._step_back(v, k)
        return v

    def leaf_values(self, payoff) -> np.ndarray:
        paths = self.leaf_paths()
        vals = payoff.evaluate_paths(paths.times, paths.B, paths.QV)
        if vals.shape != (paths.n,):
            raise ValueError("payoff must produce one value per leaf path")
        return vals

    def conditional_value(self, payoff, s: float) -> NodeFunction:
        """Level-s node values of the backward induction (grid time s)."""
        s_idx = self.partition.index_of(s)
        if isinstance(payoff, NodeFunction):
            if payoff.level >= s_idx:
                return NodeFunction(s_idx, self.backward(payoff.values, payoff.level, s_idx))
            stride = self.level_sizes[s_idx] // self.level_sizes[payoff.level]
            return NodeFunction(s_idx, np.repeat(payoff.values, stride))
        return NodeFunction(s_idx, self.backward(self.leaf_values(payoff),
                                                 self.n_levels, s_idx))

    def upper_expectation(self, payoff) -> float:
        return float(self.conditional_value(payoff, 0.0).values[0])

    def optimal_policy(self, payoff) -> ControlPolicy:
        v = self.leaf_values(payoff) if not isinstance(payoff, NodeFunction) else payoff.values
        picks = [None] * self.n_levels
        for k in range(self.n_levels - 1, -1, -1):
            v, pick = self._step_back(v, k, with_argmax=True)
            picks[k] = pick
        return ControlPolicy(tuple(picks))

    def expectation_under_policy(self, policy: ControlPolicy, payoff) -> float:
        """Plain expectation under the single measure the policy induces."""
        v = self.leaf_values(payoff)
        for k in range(self.n_levels - 1, -1, -1):
            n_k = self.level_sizes[k]
            m_k = len(self.choice_sets[k])
            means = v.reshape(n_k, m_k, self._branch).mean(axis=2)
            v = means[np.arange(n_k), np.asarray(policy.choice_indices[k], dtype=int)]
        return float(v[0])

    def capacity(self, event) -> float:
        """Worst-case probability of a leaf event (indicator upper expectation)."""
        paths = self.leaf_paths()
        ind = np.asarray(event.evaluate_paths(paths.times, paths.B, paths.QV),
                         dtype=float)
        if np.any((ind != 0.0) & (ind != 1.0)):
            raise ValueError("event must evaluate to 0/1 per leaf")
        return float(self.backward(ind, self.n_levels, 0)[0])

    def lp_norm(self, payoff, p: int) -> float:
        if p not in (1, 2, 4, 8):
            raise ValueError(f"p must be one of 1, 2, 4, 8; got {p}")
        vals = np.abs(self.leaf_values(payoff)) ** p
        return float(self.backward(vals, self.n_levels, 0)[0]) ** (1.0 / p)


def build_tree(uset: UncertaintySet, partition: Partition, choices_per_level=None,
               node_budget: int = DEFAULT_NODE_BUDGET) -> ScenarioTree:
    return ScenarioTree(uset, partition, choices_per_level, node_budget)


def upper_expectation(tree: ScenarioTree, payoff) -> float:
    return tree.upper_expectation(payoff)


def conditional_value(tree: ScenarioTree, payoff, s: float) -> NodeFunction:
    return tree.conditional_value(payoff, s)


def capacity(tree: ScenarioTree, event) -> float:
    return tree.capacity(event)


def lp_norm(tree: ScenarioTree, payoff, p: int) -> float:
    return tree.lp_norm(payoff, p)
