"""Stochastic calculus under volatility uncertainty, at desk scale.

Worst-case (sublinear) expectations of path functionals are computed by two
independent oracles: exact dynamic programming on finite scenario trees and a
monotone finite-difference solver for the associated nonlinear heat equation.
On top of those sit conditional expectations of simple random variables,
Bochner / stochastic / quadratic-variation integrals with stopping times, a
pathwise change-of-variables checker with localization, and a seeded,
replayable verification harness.
"""

from .errors import (BudgetExceededError, ConfigError, DerivativeMismatchError,
                     DivergenceError, GridConfigError)
from .lattice import lattice_expectation
from .montecarlo import (ConstantPolicy, FeedbackPolicy, PathBundle,
                         RandomSwitchPolicy, TablePolicy, path_rng,
                         resolve_policy, simulate_paths, simulate_single)
from .partition import Partition
from .payoffs import CylinderPayoff, PathPayoff, constant_payoff, terminal_payoff
from .tree import (ControlPolicy, NodeFunction, ScenarioTree, TreePaths,
                   build_tree, capacity, conditional_value, lp_norm,
                   upper_expectation)
from .uncertainty import UncertaintySet, g_function

__all__ = [name for name in dir() if not name.startswith("_")]
