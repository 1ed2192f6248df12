import numpy as np
import pytest

from gstoch import Partition


def test_uniform_basics():
    pi = Partition.uniform(1.0, 4)
    assert pi.n_steps == 4
    assert pi.horizon == 1.0
    assert pi.mesh == pytest.approx(0.25)


def test_validation():
    with pytest.raises(ValueError):
        Partition(np.array([0.0]))
    with pytest.raises(ValueError):
        Partition(np.array([0.1, 0.5]))
    with pytest.raises(ValueError):
        Partition(np.array([0.0, 0.5, 0.5]))
    with pytest.raises(ValueError):
        Partition.uniform(1.0, 0)


def test_index_of():
    pi = Partition(np.array([0.0, 0.25, 0.5, 1.0]))
    assert pi.index_of(0.5) == 2
    with pytest.raises(ValueError):
        pi.index_of(0.3)


def test_refine_is_nested():
    pi = Partition.uniform(2.0, 3)
    fine = pi.refine(2)
    assert fine.n_steps == 6
    assert pi.is_subgrid_of(fine)
    assert not fine.is_subgrid_of(pi)


def test_round_up():
    pi = Partition(np.array([0.0, 0.25, 0.5, 1.0]))
    assert pi.round_up(0.3) == 0.5
    assert pi.round_up(0.25) == 0.25
    assert pi.round_up(0.0) == 0.0
    assert pi.round_up(1.7) == 1.0
