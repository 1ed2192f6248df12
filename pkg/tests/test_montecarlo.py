import numpy as np
import pytest

from gstoch import (Partition, UncertaintySet, simulate_paths, simulate_single)

U = UncertaintySet.interval(0.5, 1.0)
PI = Partition.uniform(1.0, 8)


def test_constant_high_policy_is_centered():
    m = 4000
    bundle = simulate_paths(U, "sigma-hi", PI, m, seed=7)
    assert abs(np.mean(bundle.B[:, -1])) < 3.0 * 1.0 * np.sqrt(1.0 / m)


def test_low_policy_compensator_exact():
    bundle = simulate_paths(U, "sigma-lo", PI, 50, seed=3)
    dqv = np.diff(bundle.QV, axis=1)
    assert np.all(dqv == 0.25 * (1.0 / 8.0))


def test_same_seed_identical_bundles():
    a = simulate_paths(U, "random-switch", PI, 100, seed=11)
    b = simulate_paths(U, "random-switch", PI, 100, seed=11)
    assert np.array_equal(a.B, b.B)
    assert np.array_equal(a.QV, b.QV)
    assert np.array_equal(a.control_trace, b.control_trace)
    c = simulate_paths(U, "random-switch", PI, 100, seed=12)
    assert not np.array_equal(a.B, c.B)


def test_per_path_stream_is_chunk_independent():
    bundle = simulate_paths(U, "random-switch", PI, 32, seed=5)
    for idx in (0, 13, 31):
        solo = simulate_single(U, "random-switch", PI, seed=5, index=idx)
        assert np.array_equal(solo.B[0], bundle.B[idx])
        assert np.array_equal(solo.QV[0], bundle.QV[idx])


def test_unknown_policy_name():
    with pytest.raises(ValueError, match="unknown policy name"):
        simulate_paths(U, "does-not-exist", PI, 4, seed=1)


def test_policy_forms():
    table = simulate_paths(U, [0.5, 1.0, 0.5, 1.0, 0.5, 1.0, 0.5, 1.0], PI, 10, seed=2)
    assert np.all(table.control_trace[:, 0] == 0.5)
    assert np.all(table.control_trace[:, 1] == 1.0)
    fb = simulate_paths(U, lambda t, b: np.where(b >= 0.0, 1.0, 0.5), PI, 10, seed=2)
    assert fb.envelope_violation(U) == 0.0
    with pytest.raises(ValueError, match="outside the band"):
        simulate_paths(U, 1.5, PI, 4, seed=1)


def test_envelope_and_monotone_qv():
    bundle = simulate_paths(U, "random-switch", PI, 200, seed=9)
    assert bundle.envelope_violation(U) == 0.0
    assert np.all(np.diff(bundle.QV, axis=1) > 0.0)


def test_subsample_keeps_paths_and_aggregates_qv():
    fine = Partition.uniform(1.0, 16)
    coarse = Partition.uniform(1.0, 4)
    bundle = simulate_paths(U, "random-switch", fine, 64, seed=21)
    sub = bundle.subsample(coarse)
    assert sub.B.shape == (64, 5)
    assert np.array_equal(sub.B[:, -1], bundle.B[:, -1])
    assert sub.envelope_violation(U) == 0.0
    assert sub.control_trace is None


def test_two_dimensional_simulation():
    q = np.array([[1.0, 0.4], [0.4, 0.5]])
    u2 = UncertaintySet.matrix_family([q, np.diag([0.25, 0.25])])
    bundle = simulate_paths(u2, "random-switch", PI, 3000, seed=13)
    assert bundle.B.shape == (3000, 9, 2)
    assert bundle.envelope_violation(u2) == 0.0
    # realized covariance of one step under the mixed control stays inside hull
    comp = bundle.component(0)
    assert comp.B.shape == (3000, 9)
    assert np.array_equal(comp.QV, bundle.QV[:, :, 0, 0])
