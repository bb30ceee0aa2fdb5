import math

import numpy as np
import pytest

import odlinbai


def test_standard_basis_design_is_uniform():
    design = odlinbai.solve_g_optimal(np.eye(3))
    assert np.allclose(design.weights, 1 / 3, atol=1e-9)
    assert design.g_value == pytest.approx(3.0, rel=1e-6)


def test_design_certificate_on_random_arms():
    rng = np.random.default_rng(1)
    arms = rng.standard_normal((20, 4))
    design = odlinbai.solve_g_optimal(arms, eps=1e-7)
    assert design.g_value <= 4 * (1 + 1e-6)
    assert odlinbai.g_of(design.weights, arms) == pytest.approx(design.g_value, rel=1e-9)


def test_effective_dimension_and_errors():
    arms = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]])
    assert odlinbai.effective_dimension(arms) == 2
    with pytest.raises(odlinbai.ZeroSpanError):
        odlinbai.effective_dimension(np.zeros((3, 2)))


def test_compute_m_values():
    assert odlinbai.compute_m(25, 25, 2) == 22
    assert odlinbai.compute_m(100, 10, 4) == 44
    with pytest.raises(odlinbai.BudgetTooSmallError):
        odlinbai.compute_m(3, 3, 2)


def test_hardness_worked_example():
    prof = odlinbai.hardness_profile(np.array([0.1, 0.1, 0.2, 0.3]), 3)
    assert prof["H2_lin"] == pytest.approx(200)
    assert prof["H1_lin"] == pytest.approx(225)
    assert prof["H1"] == pytest.approx(225 + 1 / 0.09, abs=1e-6)


def test_theorem2_bound():
    assert odlinbai.theorem2_bound(450, 2, 2, 2.0) == pytest.approx(7 * math.exp(-7))


def test_noiseless_runs_find_best_arm():
    inst = odlinbai.gen_hard_instance(20, seed=4, noise_std=0.0)
    for algo in odlinbai.algorithms():
        trace = odlinbai.run(algo, inst, 200, seed=1)
        assert trace["output_arm"] == inst.best_arm == 0
        assert trace["total_pulls"] <= 200


def test_mab_embedding_and_instance_roundtrip(tmp_path):
    inst = odlinbai.gen_mab_embedding([0.9, 0.5], pad_to=5)
    assert np.allclose(inst.expected_rewards, [0.9, 0.5, 0, 0, 0])
    path = str(tmp_path / "inst.csv")
    inst.save(path)
    back = odlinbai.load_instance(path)
    assert np.array_equal(back.arms, inst.arms)
    assert np.array_equal(back.theta, inst.theta)


def test_bench_is_deterministic():
    kwargs = dict(instances=["sphere:d=2;c=2"], algos=["odlinbai", "sh"], budgets=[20],
                  trials=64, seed=3)
    a = odlinbai.bench(jobs=1, **kwargs)
    b = odlinbai.bench(jobs=2, **kwargs)
    assert a == b
    for row in a:
        assert row["failure"] is None
        assert row["ci_lo"] <= row["error_rate"] <= row["ci_hi"]
