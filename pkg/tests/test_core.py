import numpy as np
import pytest

from nmtr import ConfigError, Problem, RunRecord, SolverConfig, validate_config


class TestValidateConfig:
    def test_defaults_are_valid(self):
        cfg = SolverConfig()
        assert validate_config(cfg) is cfg
        assert (cfg.mu1, cfg.mu2, cfg.c1, cfg.c2) == (0.05, 0.9, 0.25, 2.5)
        assert cfg.epsilon == 1e-5 and cfg.window_N == 10 and cfg.k_max == 10000

    def test_zero_mu1_rejected(self):
        with pytest.raises(ConfigError, match="mu1 must be > 0"):
            validate_config(SolverConfig(mu1=0.0))

    def test_mu2_below_mu1_rejected(self):
        with pytest.raises(ConfigError, match="mu2 >= mu1"):
            validate_config(SolverConfig(mu1=0.5, mu2=0.4))

    @pytest.mark.parametrize("change, fragment", [
        ({"c1": 1.0}, "c1"),
        ({"c2": 1.0}, "c2"),
        ({"rho1": 0.0}, "rho1"),
        ({"rho2": 0.5}, "rho2"),
        ({"eta0": 1.0}, "eta0"),
        ({"eta_fixed": -0.1}, "eta_fixed"),
        ({"window_N": 0}, "window_N"),
        ({"strategy": "armijo"}, "strategy"),
        ({"radius_rule": "dogleg"}, "radius_rule"),
        ({"epsilon": 0.0}, "epsilon"),
        ({"delta0_scale": 0.0}, "delta0_scale"),
    ])
    def test_each_constraint_is_named(self, change, fragment):
        with pytest.raises(ConfigError, match=fragment):
            validate_config(SolverConfig(**change))

    def test_mu1_equal_mu2_allowed(self):
        validate_config(SolverConfig(mu1=0.3, mu2=0.3))

    def test_replace_returns_new_object(self):
        cfg = SolverConfig()
        other = cfg.replace(eta0=0.45)
        assert other.eta0 == 0.45 and cfg.eta0 == 0.25

    def test_config_error_is_value_error(self):
        assert issubclass(ConfigError, ValueError)


class TestProblem:
    def test_start_is_read_only_copy(self):
        x0 = [1.0, 2.0]
        p = Problem("q", 2, lambda x: 0.0, lambda x: np.zeros(2), x0)
        assert p.x0.dtype == np.float64
        with pytest.raises(ValueError):
            p.x0[0] = 5.0

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="shape"):
            Problem("q", 3, lambda x: 0.0, lambda x: np.zeros(3), [1.0, 2.0])


def test_run_record_converged_flag():
    run = RunRecord("p", "s", 3, 5, 4, 0.0, 1e-6, "converged")
    assert run.converged
    assert not RunRecord("p", "s", 3, 5, 4, 0.0, 1.0, "max_iter").converged
