import json

import pytest

from core.config import (
    BudykoParams,
    IntegratorConfig,
    JormungandParams,
    RunConfig,
    dump_config,
    eta_c_from_rates,
    load_run_config,
    run_config_from_dict,
    save_run_config,
    update_config,
)
from core.errors import ConfigError


class TestParams:
    def test_defaults(self):
        p = BudykoParams()
        assert (p.Q, p.s2, p.B, p.C, p.Tc) == (321.0, -0.482, 1.5, 3.75, -10.0)
        assert (p.rho, p.delta, p.eta_c) == (1.0, 0.01, 0.85)
        j = JormungandParams()
        assert (j.Tc, j.M, j.alpha_w, j.alpha_i, j.alpha_s, j.y_snow) == (0.0, 25.0, 0.35, 0.45, 0.8, 0.35)

    @pytest.mark.parametrize("kwargs", [{"B": 0.0}, {"delta": -1.0}, {"rho": 0.0}, {"Q": float("nan")}])
    def test_invalid_climate(self, kwargs):
        with pytest.raises(ConfigError):
            BudykoParams(**kwargs)

    def test_albedo_ordering(self):
        with pytest.raises(ConfigError):
            BudykoParams(alpha1=0.7, alpha2=0.6)
        with pytest.raises(ConfigError):
            JormungandParams(alpha_i=0.9)

    def test_eta_c_from_rates(self):
        assert eta_c_from_rates(0.6, 1.0) == 0.6
        assert BudykoParams().with_rates(0.3, 0.5).eta_c == pytest.approx(0.6)
        with pytest.raises(ConfigError):
            eta_c_from_rates(0.5, 0.0)
        with pytest.raises(ConfigError):
            eta_c_from_rates(-0.1, 1.0)

    def test_config_error_is_a_value_error(self):
        with pytest.raises(ValueError):
            BudykoParams(B=-1.0)


class TestIntegratorConfig:
    def test_defaults(self):
        cfg = IntegratorConfig()
        assert cfg.rel_tol == 1e-8
        assert cfg.abs_tol == 1e-10
        assert cfg.boundary_tol <= 10 * cfg.abs_tol

    @pytest.mark.parametrize("kwargs", [{"rel_tol": 0.0}, {"max_step": -1.0}, {"boundary_tol": 1e-8}])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            IntegratorConfig(**kwargs)


class TestRunConfig:
    @pytest.mark.parametrize("data", [
        {"colour": "blue"},
        {"params": {"eta_c": 0.6, "gamma": 1.0}},
        {"integrator": {"rtol": 1e-6}},
        {"sweep": {"step": 3}},
        {"ic": {"A": 200.0, "y": 0.1}},
        {"model": "budyko", "params": {"M": 25.0}},
        {"model": "hadley"},
    ])
    def test_unknown_keys_are_fatal(self, data):
        with pytest.raises(ConfigError):
            run_config_from_dict(data)

    def test_model_params_apply_overrides(self):
        config = run_config_from_dict({"model": "jormungand", "params": {"eta_c": 0.3}})
        p = config.model_params()
        assert isinstance(p, JormungandParams)
        assert p.eta_c == 0.3
        assert p.Tc == 0.0

    def test_dump_is_canonical(self, tmp_path):
        config = run_config_from_dict({"params": {"eta_c": 0.6}, "t_max": 100.0})
        path = tmp_path / "run.json"
        save_run_config(config, path)
        reloaded = load_run_config(path)
        assert dump_config(reloaded) == dump_config(config)
        data = json.loads(path.read_text())
        assert data["params"]["eta_c"] == 0.6
        assert data["params"]["alpha1"] == 0.32
        assert data["integrator"]["max_slide_time"] == 1e5
        assert path.read_text().endswith("}\n")

    def test_update_config_skips_none(self):
        config = update_config(RunConfig(), {
            "params.eta_c": 0.6, "t_max": 250.0, "ic.A": 190.0, "seed": None, "sweep.steps": 3,
        })
        assert config.params == {"eta_c": 0.6}
        assert config.t_max == 250.0
        assert config.ic["A"] == 190.0
        assert config.seed is None
        assert config.sweep.steps == 3

    def test_update_config_validates(self):
        with pytest.raises(ConfigError):
            update_config(RunConfig(), {"params.zeta": 1.0})

    @pytest.mark.parametrize("data", [{"t_max": -1.0}, {"dt_out": 0.0}])
    def test_invalid_horizon(self, data):
        with pytest.raises(ConfigError):
            run_config_from_dict(data)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_run_config(tmp_path / "absent.json")

    def test_bad_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_run_config(path)
