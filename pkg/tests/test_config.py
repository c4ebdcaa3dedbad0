import os
import json

import pytest

from drawpath.config import ConfigError
from drawpath.config import PipelineConfig
from drawpath.config import load_config
from drawpath.config import save_config
from drawpath.contour import FdogParams
from drawpath.rkga import GaConfig
from drawpath.trace import TraceParams


def test_defaults_match_components():
	cfg = PipelineConfig()

	assert cfg.fdog_params() == FdogParams()
	assert cfg.trace_params() == TraceParams()
	assert cfg.ga_config() == GaConfig()
	assert cfg.home == (0.0, 0.0)
	assert cfg.cost_lift == 30.0
	assert cfg.method == 'rkga2optlk'


def test_ga_config_follows_method():
	assert PipelineConfig(method='rkga2optlk').ga_config().use_lk
	assert not PipelineConfig(method='rkga2opt').ga_config().use_lk


def test_coercion():
	cfg = PipelineConfig(cost_lift=10, home=[3, 4], sigma_c=2)

	assert cfg.cost_lift == 10.0 and isinstance(cfg.cost_lift, float)
	assert cfg.home == (3.0, 4.0)
	assert cfg.fdog_params().sigma_c == 2.0


@pytest.mark.parametrize("kwargs", [{'seed': 1.5}, {'verbose': 1},
	{'method': 'annealing'}, {'home': [1, 2, 3]}, {'cost_lift': -1},
	{'threshold': 2.0}, {'rho': 0.5}, {'elite_count': 100},
	{'max_spur_px': -2}, {'line_length': "8"}])
def test_invalid_values(kwargs):
	with pytest.raises(ConfigError):
		PipelineConfig(**kwargs)


def test_config_error_is_value_error():
	with pytest.raises(ValueError):
		PipelineConfig(tau=3.0)


def test_from_dict_unknown_key():
	with pytest.raises(ConfigError, match="Unknown configuration key 'colour'"):
		PipelineConfig.from_dict({'colour': 'red'})


def test_merge():
	cfg = PipelineConfig().merge({'seed': 5, 'tau': None, 'home': (1, 1)})

	assert cfg.seed == 5
	assert cfg.tau == 0.3
	assert cfg.home == (1.0, 1.0)


def test_save_load(tmp_path):
	cfg = PipelineConfig(seed=7, home=(10.0, 20.0), method='greedy2opt',
		etf_iterations=2)

	filename = str(tmp_path / "config.json")
	save_config(cfg, filename)
	assert load_config(filename) == cfg


def test_load_partial(tmp_path):
	filename = str(tmp_path / "config.json")
	with open(filename, "w") as outfile:
		json.dump({'population_size': 40}, outfile)

	cfg = load_config(filename)
	assert cfg.population_size == 40
	assert cfg.elite_count == 3


@pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"tau": "x"}'])
def test_load_invalid(tmp_path, content):
	filename = str(tmp_path / "config.json")
	with open(filename, "w") as outfile:
		outfile.write(content)

	with pytest.raises(ConfigError):
		load_config(filename)


def test_load_missing(tmp_path):
	with pytest.raises(OSError):
		load_config(str(tmp_path / "missing.json"))


def test_example_config_holds_defaults():
	filename = os.path.join(os.path.dirname(__file__), os.pardir,
		"example_config.json")

	cfg = load_config(filename)
	assert cfg == PipelineConfig()
	assert set(cfg.to_dict()) == set(json.load(open(filename)))
