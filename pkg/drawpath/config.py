# config.py
# Author: Jacob Schreiber <jmschreiber91@gmail.com>

"""
This module contains the configuration of the whole pipeline. A pipeline
configuration is a flat set of keys covering the contour filter, the
tracing step, the genetic algorithm and the drawing problem, stored as a
JSON object. Keys missing from a file keep their defaults and unknown keys
are rejected.
"""

import json

from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import fields

from .contour import FdogParams
from .rkga import GaConfig
from .rkga import METHODS
from .trace import TraceParams


class ConfigError(ValueError):
	"""An invalid configuration: an unknown key, a wrong type or a bad value."""

	pass


@dataclass(frozen=True)
class PipelineConfig():
	"""Every setting of the pipeline.

	The fields are those of FdogParams, TraceParams and GaConfig, except
	for `use_lk`, which follows from `method`, together with the home point,
	the cost of a lift, the binarization threshold for loaded images and
	the planning method. `target_fitness` is left out since an optimum is
	not known for a drawing.
	"""

	sigma_c: float = 1.0
	rho: float = 1.6
	sigma_m: float = 3.0
	line_length: int = 8
	tau: float = 0.3
	etf_radius: int = 5
	etf_iterations: int = 3

	min_component_px: int = 8
	max_spur_px: int = 5
	max_extension_px: int = 3

	population_size: int = 100
	elite_count: int = 3
	p_crossover: float = 0.8
	p_mutation: float = 0.5
	key_inherit_p: float = 0.7
	reverse_p: float = 0.5
	shuffle_p: float = 0.05
	flip_p: float = 0.05
	tournament_k: int = 2
	thres_base: float = 0.05
	thres_step: float = 0.01
	thres_cap: float = 0.10
	max_generations: int = 300
	stall_limit: int = 60
	seed: int = 0
	n_jobs: int = 1
	verbose: bool = False

	home: tuple = (0.0, 0.0)
	cost_lift: float = 30.0
	threshold: float = 0.5
	method: str = 'rkga2optlk'

	def __post_init__(self):
		for f in fields(self):
			object.__setattr__(self, f.name, _coerce(f.name, getattr(self,
				f.name), f.default))

		if self.method not in METHODS:
			raise ConfigError("method must be one of {}, got '{}'".format(
				", ".join(METHODS), self.method))

		if self.cost_lift < 0:
			raise ConfigError("cost_lift must be non-negative, got {}".format(
				self.cost_lift))

		if not 0 <= self.threshold <= 1:
			raise ConfigError("threshold must lie in [0, 1], got {}".format(
				self.threshold))

		try:
			self.fdog_params()
			self.trace_params()
			self.ga_config()
		except ValueError as e:
			raise ConfigError(str(e)) from e

	def _subset(self, cls):
		names = {f.name for f in fields(cls)}
		return cls(**{k: v for k, v in asdict(self).items() if k in names})

	def fdog_params(self):
		return self._subset(FdogParams)

	def trace_params(self):
		return self._subset(TraceParams)

	def ga_config(self):
		"""The genetic algorithm settings, with `use_lk` set by the method."""

		return GaConfig(use_lk=self.method == 'rkga2optlk', **{k: v for k, v
			in asdict(self).items() if k in {f.name for f in fields(GaConfig)}})

	def to_dict(self):
		data = asdict(self)
		data['home'] = list(self.home)
		return data

	@classmethod
	def from_dict(cls, data):
		"""Build a configuration from a mapping, rejecting unknown keys."""

		names = {f.name for f in fields(cls)}
		for key in data:
			if key not in names:
				raise ConfigError("Unknown configuration key '{}'".format(key))

		return cls(**data)

	def merge(self, overrides):
		"""Return a copy with every override that is not None applied."""

		data = self.to_dict()
		data.update({k: v for k, v in overrides.items() if v is not None})
		return self.from_dict(data)


def _coerce(name, value, default):
	if isinstance(default, bool):
		if not isinstance(value, bool):
			raise ConfigError("{} must be true or false, got {!r}".format(name,
				value))
		return value

	if isinstance(default, int):
		if isinstance(value, bool) or not isinstance(value, int):
			raise ConfigError("{} must be an integer, got {!r}".format(name,
				value))
		return value

	if isinstance(default, float):
		if isinstance(value, bool) or not isinstance(value, (int, float)):
			raise ConfigError("{} must be a number, got {!r}".format(name,
				value))
		return float(value)

	if isinstance(default, str):
		if not isinstance(value, str):
			raise ConfigError("{} must be a string, got {!r}".format(name,
				value))
		return value

	try:
		x, y = value
		return float(x), float(y)
	except (TypeError, ValueError):
		raise ConfigError("{} must be an [x, y] pair, got {!r}".format(name,
			value))


def load_config(filename):
	"""Read a pipeline configuration from a JSON file.


	Parameters
	----------
	filename: str
		The name of the configuration file.


	Returns
	-------
	cfg: drawpath.config.PipelineConfig
		The configuration, with defaults for the keys the file leaves out.
	"""

	with open(filename, "r") as infile:
		try:
			data = json.load(infile)
		except json.JSONDecodeError as e:
			raise ConfigError("Could not parse {}: {}".format(filename, e)) from e

	if not isinstance(data, dict):
		raise ConfigError("{} must hold a JSON object.".format(filename))

	return PipelineConfig.from_dict(data)


def save_config(cfg, filename):
	"""Write a pipeline configuration to a JSON file."""

	with open(filename, "w") as outfile:
		json.dump(cfg.to_dict(), outfile, indent=4)
