# bench.py
# Author: Jacob Schreiber <jmschreiber91@gmail.com>

"""
This module contains the benchmark harness that compares planning methods
against the greedy construction, and the suite of synthetic sketch-like
instances it runs on by default.
"""

import numpy
import pandas

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import replace
from PIL import Image
from PIL import ImageDraw
from tqdm import tqdm

from .gtsp import build_instance
from .gtsp import path_fitness
from .heuristics import greedy
from .io import BinaryImage
from .rkga import GaConfig
from .rkga import METHODS
from .rkga import solve
from .trace import LineSegment
from .trace import trace_image


SUITE_TARGETS = 66, 70, 74, 78, 82


@dataclass(frozen=True)
class BenchmarkResult():
	"""The mean fitness of one method on one instance over several trials.

	improvement_over_greedy_pct is 100 * (greedy_fitness - mean_fitness) /
	greedy_fitness.
	"""

	instance_name: str
	method: str
	trials: int
	mean_fitness: float
	greedy_fitness: float
	improvement_over_greedy_pct: float


def _sketch(rng, size, strokes):
	"""Draw random polylines and ellipse arcs onto a white canvas."""

	image = Image.new('L', (size, size), 255)
	draw = ImageDraw.Draw(image)
	margin = size // 16

	for _ in range(strokes):
		width = int(rng.integers(1, 3))
		if rng.random() < 0.6:
			n = int(rng.integers(2, 5))
			points = rng.integers(margin, size - margin, size=(n, 2))
			draw.line([tuple(p) for p in points.tolist()], fill=0, width=width)
		else:
			x0, y0 = rng.integers(margin, size // 2, size=2).tolist()
			w, h = rng.integers(size // 8, size // 2, size=2).tolist()
			start = int(rng.integers(0, 360))
			extent = int(rng.integers(90, 361))
			draw.arc([x0, y0, min(x0 + w, size - margin), min(y0 + h,
				size - margin)], start, start + extent, fill=0, width=width)

	return BinaryImage(numpy.asarray(image) < 128)


def synthetic_suite(n_instances=5, seed=0, size=256, home=(0.0, 0.0),
	cost_lift=30.0):
	"""Generate the synthetic benchmark instances.

	Each instance is a sketch of random strokes on a square canvas, traced
	into segments. Strokes are added until the sketch traces into at least
	the target number of segments, and the segments are then cut to exactly
	that number. The targets cycle through 66, 70, 74, 78 and 82, which
	average 74 segments per instance over the default five instances.


	Parameters
	----------
	n_instances: int, optional
		The number of instances. Default is 5.

	seed: int, optional
		The seed of the stroke generator. Default is 0.

	size: int, optional
		The side of the canvas in pixels. Default is 256.

	home: tuple of float, optional
		The home point of every instance. Default is (0, 0).

	cost_lift: float, optional
		The cost of a lift in every instance. Default is 30.


	Returns
	-------
	instances: list of (str, drawpath.gtsp.GtspInstance)
		The named instances.
	"""

	instances = []
	for i in range(n_instances):
		target = SUITE_TARGETS[i % len(SUITE_TARGETS)]
		rng = numpy.random.default_rng([seed, i])

		for strokes in range(4, 201, 2):
			state = rng.bit_generator.state
			segments = trace_image(_sketch(rng, size, strokes))
			if len(segments) >= target:
				break

			rng.bit_generator.state = state
		else:
			raise RuntimeError("Could not draw a sketch with {} segments."
				.format(target))

		segments = [LineSegment(j, segment.points) for j, segment in
			enumerate(segments[:target])]
		instances.append(("synthetic-{}".format(i), build_instance(segments,
			home, cost_lift, size, size)))

	return instances


def bench(instances, methods, trials=10, base_seed=0, cfg=GaConfig(),
	n_jobs=1, verbose=False):
	"""Compare planning methods by their improvement over greedy.

	Every (instance, method) pair is run `trials` times, trial t with seed
	`base_seed + t`, and the mean fitness is compared with the fitness of
	the greedy path on the same instance. Cells may run on several threads;
	the results are assembled in input order and do not depend on
	`n_jobs`.


	Parameters
	----------
	instances: list of (str, drawpath.gtsp.GtspInstance)
		The named instances.

	methods: list of str
		The methods to compare.

	trials: int, optional
		The number of seeded runs per cell. Default is 10.

	base_seed: int, optional
		The seed of the first trial. Default is 0.

	cfg: drawpath.rkga.GaConfig, optional
		The genetic algorithm settings; the seed is set per trial.

	n_jobs: int, optional
		The number of threads running cells. Default is 1.

	verbose: bool, optional
		Whether to show a progress bar. Default is False.


	Returns
	-------
	results: list of drawpath.bench.BenchmarkResult
		One result per instance and method, instance-major.
	"""

	unknown = [method for method in methods if method not in METHODS]
	if unknown:
		raise ValueError("Unknown methods: {}".format(", ".join(unknown)))

	if trials < 1:
		raise ValueError("trials must be at least 1, got {}".format(trials))

	cells = [(i, method, trial) for i in range(len(instances))
		for method in methods for trial in range(trials)]

	def run(cell):
		i, method, trial = cell
		inst = instances[i][1]
		config = replace(cfg, seed=base_seed + trial, n_jobs=1, verbose=False)
		path, _ = solve(inst, method, config)
		return path_fitness(inst, path)

	with ThreadPoolExecutor(max_workers=n_jobs) as pool:
		fitness = list(tqdm(pool.map(run, cells), total=len(cells),
			disable=not verbose))

	results, idx = [], 0
	for name, inst in instances:
		baseline = path_fitness(inst, greedy(inst))
		for method in methods:
			mean = float(numpy.mean(fitness[idx:idx+trials]))
			improvement = 100 * (baseline - mean) / baseline if baseline else 0.0
			results.append(BenchmarkResult(name, method, trials, mean, baseline,
				improvement))
			idx += trials

	return results


def benchmark_table(results):
	"""Arrange results as methods by instances plus an average column."""

	data = pandas.DataFrame([asdict(result) for result in results])
	methods = list(dict.fromkeys(data['method']))
	names = list(dict.fromkeys(data['instance_name']))

	table = data.pivot(index='method', columns='instance_name',
		values='improvement_over_greedy_pct').loc[methods, names]
	table['Avg.'] = table.mean(axis=1)
	table.columns.name = None
	return table


def write_benchmark_csv(results, filename):
	"""Write one row per result to a CSV file."""

	pandas.DataFrame([asdict(result) for result in results]).to_csv(filename,
		index=False)
