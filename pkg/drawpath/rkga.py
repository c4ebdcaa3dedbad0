# rkga.py
# Author: Jacob Schreiber <jmschreiber91@gmail.com>

"""
This module contains the random-key genetic algorithm that searches for
cheap drawing paths, together with `solve`, which runs any of the supported
planning methods on an instance.

Every generation keeps the best individuals unchanged and fills the rest of
the population with offspring built by tournament selection, uniform
crossover and mutation. Every offspring is improved by 2-opt, and those
that then beat an adaptive percentile of the parent population are further
improved by Lin-Kernighan. Improved paths are written back into the
offspring's keys.

Each offspring draws its random numbers from a generator seeded by the run
seed, the generation and its slot in the population, so offspring can be
produced on several threads without changing the result.
"""

import math
import time
import numpy

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace

from .gtsp import Chromosome
from .gtsp import KEY_MAX
from .gtsp import decode
from .gtsp import encode
from .gtsp import path_fitness
from .gtsp import random_chromosome
from .gtsp import reverse_keys
from .heuristics import greedy
from .heuristics import lin_kernighan
from .heuristics import two_opt
from .logging import Logger


METHODS = 'greedy', 'greedy2opt', 'greedy2optlk', 'rkga2opt', 'rkga2optlk'

_LOG_COLUMNS = ("Generation", "Best Fitness", "Mean Fitness", "Stall",
	"LK Invocations", "Time")


@dataclass(frozen=True)
class GaConfig():
	"""The settings of the genetic algorithm.


	Parameters
	----------
	population_size: int, optional
		The number of individuals N. Default is 100.

	elite_count: int, optional
		The number of best individuals r copied into the next generation.
		Default is 3.

	p_crossover: float, optional
		The probability that an offspring is produced by crossover rather
		than copied from its first parent. Default is 0.8.

	p_mutation: float, optional
		The probability that an offspring is mutated. Default is 0.5.

	key_inherit_p: float, optional
		The probability that crossover takes a key from the first parent.
		Default is 0.7.

	reverse_p: float, optional
		The probability that the first parent's tour is reversed before
		crossover. Default is 0.5.

	shuffle_p: float, optional
		The probability that mutation permutes the decimal parts of the keys.
		Default is 0.05.

	flip_p: float, optional
		The probability that mutation flips the direction bit of each key.
		Default is 0.05.

	tournament_k: int, optional
		The number of individuals drawn per tournament. Default is 2.

	thres_base: float, optional
		The percentile of the parent population an offspring must beat to be
		improved by Lin-Kernighan when the search has not stalled. Default
		is 0.05.

	thres_step: float, optional
		The increase in percentile per generation without improvement.
		Default is 0.01.

	thres_cap: float, optional
		The largest percentile. Default is 0.10.

	max_generations: int, optional
		The most generations to run. Default is 300.

	stall_limit: int, optional
		The number of generations without improvement after which the search
		stops. Default is 60.

	seed: int, optional
		The seed of the run. Default is 0.

	use_lk: bool, optional
		Whether offspring are improved by Lin-Kernighan. Default is True.

	n_jobs: int, optional
		The number of threads producing offspring. Default is 1.

	verbose: bool, optional
		Whether to print one line of statistics per generation. Default is
		False.

	target_fitness: float, optional
		A fitness known to be optimal, such as a brute-force optimum. The
		search stops as soon as the best path reaches it. Default is -inf,
		which never stops the search early.
	"""

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
	use_lk: bool = True
	n_jobs: int = 1
	verbose: bool = False
	target_fitness: float = -math.inf

	def __post_init__(self):
		if self.population_size < 1:
			raise ValueError("population_size must be positive, got {}".format(
				self.population_size))

		if not 0 <= self.elite_count < self.population_size:
			raise ValueError("elite_count must lie in [0, population_size), got "
				"{}".format(self.elite_count))

		for name in ('p_crossover', 'p_mutation', 'key_inherit_p', 'reverse_p',
			'shuffle_p', 'flip_p', 'thres_base', 'thres_step', 'thres_cap'):
			if not 0 <= getattr(self, name) <= 1:
				raise ValueError("{} must lie in [0, 1], got {}".format(name,
					getattr(self, name)))

		if self.thres_base > self.thres_cap:
			raise ValueError("thres_base must not exceed thres_cap.")

		if self.tournament_k < 1:
			raise ValueError("tournament_k must be at least 1.")

		if self.max_generations < 0 or self.stall_limit < 1:
			raise ValueError("max_generations must be non-negative and "
				"stall_limit positive.")

		if not 0 <= self.seed < 2 ** 64:
			raise ValueError("seed must be a non-negative 64-bit integer, got "
				"{}".format(self.seed))

		if self.n_jobs < 1:
			raise ValueError("n_jobs must be at least 1.")


@dataclass(frozen=True)
class Individual():
	"""A chromosome with its cached fitness.

	`fitness` is None until the individual is evaluated and `improved`
	records whether Lin-Kernighan was applied to it.
	"""

	chromosome: Chromosome
	fitness: float = None
	improved: bool = False


@dataclass
class SolveStats():
	"""Statistics of one planning run."""

	best_fitness_per_generation: list = field(default_factory=list)
	evaluations: int = 0
	lk_invocations: int = 0
	wall_time: float = 0.0
	generations: int = 0
	logger: Logger = None

	@property
	def log(self):
		"""The per-generation log as a pandas DataFrame, or None."""

		return None if self.logger is None else self.logger.to_frame()


def tournament_select(pop, k, rng):
	"""Draw k individuals with replacement and return the fittest.

	Ties go to the individual drawn first.
	"""

	if len(pop) == 0 or k < 1:
		raise ValueError("Tournaments need a nonempty population and k >= 1.")

	idxs = rng.integers(0, len(pop), size=k)
	return min((pop[i] for i in idxs), key=lambda ind: ind.fitness)


def uniform_crossover(p1, p2, cfg, rng):
	"""Produce one child by taking each key from either parent.

	With probability `reverse_p` the first parent's keys are first
	transformed to encode its reversed tour. Each key of the child then
	comes from the first parent with probability `key_inherit_p` and from
	the second otherwise.


	Parameters
	----------
	p1: drawpath.gtsp.Chromosome
		The first, fitter, parent.

	p2: drawpath.gtsp.Chromosome
		The second parent.

	cfg: drawpath.rkga.GaConfig
		The genetic algorithm settings.

	rng: numpy.random.Generator
		The random number generator.


	Returns
	-------
	child: drawpath.gtsp.Chromosome
		The child chromosome.
	"""

	if len(p1) != len(p2):
		raise ValueError("Parents have {} and {} keys.".format(len(p1),
			len(p2)))

	if rng.random() < cfg.reverse_p:
		p1 = reverse_keys(p1)

	inherit = rng.random(len(p1)) < cfg.key_inherit_p
	return Chromosome(numpy.where(inherit, p1.keys, p2.keys))


def mutate(c, cfg, rng):
	"""Mutate a chromosome by shuffling its visit order and flipping bits.

	With probability `shuffle_p` the decimal parts are permuted across the
	keys while every integer part stays in place. Then each direction bit
	flips independently with probability `flip_p`.
	"""

	keys = numpy.array(c.keys)
	bits = numpy.floor(keys)
	frac = keys - bits

	if rng.random() < cfg.shuffle_p:
		frac = rng.permutation(frac)

	flips = rng.random(len(keys)) < cfg.flip_p
	bits = numpy.where(flips, 1 - bits, bits)
	return Chromosome(numpy.minimum(bits + frac, KEY_MAX))


def threshold_percentile(c, cfg):
	"""The percentile v_thres = min(thres_base + thres_step * c, thres_cap)."""

	return min(cfg.thres_base + cfg.thres_step * c, cfg.thres_cap)


def threshold_fitness(parent_pop, c, cfg):
	"""The fitness at the v_thres percentile of the parent population.

	Parents are ranked by ascending fitness and the one at 1-based rank
	ceil(v_thres * N) is taken.
	"""

	fitness = sorted(ind.fitness for ind in parent_pop)
	rank = math.ceil(threshold_percentile(c, cfg) * len(fitness) - 1e-9)
	return fitness[min(max(rank, 1), len(fitness)) - 1]


def improve(ind, parent_pop, c, cfg, inst):
	"""Apply the two levels of local improvement to an individual.

	Every individual is improved by 2-opt. If it is then strictly fitter
	than the parent at the v_thres percentile and `use_lk` is set, it is
	also improved by Lin-Kernighan. The improved path is encoded back into
	the returned individual.


	Parameters
	----------
	ind: drawpath.rkga.Individual
		The individual to improve.

	parent_pop: list of drawpath.rkga.Individual
		The evaluated parent population.

	c: int
		The number of generations since the best fitness last improved.

	cfg: drawpath.rkga.GaConfig
		The genetic algorithm settings.

	inst: drawpath.gtsp.GtspInstance
		The problem instance.


	Returns
	-------
	ind: drawpath.rkga.Individual
		The improved and evaluated individual.
	"""

	path = two_opt(inst, decode(ind.chromosome))
	fitness = path_fitness(inst, path)

	improved = False
	if cfg.use_lk and fitness < threshold_fitness(parent_pop, c, cfg):
		path = lin_kernighan(inst, path)
		fitness = path_fitness(inst, path)
		improved = True

	return Individual(encode(path), fitness, improved)


def _initial(inst, cfg, slot):
	rng = numpy.random.default_rng([cfg.seed, 0, slot])
	path = two_opt(inst, decode(random_chromosome(inst.n_segments, rng)))
	return Individual(encode(path), path_fitness(inst, path))


def _offspring(inst, parents, c, cfg, generation, slot):
	rng = numpy.random.default_rng([cfg.seed, generation, slot])

	a = tournament_select(parents, cfg.tournament_k, rng)
	b = tournament_select(parents, cfg.tournament_k, rng)
	first, second = (a, b) if a.fitness <= b.fitness else (b, a)

	if rng.random() < cfg.p_crossover:
		child = uniform_crossover(first.chromosome, second.chromosome, cfg, rng)
	else:
		child = first.chromosome

	if rng.random() < cfg.p_mutation:
		child = mutate(child, cfg, rng)

	return improve(Individual(child), parents, c, cfg, inst)


def run_rkga(inst, cfg=GaConfig()):
	"""Search for a cheap drawing path with the random-key genetic algorithm.

	The population starts from random keys, each improved by 2-opt. Every
	generation copies the `elite_count` best individuals and fills the
	remaining slots with improved offspring. The search ends after
	`max_generations` generations or once the best fitness has not
	improved for `stall_limit` generations in a row.


	Parameters
	----------
	inst: drawpath.gtsp.GtspInstance
		The problem instance.

	cfg: drawpath.rkga.GaConfig, optional
		The genetic algorithm settings.


	Returns
	-------
	path: drawpath.gtsp.DrawingPath
		The best path found.

	stats: drawpath.rkga.SolveStats
		The statistics of the run, including the per-generation log.
	"""

	tic = time.time()
	n, r = cfg.population_size, cfg.elite_count

	logger = Logger(_LOG_COLUMNS, verbose=cfg.verbose)
	logger.start()

	with ThreadPoolExecutor(max_workers=cfg.n_jobs) as pool:
		population = list(pool.map(lambda slot: _initial(inst, cfg, slot),
			range(n)))
		population.sort(key=lambda ind: ind.fitness)

		best = population[0]
		stats = SolveStats(evaluations=n, logger=logger)
		stats.best_fitness_per_generation.append(best.fitness)
		logger.add((0, best.fitness, numpy.mean([ind.fitness
			for ind in population]), 0, 0, time.time() - tic))

		c = 0
		last = 0 if best.fitness <= cfg.target_fitness else cfg.max_generations
		for generation in range(1, last + 1):
			parents = population
			offspring = list(pool.map(lambda slot: _offspring(inst, parents, c,
				cfg, generation, slot), range(r, n)))

			population = sorted(parents[:r] + offspring,
				key=lambda ind: ind.fitness)

			stats.evaluations += len(offspring)
			stats.lk_invocations += sum(ind.improved for ind in offspring)
			stats.generations = generation

			# without elites the best individual can be lost
			if population[0].fitness < best.fitness:
				best = population[0]
				c = 0
			else:
				c += 1

			stats.best_fitness_per_generation.append(best.fitness)
			logger.add((generation, best.fitness, numpy.mean(
				[ind.fitness for ind in population]), c, stats.lk_invocations,
				time.time() - tic))

			if c >= cfg.stall_limit or best.fitness <= cfg.target_fitness:
				break

	stats.wall_time = time.time() - tic
	return decode(best.chromosome), stats


def solve(inst, method, cfg=GaConfig()):
	"""Plan a drawing path with one of the supported methods.

	`greedy` is the nearest-start construction, `greedy2opt` adds 2-opt and
	`greedy2optlk` adds Lin-Kernighan on top. `rkga2opt` runs the genetic
	algorithm with 2-opt only and `rkga2optlk` with both levels of
	improvement.


	Parameters
	----------
	inst: drawpath.gtsp.GtspInstance
		The problem instance.

	method: str
		The name of the method.

	cfg: drawpath.rkga.GaConfig, optional
		The genetic algorithm settings, used by the rkga methods.


	Returns
	-------
	path: drawpath.gtsp.DrawingPath
		The planned path.

	stats: drawpath.rkga.SolveStats
		The statistics of the run.
	"""

	if method not in METHODS:
		raise ValueError("Unknown method '{}'; expected one of {}.".format(
			method, ", ".join(METHODS)))

	if method.startswith('rkga'):
		return run_rkga(inst, replace(cfg, use_lk=method == 'rkga2optlk'))

	tic = time.time()
	path = greedy(inst)
	if method != 'greedy':
		path = two_opt(inst, path)
	if method == 'greedy2optlk':
		path = lin_kernighan(inst, path)

	stats = SolveStats([path_fitness(inst, path)], evaluations=1,
		lk_invocations=int(method == 'greedy2optlk'), wall_time=time.time() - tic)
	return path, stats
