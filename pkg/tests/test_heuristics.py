import numpy
import pytest

from numpy.testing import assert_array_equal

from drawpath.gtsp import DrawingPath
from drawpath.gtsp import build_instance
from drawpath.gtsp import decode
from drawpath.gtsp import path_fitness
from drawpath.gtsp import random_chromosome
from drawpath.heuristics import greedy
from drawpath.heuristics import lin_kernighan
from drawpath.heuristics import orient
from drawpath.heuristics import tour_cost
from drawpath.heuristics import two_opt
from drawpath.trace import LineSegment

from helpers import brute_force
from helpers import random_instance


def _random_path(k, seed):
	return decode(random_chromosome(k, numpy.random.default_rng(seed)))


def _one_flip_costs(inst, path):
	"""The cost after every single reversal of a span of the path."""

	order, dirs = path.order, path.dirs
	for i in range(len(order)):
		for j in range(i, len(order)):
			o, d = order.copy(), dirs.copy()
			o[i:j+1] = o[i:j+1][::-1]
			d[i:j+1] = 1 - d[i:j+1][::-1]
			yield path_fitness(inst, DrawingPath.from_arrays(o, d))


###


@pytest.mark.parametrize("seed", range(5))
def test_tour_cost_matches_fitness(seed):
	inst = random_instance(20, seed)
	path = _random_path(20, seed)
	assert tour_cost(inst, path) == pytest.approx(path_fitness(inst, path))


def test_tour_cost_chained_segments():
	inst = build_instance([LineSegment(0, ((0, 0), (1, 0))),
		LineSegment(1, ((1, 0), (2, 0)))], cost_lift=5)
	path = DrawingPath(((0, 1), (1, 1)))
	assert tour_cost(inst, path) == pytest.approx(path_fitness(inst, path))


###


def test_greedy_nearest_start():
	inst = build_instance([
		LineSegment(0, ((10, 0), (11, 0))),
		LineSegment(1, ((3, 0), (2, 0))),
		LineSegment(2, ((20, 0), (21, 0))),
	])

	path = greedy(inst)
	assert path.tour == ((1, 0), (0, 1), (2, 1))


def test_greedy_ties():
	# every candidate start lies one unit from home
	inst = build_instance([
		LineSegment(0, ((1, 0), (0, 1))),
		LineSegment(1, ((-1, 0), (-2, 0))),
	], home=(0, 0))

	path = greedy(inst)
	assert path.tour[0] == (0, 1)


def test_greedy_single_segment():
	inst = build_instance([LineSegment(0, ((5, 5), (6, 5)))], home=(10, 5))
	assert greedy(inst).tour == ((0, 0),)


def test_greedy_can_be_suboptimal():
	found = False
	for seed in range(20):
		inst = random_instance(6, seed)
		if path_fitness(inst, greedy(inst)) > brute_force(inst) + 1e-6:
			found = True
			break

	assert found


###


@pytest.mark.parametrize("seed", range(5))
def test_two_opt_local_optimum(seed):
	inst = random_instance(15, seed)
	start = _random_path(15, seed)
	path = two_opt(inst, start)

	fitness = path_fitness(inst, path)
	assert fitness <= path_fitness(inst, start) + 1e-9
	assert min(_one_flip_costs(inst, path)) >= fitness - 1e-6


def test_two_opt_fixes_crossing():
	inst = build_instance([
		LineSegment(0, ((0, 0), (1, 0))),
		LineSegment(1, ((9, 9), (10, 9))),
		LineSegment(2, ((2, 0), (3, 0))),
	], cost_lift=1)

	path = two_opt(inst, DrawingPath(((0, 1), (1, 1), (2, 1))))
	assert path.order.tolist() in ([0, 2, 1], [1, 2, 0])


###


@pytest.mark.parametrize("seed", range(5))
def test_orient_is_optimal_for_order(seed):
	inst = random_instance(6, seed)
	path = _random_path(6, seed)
	oriented = orient(inst, path)

	assert_array_equal(oriented.order, path.order)

	best = min(path_fitness(inst, DrawingPath.from_arrays(path.order,
		numpy.array(d))) for d in numpy.ndindex(*(2,) * 6))
	assert path_fitness(inst, oriented) == pytest.approx(best)


###


@pytest.mark.parametrize("seed", range(5))
def test_lin_kernighan_no_worse_than_two_opt(seed):
	inst = random_instance(40, seed)
	start = two_opt(inst, _random_path(40, seed))
	path = lin_kernighan(inst, start)

	fitness = path_fitness(inst, path)
	assert sorted(path.order.tolist()) == list(range(40))
	assert fitness <= path_fitness(inst, start) + 1e-9
	assert min(_one_flip_costs(inst, path)) >= fitness - 1e-6


@pytest.mark.parametrize("seed", range(10))
def test_lin_kernighan_small_instances(seed):
	inst = random_instance(5, seed)
	path = lin_kernighan(inst, greedy(inst))
	assert path_fitness(inst, path) >= brute_force(inst) - 1e-6


def test_lin_kernighan_single_segment():
	inst = build_instance([LineSegment(0, ((5, 5), (6, 5)))], home=(10, 5))
	assert lin_kernighan(inst, DrawingPath(((0, 1),))).tour == ((0, 1),)


def test_lin_kernighan_raises():
	inst = random_instance(3, 0)
	with pytest.raises(ValueError):
		lin_kernighan(inst, greedy(inst), depth=0)


@pytest.mark.slow
def test_lin_kernighan_from_greedy_reaches_optimum():
	hits = 0
	for seed in range(100):
		inst = random_instance(6, seed)
		path = lin_kernighan(inst, greedy(inst))
		hits += path_fitness(inst, path) <= brute_force(inst) + 1e-6

	assert hits >= 80


@pytest.mark.slow
def test_lin_kernighan_beats_two_opt():
	wins = 0
	for seed in range(100):
		inst = random_instance(30, seed)
		start = _random_path(30, seed)
		wins += (path_fitness(inst, lin_kernighan(inst, start)) <=
			path_fitness(inst, two_opt(inst, start)) + 1e-9)

	assert wins >= 90
