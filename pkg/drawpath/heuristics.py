# heuristics.py
# Author: Jacob Schreiber <jmschreiber91@gmail.com>

"""
This module contains the construction and local search heuristics used to
plan drawing paths: the greedy nearest-start construction, 2-opt over
segment reversals, an exact re-orientation of a fixed visit order, and a
Lin-Kernighan style variable-depth search.

Tours are handled by the kernels as two integer arrays, `order` holding the
segment at each position and `dirs` holding its direction bit. Reversing
the positions i to j of a tour and flipping every direction inside leaves
the travel inside the span unchanged, so only the two boundary transitions
need to be compared.
"""

import math
import numpy

from numba import njit

from .gtsp import DrawingPath


@njit(cache=True, nogil=True)
def _edge(ax, ay, bx, by, cost_lift, home):
	d = math.sqrt((ax - bx) ** 2 + (ay - by) ** 2)
	if home or d > 0:
		return d + cost_lift
	return 0.0


@njit(cache=True, nogil=True)
def _tour_cost(ends, home, cost_lift, order, dirs):
	k = order.shape[0]
	x, y = home[0], home[1]

	cost = 0.0
	for i in range(k):
		s = ends[order[i], 1 - dirs[i]]
		cost += _edge(x, y, s[0], s[1], cost_lift, i == 0)

		e = ends[order[i], dirs[i]]
		x, y = e[0], e[1]

	cost += _edge(x, y, home[0], home[1], cost_lift, True)
	return cost


@njit(cache=True, nogil=True)
def _flip_delta(ends, home, cost_lift, order, dirs, i, j):
	"""The change in cost from reversing and flipping positions i to j."""

	k = order.shape[0]
	s = ends[order[i], 1 - dirs[i]]
	e = ends[order[j], dirs[j]]

	if i == 0:
		ax, ay = home[0], home[1]
	else:
		a = ends[order[i-1], dirs[i-1]]
		ax, ay = a[0], a[1]

	if j == k - 1:
		bx, by = home[0], home[1]
	else:
		b = ends[order[j+1], 1 - dirs[j+1]]
		bx, by = b[0], b[1]

	before = (_edge(ax, ay, s[0], s[1], cost_lift, i == 0) +
		_edge(e[0], e[1], bx, by, cost_lift, j == k - 1))
	after = (_edge(ax, ay, e[0], e[1], cost_lift, i == 0) +
		_edge(s[0], s[1], bx, by, cost_lift, j == k - 1))
	return after - before


@njit(cache=True, nogil=True)
def _flip(order, dirs, pos, i, j):
	while i < j:
		order[i], order[j] = order[j], order[i]
		dirs[i], dirs[j] = 1 - dirs[j], 1 - dirs[i]
		pos[order[i]] = i
		pos[order[j]] = j
		i += 1
		j -= 1

	if i == j:
		dirs[i] = 1 - dirs[i]


@njit(cache=True, nogil=True)
def _two_opt(ends, home, cost_lift, order, dirs, pos):
	k = order.shape[0]

	while True:
		best, bi, bj = -1e-9, -1, -1
		for i in range(k):
			for j in range(i, k):
				delta = _flip_delta(ends, home, cost_lift, order, dirs, i, j)
				if delta < best:
					best, bi, bj = delta, i, j

		if bi < 0:
			return

		_flip(order, dirs, pos, bi, bj)


@njit(cache=True, nogil=True)
def _orient(ends, home, cost_lift, order, dirs):
	"""Choose the cheapest directions for a fixed order, in place.

	The directions only change when the result is strictly cheaper.
	"""

	k = order.shape[0]
	cost = numpy.empty(2)
	back = numpy.zeros((k, 2), dtype=numpy.int64)

	for d in range(2):
		s = ends[order[0], 1 - d]
		cost[d] = _edge(home[0], home[1], s[0], s[1], cost_lift, True)

	for i in range(1, k):
		step = numpy.empty(2)
		for d in range(2):
			s = ends[order[i], 1 - d]
			step[d] = numpy.inf
			for pd in range(2):
				e = ends[order[i-1], pd]
				c = cost[pd] + _edge(e[0], e[1], s[0], s[1], cost_lift, False)
				if c < step[d]:
					step[d] = c
					back[i, d] = pd

		cost[0], cost[1] = step[0], step[1]

	for d in range(2):
		e = ends[order[k-1], d]
		cost[d] += _edge(e[0], e[1], home[0], home[1], cost_lift, True)

	d = 0 if cost[0] <= cost[1] else 1
	if cost[d] < _tour_cost(ends, home, cost_lift, order, dirs) - 1e-9:
		for i in range(k - 1, -1, -1):
			dirs[i] = d
			d = back[i, d]


@njit(cache=True, nogil=True)
def _candidates(order, dirs, pos, neighbors, a, last, breadth, out):
	"""Collect the right ends j of flips [a..j] worth trying from anchor a.

	A flip [a..j] links the start of the node at position a to the start of
	the node at j + 1, so candidates come from the closest endpoints to that
	start which currently begin a later node. Drawing the last node and
	returning home is always a candidate.
	"""

	k = order.shape[0]
	t2 = 2 * order[a] + 1 - dirs[a]

	count = 0
	for n in neighbors[t2]:
		p = pos[n // 2]
		if p <= a or 1 - dirs[p] != n % 2 or p - 1 == last:
			continue

		out[count] = p - 1
		count += 1
		if count == breadth:
			break

	if last != k - 1:
		for c in range(count):
			if out[c] == k - 1:
				return count

		out[count] = k - 1
		count += 1

	return count


@njit(cache=True, nogil=True)
def _lk_anchor(ends, home, cost_lift, order, dirs, pos, neighbors, a, total,
	depth, breadth):
	"""Search sequences of flips sharing anchor a for a cheaper tour.

	Each level applies one flip [a..j]. A sequence is extended only while
	the tour without the edge entering position a is cheaper than the
	starting tour. The search stops at the first strictly cheaper tour and
	leaves it in place; otherwise every flip is undone.
	"""

	if a > 0:
		ax, ay = ends[order[a-1], dirs[a-1]][0], ends[order[a-1], dirs[a-1]][1]
	else:
		ax, ay = home[0], home[1]

	cand = numpy.empty((depth, breadth + 1), dtype=numpy.int64)
	ncand = numpy.zeros(depth, dtype=numpy.int64)
	idx = numpy.zeros(depth, dtype=numpy.int64)
	applied = numpy.full(depth, -1, dtype=numpy.int64)
	cost = numpy.empty(depth + 1)
	cost[0] = total

	level = 0
	ncand[0] = _candidates(order, dirs, pos, neighbors, a, -1, breadth, cand[0])

	while level >= 0:
		if idx[level] >= ncand[level]:
			level -= 1
			if level >= 0:
				_flip(order, dirs, pos, a, applied[level])
			continue

		j = cand[level, idx[level]]
		idx[level] += 1

		new = cost[level] + _flip_delta(ends, home, cost_lift, order, dirs, a, j)
		e = ends[order[j], dirs[j]]
		closing = _edge(ax, ay, e[0], e[1], cost_lift, a == 0)
		if total - new + closing <= 1e-9:
			continue

		if new < total - 1e-9:
			_flip(order, dirs, pos, a, j)
			return True

		if level + 1 < depth:
			_flip(order, dirs, pos, a, j)
			applied[level] = j
			cost[level+1] = new
			level += 1
			idx[level] = 0
			ncand[level] = _candidates(order, dirs, pos, neighbors, a, j,
				breadth, cand[level])

	return False


@njit(cache=True, nogil=True)
def _lin_kernighan(ends, home, cost_lift, order, dirs, pos, neighbors, depth,
	breadth):
	k = order.shape[0]
	_two_opt(ends, home, cost_lift, order, dirs, pos)
	if k < 2:
		return

	total = _tour_cost(ends, home, cost_lift, order, dirs)
	improved = True
	while improved:
		improved = False
		for a in range(k):
			if _lk_anchor(ends, home, cost_lift, order, dirs, pos, neighbors, a,
				total, depth, breadth):
				_orient(ends, home, cost_lift, order, dirs)
				_two_opt(ends, home, cost_lift, order, dirs, pos)
				total = _tour_cost(ends, home, cost_lift, order, dirs)
				improved = True


def _arrays(path):
	order, dirs = path.order, path.dirs
	pos = numpy.empty_like(order)
	pos[order] = numpy.arange(len(order))
	return order, dirs, pos


def tour_cost(inst, path):
	"""Return the cost of a path as the local search kernels see it."""

	order, dirs, _ = _arrays(path)
	return _tour_cost(inst.ends, inst.home_array, inst.cost_lift, order, dirs)


def greedy(inst):
	"""Construct a path by always drawing the nearest unvisited start next.

	Starting at home, the directed node whose start point is closest to the
	current position is appended and the position moves to its end point.
	Ties go to the lowest segment id and then to the forward direction.


	Parameters
	----------
	inst: drawpath.gtsp.GtspInstance
		The problem instance.


	Returns
	-------
	path: drawpath.gtsp.DrawingPath
		The greedy path.
	"""

	ends = inst.ends
	k = inst.n_segments

	# column 0 holds forward starts (first points), column 1 reverse starts
	visited = numpy.zeros(k, dtype=bool)
	position = inst.home_array
	order, dirs = [], []

	for _ in range(k):
		d = numpy.hypot(ends[:, :, 0] - position[0], ends[:, :, 1] -
			position[1])
		d[visited] = numpy.inf

		s, col = numpy.unravel_index(numpy.argmin(d), d.shape)
		direction = 1 - col

		order.append(s)
		dirs.append(direction)
		visited[s] = True
		position = ends[s, direction]

	return DrawingPath.from_arrays(order, dirs)


def two_opt(inst, path):
	"""Improve a path with best-improvement 2-opt until no move helps.

	A move reverses the tour between two positions and flips the direction
	of every segment inside, which includes flipping a single segment. Each
	sweep applies the single best move and sweeps repeat until no move
	lowers the cost.


	Parameters
	----------
	inst: drawpath.gtsp.GtspInstance
		The problem instance.

	path: drawpath.gtsp.DrawingPath
		The path to improve.


	Returns
	-------
	path: drawpath.gtsp.DrawingPath
		A 2-opt local optimum no more costly than the input.
	"""

	order, dirs, pos = _arrays(path)
	_two_opt(inst.ends, inst.home_array, inst.cost_lift, order, dirs, pos)
	return DrawingPath.from_arrays(order, dirs)


def orient(inst, path):
	"""Re-optimize the directions of a path while keeping its visit order."""

	order, dirs, _ = _arrays(path)
	if len(order) > 0:
		_orient(inst.ends, inst.home_array, inst.cost_lift, order, dirs)

	return DrawingPath.from_arrays(order, dirs)


def lin_kernighan(inst, path, depth=5, breadth=5):
	"""Improve a path with a Lin-Kernighan style variable-depth search.

	The path is first brought to a 2-opt local optimum. Then, for every
	position taken as an anchor, sequences of up to `depth` reversals that
	all begin at the anchor are explored, trying at each level the `breadth`
	reversals whose new link joins the closest endpoints. A sequence is
	only extended while its running gain stays positive. When a cheaper
	tour is found the directions are re-optimized exactly, 2-opt is run
	again and the scan continues, until a full pass over the anchors finds
	nothing.


	Parameters
	----------
	inst: drawpath.gtsp.GtspInstance
		The problem instance.

	path: drawpath.gtsp.DrawingPath
		The path to improve.

	depth: int, optional
		The largest number of reversals in one sequence. Default is 5.

	breadth: int, optional
		The number of candidate reversals tried at each level. Default is 5.


	Returns
	-------
	path: drawpath.gtsp.DrawingPath
		A path no more costly than the input that is also 2-opt optimal.
	"""

	if depth < 1 or breadth < 1:
		raise ValueError("depth and breadth must be at least 1.")

	order, dirs, pos = _arrays(path)
	_lin_kernighan(inst.ends, inst.home_array, inst.cost_lift, order, dirs, pos,
		inst.neighbors, depth, breadth)
	return DrawingPath.from_arrays(order, dirs)
