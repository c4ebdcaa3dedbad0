# gtsp.py
# Author: Jacob Schreiber <jmschreiber91@gmail.com>

"""
This module contains the drawing-order problem expressed as a generalized
travelling salesman problem. Every traced segment forms a set of two nodes,
one for drawing it forward and one for drawing it in reverse, and a drawing
path visits exactly one node of every set. Paths are encoded for the
genetic algorithm as random keys: one real number per segment whose decimal
part gives the visit order and whose integer part gives the direction.

The cost of a path is the pen-up travel from home to the first segment,
between consecutive segments, and back home, plus a fixed cost for every
lift of the pen. The two trips to and from home always lift the pen; a
transition between segments lifts it only when the two points differ.
"""

import numpy

from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property


# Largest key strictly below 2.
KEY_MAX = numpy.nextafter(2.0, 0.0)


class Direction(IntEnum):
	"""The direction a segment is drawn in. The value is the key's integer part."""

	REVERSE = 0
	FORWARD = 1


@dataclass(frozen=True)
class DirectedNode():
	"""One of the two ways of drawing a segment.

	Forward nodes start at the first traced point and end at the last one;
	reverse nodes swap the two.
	"""

	segment_id: int
	direction: Direction
	start: tuple
	end: tuple


@dataclass(frozen=True)
class DrawingPath():
	"""An ordered list of (segment_id, direction) pairs.

	The segment ids of a path are a permutation of 0 to K-1.
	"""

	tour: tuple

	def __post_init__(self):
		tour = tuple((int(s), Direction(int(d))) for s, d in self.tour)
		object.__setattr__(self, 'tour', tour)

		if sorted(s for s, _ in tour) != list(range(len(tour))):
			raise ValueError("The segment ids of a path must be a permutation "
				"of 0 to {}.".format(len(tour) - 1))

	@classmethod
	def from_arrays(cls, order, dirs):
		"""Build a path from an array of segment ids and one of direction bits."""

		return cls(tuple(zip(numpy.asarray(order).tolist(),
			numpy.asarray(dirs).tolist())))

	@property
	def order(self):
		return numpy.array([s for s, _ in self.tour], dtype='int64')

	@property
	def dirs(self):
		return numpy.array([int(d) for _, d in self.tour], dtype='int64')

	def __len__(self):
		return len(self.tour)


@dataclass(frozen=True, eq=False)
class Chromosome():
	"""A random-key encoding of a drawing path.

	Key i belongs to segment i. Its integer part is 1 for forward and 0 for
	reverse and its decimal part orders the visits.
	"""

	keys: numpy.ndarray

	def __post_init__(self):
		keys = numpy.array(self.keys, dtype='float64')
		if keys.ndim != 1:
			raise ValueError("Keys must be one dimensional.")

		if keys.size > 0 and (keys.min() < 0 or keys.max() >= 2):
			raise ValueError("Every key must lie in [0, 2).")

		keys.flags.writeable = False
		object.__setattr__(self, 'keys', keys)

	def __len__(self):
		return len(self.keys)

	def __eq__(self, other):
		return isinstance(other, Chromosome) and numpy.array_equal(self.keys,
			other.keys)


@dataclass(frozen=True)
class FitnessReport():
	"""The cost breakdown of a drawing path.

	v_fitness is lift_cost + d_home_first + d_last_home + sum(d_inter) where
	lift_cost is n_lift times the cost of one lift.
	"""

	v_fitness: float
	n_lift: int
	lift_cost: float
	d_home_first: float
	d_last_home: float
	d_inter: tuple


@dataclass(frozen=True, eq=False)
class GtspInstance():
	"""A set of segments to draw, the pen's home and the cost of a lift.


	Parameters
	----------
	segments: tuple of drawpath.trace.LineSegment
		The segments, where segment i has id i.

	home: tuple of float
		The (x, y) point the pen starts from and returns to.

	cost_lift: float
		The cost of one pen lift, in pixel units.

	width: int or None, optional
		The width of the canvas, used for rendering.

	height: int or None, optional
		The height of the canvas, used for rendering.
	"""

	segments: tuple
	home: tuple = (0.0, 0.0)
	cost_lift: float = 30.0
	width: int = None
	height: int = None

	@property
	def n_segments(self):
		return len(self.segments)

	@cached_property
	def ends(self):
		"""An array of shape (K, 2, 2) with the first and last point of each segment."""

		ends = numpy.array([[s.points[0], s.points[-1]] for s in self.segments],
			dtype='float64').reshape(-1, 2, 2)
		ends.flags.writeable = False
		return ends

	@cached_property
	def home_array(self):
		home = numpy.array(self.home, dtype='float64')
		home.flags.writeable = False
		return home

	@cached_property
	def neighbors(self):
		"""The closest endpoints of other segments for each of the 2K endpoints.

		Endpoint 2s + e is point e of segment s. Rows are sorted by distance
		and ties by endpoint index, and hold at most 16 entries.
		"""

		points = self.ends.reshape(-1, 2)
		n = points.shape[0]
		width = min(n - 2, 16)

		d = numpy.hypot(*(points[:, None, :] - points[None, :, :]).transpose(2,
			0, 1))
		same = numpy.arange(n) // 2
		d[same[:, None] == same[None, :]] = numpy.inf

		idxs = numpy.argsort(d, axis=1, kind='stable')[:, :width]
		return numpy.ascontiguousarray(idxs, dtype='int64')


def build_instance(segments, home=(0.0, 0.0), cost_lift=30.0, width=None,
	height=None):
	"""Construct a drawing problem from traced segments.

	Each of the K segments yields two directed nodes, so the problem has 2K
	nodes in K sets. The segments are stored in id order.


	Parameters
	----------
	segments: list of drawpath.trace.LineSegment
		The segments to draw. Their ids must be exactly 0 to K-1.

	home: tuple of float, optional
		The (x, y) home point of the pen. Default is (0, 0).

	cost_lift: float, optional
		The cost of one pen lift. Default is 30.

	width: int or None, optional
		The width of the canvas.

	height: int or None, optional
		The height of the canvas.


	Returns
	-------
	instance: drawpath.gtsp.GtspInstance
		The problem instance.
	"""

	segments = list(segments)
	if len(segments) == 0:
		raise ValueError("Cannot build an instance without segments.")

	ids = [segment.id for segment in segments]
	if len(set(ids)) != len(ids):
		raise ValueError("Duplicate segment ids: {}".format(sorted(
			i for i in set(ids) if ids.count(i) > 1)))

	if sorted(ids) != list(range(len(ids))):
		raise ValueError("Segment ids must run from 0 to {}.".format(
			len(ids) - 1))

	if cost_lift < 0:
		raise ValueError("cost_lift must be non-negative, got {}".format(
			cost_lift))

	home = tuple(float(v) for v in home)
	if len(home) != 2:
		raise ValueError("home must be an (x, y) point.")

	segments = tuple(sorted(segments, key=lambda segment: segment.id))
	return GtspInstance(segments, home, float(cost_lift), width, height)


def directed_node(inst, segment_id, direction):
	"""Return the start and end points of a segment drawn in a direction."""

	direction = Direction(int(direction))
	first, last = inst.ends[segment_id]
	if direction == Direction.REVERSE:
		first, last = last, first

	return DirectedNode(int(segment_id), direction, tuple(first.tolist()),
		tuple(last.tolist()))


def _check_path(inst, path):
	if len(path) != inst.n_segments:
		raise ValueError("Path visits {} segments but the instance has {}."
			.format(len(path), inst.n_segments))


def _distances(inst, order, dirs):
	"""Return the home-to-first, between-segment and last-to-home distances."""

	ends, home = inst.ends, inst.home_array
	starts = ends[order, 1 - dirs]
	finishes = ends[order, dirs]

	d_first = float(numpy.hypot(*(starts[0] - home)))
	d_last = float(numpy.hypot(*(finishes[-1] - home)))
	d_inter = numpy.hypot(*(starts[1:] - finishes[:-1]).T)
	return d_first, d_inter, d_last


def _assemble(cost_lift, d_first, d_inter, d_last):
	n_lift = 2 + int(numpy.count_nonzero(d_inter > 0))
	lift_cost = n_lift * cost_lift
	v_fitness = lift_cost + d_first + d_last + float(d_inter.sum())
	return n_lift, lift_cost, v_fitness


def evaluate(inst, path):
	"""Compute the cost breakdown of a drawing path.

	Distances are Euclidean in pixel units, from the end of each directed
	node to the start of the next one, and between home and the first and
	last nodes.


	Parameters
	----------
	inst: drawpath.gtsp.GtspInstance
		The problem instance.

	path: drawpath.gtsp.DrawingPath
		A path visiting every segment of the instance.


	Returns
	-------
	report: drawpath.gtsp.FitnessReport
		The cost breakdown.
	"""

	_check_path(inst, path)

	d_first, d_inter, d_last = _distances(inst, path.order, path.dirs)
	n_lift, lift_cost, v_fitness = _assemble(inst.cost_lift, d_first, d_inter,
		d_last)

	return FitnessReport(v_fitness, n_lift, lift_cost, d_first, d_last,
		tuple(d_inter.tolist()))


def path_fitness(inst, path):
	"""Return only the total cost of a path, identical to evaluate's."""

	_check_path(inst, path)
	return _assemble(inst.cost_lift, *_distances(inst, path.order,
		path.dirs))[2]


def decode(c):
	"""Turn a chromosome into a drawing path.

	Segments are visited in ascending order of the decimal parts of their
	keys, ties going to the lower segment id, and are drawn forward when the
	integer part is 1.
	"""

	keys = numpy.asarray(c.keys, dtype='float64')
	if keys.size > 0 and (keys.min() < 0 or keys.max() >= 2):
		raise ValueError("Every key must lie in [0, 2).")

	bits = numpy.floor(keys).astype('int64')
	order = numpy.argsort(keys - bits, kind='stable')
	return DrawingPath.from_arrays(order, bits[order])


def encode(p):
	"""Turn a drawing path into a chromosome that decodes back to it.

	The segment at position j of a K-segment tour receives the key
	direction + (j + 0.5) / (K + 1).
	"""

	k = len(p)
	keys = numpy.empty(k, dtype='float64')
	keys[p.order] = p.dirs + (numpy.arange(k) + 0.5) / (k + 1)
	return Chromosome(keys)


def reverse_keys(c):
	"""Transform keys so that they decode to the reversed tour.

	Every direction bit is flipped and every decimal part f becomes 1 - f,
	except that a decimal part of exactly 0 stays 0.
	"""

	keys = numpy.asarray(c.keys, dtype='float64')
	bits = numpy.floor(keys)
	frac = keys - bits

	keys = (1 - bits) + numpy.where(frac == 0, 0.0, 1 - frac)
	return Chromosome(numpy.minimum(keys, KEY_MAX))


def random_chromosome(k, rng):
	"""Draw K keys with Bernoulli(0.5) direction bits and uniform decimals."""

	return Chromosome(rng.integers(0, 2, size=k) + rng.random(k))
