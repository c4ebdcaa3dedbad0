# helpers.py
# Author: Jacob Schreiber <jmschreiber91@gmail.com>

import math
import itertools
import numpy

from scipy import ndimage

from drawpath.gtsp import build_instance
from drawpath.io import BinaryImage
from drawpath.trace import LineSegment


def bitmap(rows):
	"""Build a binary image from strings where '#' is ink."""

	return BinaryImage(numpy.array([[c == '#' for c in row] for row in rows]))


def plus(size=15, arm=4, center=None):
	ink = numpy.zeros((size, size), dtype=bool)
	cy, cx = center or (size // 2, size // 2)
	ink[cy-arm:cy+arm+1, cx] = True
	ink[cy, cx-arm:cx+arm+1] = True
	return ink


def raster_line(a, b):
	"""The 8-connected pixels from a to b, both (x, y)."""

	(x0, y0), (x1, y1) = a, b
	n = max(abs(x1 - x0), abs(y1 - y0))
	if n == 0:
		return [(x0, y0)]

	t = numpy.arange(n + 1) / n
	xs = numpy.floor(x0 + t * (x1 - x0) + 0.5).astype(int)
	ys = numpy.floor(y0 + t * (y1 - y0) + 0.5).astype(int)
	return list(zip(xs.tolist(), ys.tolist()))


def random_segments(k, rng, size=100, max_length=15):
	segments = []
	for i in range(k):
		a = rng.integers(0, size, size=2)
		b = numpy.clip(a + rng.integers(-max_length, max_length + 1, size=2), 0,
			size - 1)
		if (a == b).all():
			b = numpy.clip(a + 1, 0, size - 1) if a[0] < size - 1 else a - 1

		segments.append(LineSegment(i, raster_line(tuple(a.tolist()),
			tuple(b.tolist()))))

	return segments


def random_instance(k, seed, size=100, cost_lift=30.0, home=(0.0, 0.0)):
	rng = numpy.random.default_rng(seed)
	return build_instance(random_segments(k, rng, size), home, cost_lift)


def oracle_fitness(inst, tour):
	"""Total cost of a tour computed point by point."""

	x, y = inst.home
	total, lifts = 0.0, 0
	for i, (s, d) in enumerate(tour):
		points = list(inst.segments[s].points)
		if int(d) == 0:
			points.reverse()

		gap = math.hypot(points[0][0] - x, points[0][1] - y)
		total += gap
		if i == 0 or gap > 0:
			lifts += 1

		x, y = points[-1]

	total += math.hypot(inst.home[0] - x, inst.home[1] - y)
	return total + (lifts + 1) * inst.cost_lift


def brute_force(inst):
	"""Return the lowest cost over every order and direction of a small instance."""

	k = inst.n_segments
	ends = numpy.array([[s.points[0], s.points[-1]] for s in inst.segments],
		dtype='float64')
	home = numpy.array(inst.home)

	orders = numpy.array(list(itertools.permutations(range(k))))
	dirs = numpy.array(list(itertools.product((0, 1), repeat=k)))

	o = numpy.repeat(orders, len(dirs), axis=0)
	d = numpy.tile(dirs, (len(orders), 1))

	starts = ends[o, 1 - d]
	finishes = ends[o, d]

	first = numpy.linalg.norm(starts[:, 0] - home, axis=1)
	last = numpy.linalg.norm(finishes[:, -1] - home, axis=1)
	gaps = numpy.linalg.norm(starts[:, 1:] - finishes[:, :-1], axis=2)

	cost = first + last + gaps.sum(axis=1) + inst.cost_lift * (2 + (gaps > 0
		).sum(axis=1))
	return cost.min()


def components(ink):
	return ndimage.label(ink, structure=numpy.ones((3, 3)))[1]


def holes(ink):
	padded = numpy.pad(~ink, 1, constant_values=True)
	labels, n = ndimage.label(padded)
	return n - 1


def is_thin(ink):
	padded = numpy.pad(ink, 1)
	crossing = (padded[1:-1, 1:-1] & padded[:-2, 1:-1] & padded[2:, 1:-1] &
		padded[1:-1, :-2] & padded[1:-1, 2:])
	return not crossing.any()


def random_blobs(seed, size=48, n=3):
	rng = numpy.random.default_rng(seed)
	yy, xx = numpy.mgrid[:size, :size]

	ink = numpy.zeros((size, size), dtype=bool)
	for _ in range(n):
		cy, cx = rng.uniform(8, size - 8, size=2)
		ry, rx = rng.uniform(2, 8, size=2)
		ink |= ((yy - cy) / ry) ** 2 + ((xx - cx) / rx) ** 2 <= 1

	return ink


def dog_across_rows(data, kernel, tau):
	"""Threshold a column-wise DoG, computed pixel by pixel with the border
	clamped, the way the filter responds to a flow running along the rows."""

	h, w = data.shape
	half = len(kernel) // 2

	response = numpy.zeros((h, w))
	for y in range(h):
		for x in range(w):
			for k in range(-half, half+1):
				response[y, x] += kernel[k + half] * data[min(max(y + k, 0),
					h - 1), x]

	response = numpy.where(response < 0, 1 + numpy.tanh(response), 1.0)
	low = response.min()
	if low < 1 - 1e-9:
		response = (response - low) / (1 - low)

	return response < tau
