# trace.py
# Author: Jacob Schreiber <jmschreiber91@gmail.com>

"""
This module contains the tracing step that turns a binary contour image into
ordered line segments. The contour image is cleaned of small components,
thinned to one pixel in width, pruned of short spurs, has its line ends
extended to close small gaps, and is finally split at junctions into
arcs that are traced pixel by pixel.

Pixels are handled internally as (y, x) tuples so that sorting them gives
the row-major scan order. Segments report their points as (x, y).
"""

import math
import numpy

from dataclasses import dataclass
from scipy import ndimage
from skimage.morphology import thin

from .io import BinaryImage


# N, NE, E, SE, S, SW, W, NW as (dy, dx)
_OFFSETS = ((-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1),
	(-1, -1))

# Axis neighbors first so that walks prefer straight steps.
_WALK_ORDER = _OFFSETS[0::2] + _OFFSETS[1::2]


@dataclass(frozen=True)
class LineSegment():
	"""An ordered run of pixels that can be drawn without lifting the pen.


	Parameters
	----------
	id: int
		The identifier of the segment. Segments of one image are numbered
		0 to K-1.

	points: tuple of (int, int)
		The (x, y) pixel coordinates in drawing order. Consecutive points are
		distinct and 8-adjacent and no point repeats, except that a closed
		loop repeats its first point as its last.
	"""

	id: int
	points: tuple

	def __post_init__(self):
		points = tuple((int(x), int(y)) for x, y in self.points)
		object.__setattr__(self, 'points', points)

		if self.id < 0:
			raise ValueError("Segment ids must be non-negative, got {}".format(
				self.id))

		if len(points) < 2:
			raise ValueError("Segment {} has fewer than two points.".format(
				self.id))

		for (x0, y0), (x1, y1) in zip(points[:-1], points[1:]):
			if max(abs(x1 - x0), abs(y1 - y0)) != 1:
				raise ValueError("Points {} and {} of segment {} are not "
					"8-adjacent.".format((x0, y0), (x1, y1), self.id))

		if len(set(points[:-1])) < len(points) - 1 or len(set(points[1:])) < len(
			points) - 1:
			raise ValueError("Segment {} revisits a point.".format(self.id))

		if self.closed and len(points) < 4:
			raise ValueError("Closed segment {} needs at least three distinct "
				"points.".format(self.id))

	@property
	def closed(self):
		return self.points[0] == self.points[-1]

	@property
	def start(self):
		return self.points[0]

	@property
	def end(self):
		return self.points[-1]

	def __len__(self):
		return len(self.points)


@dataclass(frozen=True)
class TraceParams():
	"""Parameters of the tracing step, all counted in pixels.


	Parameters
	----------
	min_component_px: int, optional
		Connected ink components with fewer pixels than this are removed
		during cleaning. Default is 8.

	max_spur_px: int, optional
		Branches running from an endpoint to a junction that are shorter than
		this are pruned. Default is 5.

	max_extension_px: int, optional
		The most pixels a line end may be extended by. Default is 3.
	"""

	min_component_px: int = 8
	max_spur_px: int = 5
	max_extension_px: int = 3

	def __post_init__(self):
		for name in ('min_component_px', 'max_spur_px', 'max_extension_px'):
			if getattr(self, name) < 0:
				raise ValueError("{} must be non-negative, got {}".format(name,
					getattr(self, name)))


def _neighbors(ink, y, x):
	h, w = ink.shape
	for dy, dx in _WALK_ORDER:
		yy, xx = y + dy, x + dx
		if 0 <= yy < h and 0 <= xx < w and ink[yy, xx]:
			yield yy, xx


def _crossings(ink, y, x):
	"""Return the crossing number and the ink neighbor count of a pixel."""

	h, w = ink.shape
	ring = [bool(0 <= y+dy < h and 0 <= x+dx < w and ink[y+dy, x+dx])
		for dy, dx in _OFFSETS]

	cn = sum(not a and b for a, b in zip(ring, ring[1:] + ring[:1]))
	return cn, sum(ring)


def _is_junction(ink, y, x):
	return bool(ink[y, x]) and _crossings(ink, y, x)[0] >= 3


def _is_endpoint(ink, y, x):
	if not ink[y, x]:
		return False

	cn, count = _crossings(ink, y, x)
	return cn == 1 and count <= 2


def _adjacent(a, b):
	return a != b and abs(a[0] - b[0]) <= 1 and abs(a[1] - b[1]) <= 1


def _ink_pixels(ink):
	return [(int(y), int(x)) for y, x in numpy.argwhere(ink)]


def detect_junctions(skel):
	"""Return the junction pixels of a skeleton as a set of (x, y) tuples.

	A junction is an ink pixel whose crossing number, the count of
	blank-to-ink transitions met when circling its eight neighbors, is at
	least three.
	"""

	return {(x, y) for y, x in _ink_pixels(skel.ink)
		if _is_junction(skel.ink, y, x)}


def detect_endpoints(skel):
	"""Return the line ends of a skeleton as a set of (x, y) tuples.

	An endpoint has a crossing number of one and at most two ink neighbors,
	which must then touch each other.
	"""

	return {(x, y) for y, x in _ink_pixels(skel.ink)
		if _is_endpoint(skel.ink, y, x)}


def _walk_branch(ink, start, limit=None):
	"""Follow a branch from an endpoint toward the rest of the skeleton.

	The walk stops next to a junction, at a fork whose candidate pixels do
	not touch each other, or when it runs out of pixels. Returns the visited
	pixels and whether the walk stopped at a junction or fork.
	"""

	branch = [start]
	visited = {start}
	current = start

	while limit is None or len(branch) < limit:
		candidates = [p for p in _neighbors(ink, *current) if p not in visited]
		if len(candidates) == 0:
			return branch, False

		if any(_is_junction(ink, *p) for p in candidates):
			return branch, True

		if len(candidates) > 1:
			for i, p in enumerate(candidates):
				if any(not _adjacent(p, q) for q in candidates[i+1:]):
					return branch, True

		current = candidates[0]
		branch.append(current)
		visited.add(current)

	return branch, False


def clean(img, params=TraceParams()):
	"""Remove 8-connected ink components smaller than `min_component_px`.


	Parameters
	----------
	img: drawpath.io.BinaryImage
		The contour image.

	params: drawpath.trace.TraceParams, optional
		The tracing parameters.


	Returns
	-------
	cleaned: drawpath.io.BinaryImage
		The image with small components removed.
	"""

	if params.min_component_px == 0:
		return BinaryImage(img.ink.copy())

	labels, _ = ndimage.label(img.ink, structure=numpy.ones((3, 3)))
	sizes = numpy.bincount(labels.ravel())

	keep = sizes >= params.min_component_px
	keep[0] = False
	return BinaryImage(keep[labels])


def _open_crossings(ink):
	"""Clear pixels whose four axis neighbors are all ink, in scan order.

	The axis neighbors of such a pixel touch each other diagonally, so every
	removal keeps the component 8-connected. The array must be padded.
	"""

	changed = False
	center = ink[1:-1, 1:-1] & ink[:-2, 1:-1] & ink[2:, 1:-1] & ink[1:-1, :-2] & ink[1:-1, 2:]

	for y, x in numpy.argwhere(center) + 1:
		if ink[y-1, x] and ink[y+1, x] and ink[y, x-1] and ink[y, x+1]:
			ink[y, x] = False
			changed = True

	return changed


def skeletonize(img):
	"""Thin an ink mask down to one pixel in width.

	The mask is thinned with `skimage.morphology.thin`, which deletes
	simple border pixels in two alternating hit-or-miss subiterations until
	nothing changes. Crossings that thinning cannot remove, where a pixel
	keeps ink on all four axis sides, are then opened and thinning resumes
	until both steps are stable.


	Parameters
	----------
	img: drawpath.io.BinaryImage
		The mask to thin.


	Returns
	-------
	skel: drawpath.io.BinaryImage
		The thinned mask, a subset of the input.
	"""

	ink = numpy.pad(img.ink, 1)

	while True:
		ink = thin(ink)
		if not _open_crossings(ink):
			break

	return BinaryImage(ink[1:-1, 1:-1])


def prune(skel, params=TraceParams()):
	"""Remove spurs shorter than `max_spur_px` pixels.

	A spur is the run of pixels from an endpoint up to, but excluding, the
	first junction. Walks that never meet a junction cover a whole
	component and are kept regardless of length. Endpoints are visited in
	scan order on the working image and passes repeat until no spur is left.


	Parameters
	----------
	skel: drawpath.io.BinaryImage
		A thinned mask.

	params: drawpath.trace.TraceParams, optional
		The tracing parameters.


	Returns
	-------
	pruned: drawpath.io.BinaryImage
		The skeleton without short spurs.
	"""

	ink = skel.ink.copy()
	if params.max_spur_px == 0:
		return BinaryImage(ink)

	changed = True
	while changed:
		changed = False

		for y, x in _ink_pixels(ink):
			if not _is_endpoint(ink, y, x):
				continue

			branch, reached = _walk_branch(ink, (y, x))
			if reached and len(branch) < params.max_spur_px:
				for p in branch:
					ink[p] = False

				changed = True

	return BinaryImage(ink)


def extend_line_ends(skel, params=TraceParams()):
	"""Extend every line end by up to `max_extension_px` pixels.

	The direction of an end is the vector from the third pixel back along its
	branch to the endpoint. Extension pixels are placed one Chebyshev step
	at a time along that direction and stop at the image border, before a
	pixel that is already ink, or right after touching ink that does not
	belong to the branch being extended. This closes small gaps between
	strokes.


	Parameters
	----------
	skel: drawpath.io.BinaryImage
		A thinned mask.

	params: drawpath.trace.TraceParams, optional
		The tracing parameters.


	Returns
	-------
	extended: drawpath.io.BinaryImage
		The skeleton with extended line ends.
	"""

	ink = skel.ink.copy()
	if params.max_extension_px == 0:
		return BinaryImage(ink)

	h, w = ink.shape
	for y, x in _ink_pixels(skel.ink):
		if not _is_endpoint(ink, y, x):
			continue

		branch, _ = _walk_branch(ink, (y, x), limit=3+params.max_extension_px)
		if len(branch) < 2:
			continue

		ty, tx = branch[min(2, len(branch) - 1)]
		dy, dx = y - ty, x - tx
		norm = max(abs(dy), abs(dx))
		own = set(branch)

		for k in range(1, params.max_extension_px + 1):
			qy = y + int(math.floor(k * dy / norm + 0.5))
			qx = x + int(math.floor(k * dx / norm + 0.5))
			if not (0 <= qy < h and 0 <= qx < w) or ink[qy, qx]:
				break

			ink[qy, qx] = True
			own.add((qy, qx))

			if any(p not in own for p in _neighbors(ink, qy, qx)):
				break

	return BinaryImage(ink)


def split_and_trace(skel):
	"""Split a skeleton at its junctions and trace the pieces into segments.

	Junction pixels are taken out and the remaining pixels are grouped into
	arcs. Two arc pixels that both touch the same junction are not linked
	directly, so the arms of a crossing stay apart. Each arc is walked from
	its lowest endpoint in scan order, preferring axis steps, and the
	junctions next to its two ends are put back as its first and last
	points. Pixels a walk leaves behind are traced as further pieces or
	spliced into a neighboring piece. Adjacent junctions are joined by their
	own two-point segments, and a junction that no segment reaches is joined
	to its lowest ink neighbor. Rings without a junction are traced from
	their lowest pixel and repeat it at the end. Isolated single pixels
	cannot form a segment and are dropped.

	Open segments are oriented so they start at their lower end in scan
	order, and segments are sorted by their start and numbered from 0.


	Parameters
	----------
	skel: drawpath.io.BinaryImage
		A thinned mask.


	Returns
	-------
	segments: list of drawpath.trace.LineSegment
		The traced segments.
	"""

	ink = skel.ink
	pixels = _ink_pixels(ink)
	junctions = {p for p in pixels if _is_junction(ink, *p)}
	arc = set(pixels) - junctions

	touching = {p: {q for q in _neighbors(ink, *p) if q in junctions}
		for p in pixels}

	def links(p):
		for q in _neighbors(ink, *p):
			if q in arc and not (touching[p] & touching[q]):
				yield q

	def walk(start, visited):
		path = [start]
		visited.add(start)

		while True:
			step = next((q for q in links(path[-1]) if q not in visited), None)
			if step is None:
				return path

			path.append(step)
			visited.add(step)

	def attach(piece):
		head = sorted(touching[piece[0]])
		tail = sorted(touching[piece[-1]])

		if len(piece) == 1:
			return head[:1] + piece + head[1:2]

		points = list(piece)
		if head:
			points.insert(0, head[0])

		if tail:
			points.append(next((j for j in tail if j != points[0]), tail[0]))

		return points

	traced, visited = [], set()
	for pixel in sorted(arc):
		if pixel in visited:
			continue

		component, frontier = {pixel}, [pixel]
		while frontier:
			for q in links(frontier.pop()):
				if q not in component:
					component.add(q)
					frontier.append(q)

		ends = [p for p in component if sum(1 for _ in links(p)) <= 1]
		start = min(ends) if ends else min(component)
		path = walk(start, visited)

		if not ends and len(path) > 2 and start in links(path[-1]):
			pieces, closed = [path + [start]], True
		else:
			pieces, closed = [path], False

		strays = []
		while component - visited:
			remaining = component - visited
			loose = [p for p in remaining if sum(1 for q in links(p)
				if q in remaining) <= 1]
			piece = walk(min(loose) if loose else min(remaining), visited)

			if len(piece) > 1 or touching[piece[0]]:
				pieces.append(piece)
			else:
				strays.append(piece[0])

		for p in strays:
			for piece in pieces:
				slot = next((i for i in range(len(piece) - 1) if _adjacent(p,
					piece[i]) and _adjacent(p, piece[i+1])), None)
				if slot is not None:
					piece.insert(slot + 1, p)
					break
			else:
				anchor = min(q for q in _neighbors(ink, *p) if q in visited)
				pieces.append([anchor, p])

		for i, piece in enumerate(pieces):
			points = piece if (closed and i == 0) else attach(piece)
			if len(points) > 1:
				traced.append(points)

	for j in sorted(junctions):
		for k in sorted(touching[j]):
			if k <= j:
				continue

			if j[0] != k[0] and j[1] != k[1] and ((j[0], k[1]) in junctions or
				(k[0], j[1]) in junctions):
				continue

			traced.append([j, k])

	covered = {p for points in traced for p in points}
	for j in sorted(junctions - covered):
		traced.append([j, min(_neighbors(ink, *j))])

	for points in traced:
		if points[0] != points[-1] and points[-1] < points[0]:
			points.reverse()

	traced.sort(key=lambda points: (points[0], points))
	return [LineSegment(i, tuple((x, y) for y, x in points))
		for i, points in enumerate(traced)]


def trace_image(img, params=TraceParams()):
	"""Run the whole tracing step on a contour image.

	The image is cleaned, skeletonized, pruned, has its line ends extended
	and is then split and traced.


	Parameters
	----------
	img: drawpath.io.BinaryImage
		The contour image.

	params: drawpath.trace.TraceParams, optional
		The tracing parameters.


	Returns
	-------
	segments: list of drawpath.trace.LineSegment
		The traced segments.
	"""

	skel = skeletonize(clean(img, params))
	skel = extend_line_ends(prune(skel, params), params)
	return split_and_trace(skel)
