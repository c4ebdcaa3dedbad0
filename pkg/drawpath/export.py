# export.py
# Author: Jacob Schreiber <jmschreiber91@gmail.com>

"""
This module contains the outputs of a planned drawing: the path file that
lists pen-up and pen-down moves in drawing order, an SVG preview of the
drawing, and a plot of how the genetic algorithm converged.
"""

import json
import numpy
import seaborn
import svgwrite

from .gtsp import Direction
from .gtsp import DrawingPath
from .gtsp import build_instance
from .gtsp import evaluate
from .trace import LineSegment

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt


def _moves(path, inst):
	"""Yield the pen-up and pen-down moves of a path in drawing order.

	The trips from home and back home are always pen-up moves, and a
	transition between segments is one only when its endpoints differ.
	"""

	position, first = tuple(inst.home), True
	for segment_id, direction in path.tour:
		points = inst.segments[segment_id].points
		if direction == Direction.REVERSE:
			points = points[::-1]

		if first or points[0] != position:
			yield {'type': 'pen_up', 'from': list(position), 'to': list(
				points[0])}

		yield {'type': 'pen_down', 'segment_id': segment_id, 'direction':
			direction.name.lower(), 'points': [list(p) for p in points]}

		position, first = points[-1], False

	if not first:
		yield {'type': 'pen_up', 'from': list(position), 'to': list(inst.home)}


def export_path(path, inst, filename):
	"""Write a planned path to a JSON path file.

	The file holds the home point, the cost of a lift, the canvas size, the
	moves in drawing order and the fitness report of the path. Pen-down
	moves carry the full pixel sequence with the direction already applied.


	Parameters
	----------
	path: drawpath.gtsp.DrawingPath
		The path to write.

	inst: drawpath.gtsp.GtspInstance
		The instance the path was planned on.

	filename: str
		The name of the file to write.
	"""

	report = evaluate(inst, path)
	document = {
		'home': list(inst.home),
		'cost_lift': inst.cost_lift,
		'width': inst.width,
		'height': inst.height,
		'moves': list(_moves(path, inst)),
		'fitness': {
			'v_fitness': report.v_fitness,
			'n_lift': report.n_lift,
			'lift_cost': report.lift_cost,
			'd_home_first': report.d_home_first,
			'd_last_home': report.d_last_home,
			'd_inter': list(report.d_inter)
		}
	}

	with open(filename, "w") as outfile:
		json.dump(document, outfile, indent=1)


def import_path(filename):
	"""Read a path file written by `export_path`.

	Segments are rebuilt in their traced orientation, so re-evaluating the
	returned path reproduces the stored fitness.


	Parameters
	----------
	filename: str
		The name of the path file.


	Returns
	-------
	inst: drawpath.gtsp.GtspInstance
		The instance rebuilt from the pen-down moves.

	path: drawpath.gtsp.DrawingPath
		The path stored in the file.
	"""

	with open(filename, "r") as infile:
		document = json.load(infile)

	try:
		segments, tour = [], []
		for move in document['moves']:
			if move['type'] != 'pen_down':
				continue

			direction = Direction[move['direction'].upper()]
			points = [tuple(p) for p in move['points']]
			if direction == Direction.REVERSE:
				points = points[::-1]

			segments.append(LineSegment(move['segment_id'], tuple(points)))
			tour.append((move['segment_id'], direction))

		inst = build_instance(segments, document['home'], document['cost_lift'],
			document.get('width'), document.get('height'))
	except (KeyError, TypeError) as e:
		raise ValueError("Malformed path file {}: {}".format(filename, e)) from e

	return inst, DrawingPath(tuple(tour))


def render_svg(path, inst, filename, size=None, home=None):
	"""Draw a static SVG preview of a planned path.

	Pen-down moves are drawn as solid polylines and pen-up travel as dashed
	lines, with the home point marked by a circle. The viewport is the size
	of the canvas.


	Parameters
	----------
	path: drawpath.gtsp.DrawingPath
		The path to draw. May be empty, in which case only home is drawn.

	inst: drawpath.gtsp.GtspInstance or None
		The instance the path was planned on. May only be None for an empty
		path.

	filename: str
		The name of the file to write.

	size: tuple of int or None, optional
		The (width, height) of the canvas. Defaults to the instance's canvas,
		or to the bounding box of the drawing if that is unknown.

	home: tuple of float or None, optional
		The home point when no instance is given. Default is (0, 0).
	"""

	if inst is None and len(path) > 0:
		raise ValueError("A nonempty path needs its instance to be drawn.")

	if inst is not None:
		home = inst.home
	elif home is None:
		home = (0.0, 0.0)

	if size is None and inst is not None and inst.width is not None:
		size = (inst.width, inst.height)
	elif size is None:
		points = numpy.array([home] + ([] if inst is None else
			inst.ends.reshape(-1, 2).tolist()))
		size = tuple(int(v) + 1 for v in points.max(axis=0))

	width, height = size
	dwg = svgwrite.Drawing(filename, size=(width, height), profile='tiny')
	dwg.viewbox(0, 0, width, height)

	travel = dwg.g(id="pen_up", stroke="#c0392b", fill="none",
		stroke_width=0.5, stroke_dasharray="2,2")
	strokes = dwg.g(id="pen_down", stroke="#000000", fill="none",
		stroke_width=1, stroke_linecap="round", stroke_linejoin="round")

	if len(path) > 0:
		for move in _moves(path, inst):
			if move['type'] == 'pen_up':
				travel.add(dwg.line(start=move['from'], end=move['to']))
			else:
				strokes.add(dwg.polyline(points=move['points']))

	dwg.add(strokes)
	dwg.add(travel)
	dwg.add(dwg.circle(center=home, r=2, id="home", fill="#2980b9"))
	dwg.save()


def plot_convergence(stats, filename):
	"""Plot the best fitness of every generation of a run."""

	plt.figure(figsize=(6, 4))
	plt.plot(stats.best_fitness_per_generation, color='0.2')
	plt.xlabel("Generation", fontsize=12)
	plt.ylabel("Best Fitness", fontsize=12)
	seaborn.despine()
	plt.tight_layout()
	plt.savefig(filename)
	plt.close()
