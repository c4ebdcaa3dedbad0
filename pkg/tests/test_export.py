import json
import os

import numpy
import pytest

from xml.etree import ElementTree

from drawpath.export import export_path
from drawpath.export import import_path
from drawpath.export import plot_convergence
from drawpath.export import render_svg
from drawpath.gtsp import DrawingPath
from drawpath.gtsp import build_instance
from drawpath.gtsp import evaluate
from drawpath.rkga import SolveStats
from drawpath.trace import LineSegment

from helpers import random_instance


_SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture
def chained():
	return build_instance([
		LineSegment(0, ((2, 2), (3, 2), (4, 2))),
		LineSegment(1, ((4, 2), (4, 3), (4, 4))),
		LineSegment(2, ((8, 8), (9, 9))),
	], home=(0, 0), cost_lift=30, width=12, height=10)


@pytest.fixture
def chained_path():
	return DrawingPath(((0, 1), (1, 1), (2, 0)))


def _viewbox(root):
	return [float(v) for v in root.get('viewBox').replace(",", " ").split()]


def _groups(filename):
	root = ElementTree.parse(filename).getroot()
	return {g.get('id'): g for g in root.iter(_SVG + 'g')}, root


###


def test_export_moves(tmp_path, chained, chained_path):
	filename = str(tmp_path / "path.json")
	export_path(chained_path, chained, filename)

	with open(filename) as infile:
		document = json.load(infile)

	types = [move['type'] for move in document['moves']]
	assert types == ['pen_up', 'pen_down', 'pen_down', 'pen_up', 'pen_down',
		'pen_up']

	last = document['moves'][4]
	assert last['segment_id'] == 2
	assert last['direction'] == 'reverse'
	assert last['points'] == [[9, 9], [8, 8]]

	assert document['moves'][0] == {'type': 'pen_up', 'from': [0.0, 0.0],
		'to': [2, 2]}
	assert document['fitness']['n_lift'] == 3
	assert document['fitness']['v_fitness'] == pytest.approx(evaluate(chained,
		chained_path).v_fitness)


@pytest.mark.parametrize("seed", range(3))
def test_export_import(tmp_path, seed):
	inst = random_instance(10, seed)
	rng = numpy.random.default_rng(seed)
	path = DrawingPath.from_arrays(rng.permutation(10), rng.integers(0, 2,
		size=10))

	filename = str(tmp_path / "path.json")
	export_path(path, inst, filename)
	inst2, path2 = import_path(filename)

	assert path2 == path
	assert inst2.segments == inst.segments
	assert inst2.home == inst.home and inst2.cost_lift == inst.cost_lift
	assert evaluate(inst2, path2) == evaluate(inst, path)


def test_import_malformed(tmp_path):
	filename = str(tmp_path / "path.json")
	with open(filename, "w") as outfile:
		json.dump({'moves': [{'type': 'pen_down'}]}, outfile)

	with pytest.raises(ValueError, match="Malformed"):
		import_path(filename)


def test_export_unwritable(tmp_path, chained, chained_path):
	with pytest.raises(OSError):
		export_path(chained_path, chained, str(tmp_path / "missing" / "p.json"))


###


def test_render_svg(tmp_path, chained, chained_path):
	filename = str(tmp_path / "drawing.svg")
	render_svg(chained_path, chained, filename)

	groups, root = _groups(filename)
	assert _viewbox(root) == [0, 0, 12, 10]
	assert len(groups['pen_down'].findall(_SVG + 'polyline')) == 3
	assert len(groups['pen_up'].findall(_SVG + 'line')) == 3
	assert root.find(_SVG + 'circle').get('id') == "home"


def test_render_svg_empty_path(tmp_path):
	filename = str(tmp_path / "drawing.svg")
	render_svg(DrawingPath(()), None, filename, size=(20, 10), home=(5, 5))

	groups, root = _groups(filename)
	assert len(groups['pen_down']) == 0
	assert len(groups['pen_up']) == 0

	circle = root.find(_SVG + 'circle')
	assert (float(circle.get('cx')), float(circle.get('cy'))) == (5.0, 5.0)


def test_render_svg_without_canvas(tmp_path):
	inst = build_instance([LineSegment(0, ((30, 10), (31, 11)))])
	filename = str(tmp_path / "drawing.svg")
	render_svg(DrawingPath(((0, 1),)), inst, filename)

	_, root = _groups(filename)
	assert _viewbox(root) == [0, 0, 32, 12]


def test_render_svg_needs_instance(tmp_path):
	with pytest.raises(ValueError):
		render_svg(DrawingPath(((0, 1),)), None, str(tmp_path / "d.svg"))


def test_plot_convergence(tmp_path):
	stats = SolveStats(best_fitness_per_generation=[10.0, 8.0, 8.0, 7.5])
	filename = str(tmp_path / "convergence.png")
	plot_convergence(stats, filename)

	assert os.path.getsize(filename) > 0
