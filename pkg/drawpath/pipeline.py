# pipeline.py
# Author: Jacob Schreiber <jmschreiber91@gmail.com>

"""
This module contains the full pipeline that turns an image into a planned
drawing: contours are extracted, traced into segments, ordered by the chosen
planning method and written out as a path file, an SVG preview and a
report. Failures are reported with the stage they happened in.
"""

import os
import json
import time

from contextlib import contextmanager
from dataclasses import asdict

from .contour import extract_contours
from .export import export_path
from .export import plot_convergence
from .export import render_svg
from .gtsp import DrawingPath
from .gtsp import build_instance
from .gtsp import evaluate
from .io import load_gray
from .io import save_binary
from .io import write_segments
from .rkga import solve
from .trace import trace_image


class PipelineError(RuntimeError):
	"""A failure in one stage of the pipeline.

	The original exception is kept as the cause.
	"""

	def __init__(self, stage, message):
		super().__init__(message)
		self.stage = stage

	def __str__(self):
		return "[{}] {}".format(self.stage, super().__str__())


@contextmanager
def _stage(name, timings, verbose):
	tic = time.time()
	try:
		yield
	except PipelineError:
		raise
	except Exception as e:
		raise PipelineError(name, str(e) or type(e).__name__) from e

	timings[name] = time.time() - tic
	if verbose:
		print("{}: {:.3f}s".format(name, timings[name]))


def run_pipeline(cfg, input, out_dir):
	"""Turn an image into a planned drawing.

	The following files are written to `out_dir`: `contour.png`, the
	contour mask; `segments.json`, the traced segments; `path.json`, the
	planned path; `drawing.svg`, a preview of the drawing; and
	`report.json`, a summary with the segment count, the fitness breakdown
	and the time spent in each stage. Runs of the genetic algorithm also
	write their per-generation log, `ga_log.tsv`, and a convergence plot,
	`convergence.png`.

	An image without lines produces no segments. This is not an error: no
	path file is written, the preview shows only the home point and the
	report notes zero segments.


	Parameters
	----------
	cfg: drawpath.config.PipelineConfig
		The pipeline configuration.

	input: str
		The name of the image to draw.

	out_dir: str
		The directory to write the outputs to. Created if missing.


	Returns
	-------
	report: dict
		The summary report that is also written to `report.json`.
	"""

	timings = {}
	verbose = cfg.verbose
	fitness, path, inst, stats = None, None, None, None

	with _stage('load', timings, verbose):
		img = load_gray(input)
		os.makedirs(out_dir, exist_ok=True)

	with _stage('contour', timings, verbose):
		contours = extract_contours(img, cfg.fdog_params())
		save_binary(contours, os.path.join(out_dir, 'contour.png'))

	with _stage('trace', timings, verbose):
		segments = trace_image(contours, cfg.trace_params())
		write_segments(segments, img.width, img.height, os.path.join(out_dir,
			'segments.json'))

	if segments:
		with _stage('plan', timings, verbose):
			inst = build_instance(segments, cfg.home, cfg.cost_lift, img.width,
				img.height)
			path, stats = solve(inst, cfg.method, cfg.ga_config())
			fitness = evaluate(inst, path)

		with _stage('export', timings, verbose):
			export_path(path, inst, os.path.join(out_dir, 'path.json'))
			if stats.logger is not None:
				stats.logger.save(os.path.join(out_dir, 'ga_log.tsv'))
				plot_convergence(stats, os.path.join(out_dir,
					'convergence.png'))
	elif verbose:
		print("No segments were traced; skipping planning.")

	with _stage('render', timings, verbose):
		svg = os.path.join(out_dir, 'drawing.svg')
		if path is None:
			render_svg(DrawingPath(()), None, svg, size=(img.width, img.height),
				home=cfg.home)
		else:
			render_svg(path, inst, svg)

	report = {
		'input': str(input),
		'width': img.width,
		'height': img.height,
		'n_segments': len(segments),
		'method': cfg.method,
		'seed': cfg.seed,
		'fitness': None if fitness is None else asdict(fitness),
		'generations': None if stats is None else stats.generations,
		'lk_invocations': None if stats is None else stats.lk_invocations,
		'timings': timings
	}

	if not segments:
		report['note'] = "zero segments traced; no path planned"

	with _stage('report', timings, verbose):
		with open(os.path.join(out_dir, 'report.json'), "w") as outfile:
			json.dump(report, outfile, indent=4)

	return report
