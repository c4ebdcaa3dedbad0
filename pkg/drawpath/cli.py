# cli.py
# Author: Jacob Schreiber <jmschreiber91@gmail.com>

"""
This module contains the `drawpath` command-line tool. Every subcommand
accepts a JSON configuration file with `-c` and one flag per relevant
setting; a flag given on the command line wins over the file, which wins
over the built-in default.

Exit codes are 0 on success, 1 when an input cannot be read or processed
and 2 when the configuration is invalid.
"""

import sys
import argparse

from dataclasses import fields

from . import __version__
from .bench import bench
from .bench import benchmark_table
from .bench import synthetic_suite
from .bench import write_benchmark_csv
from .config import ConfigError
from .config import PipelineConfig
from .config import load_config
from .contour import FdogParams
from .contour import extract_contours
from .export import export_path
from .export import import_path
from .export import render_svg
from .gtsp import build_instance
from .gtsp import evaluate
from .io import binarize
from .io import load_gray
from .io import read_segments
from .io import save_binary
from .io import write_segments
from .pipeline import PipelineError
from .pipeline import run_pipeline
from .rkga import GaConfig
from .rkga import METHODS
from .rkga import solve
from .trace import TraceParams
from .trace import trace_image


_FDOG_KEYS = [f.name for f in fields(FdogParams)]
_TRACE_KEYS = [f.name for f in fields(TraceParams)]
_GA_KEYS = [f.name for f in fields(GaConfig) if f.name not in ('use_lk',
	'verbose', 'target_fitness')]

_DEFAULTS = {f.name: f.default for f in fields(PipelineConfig)}


def _point(value):
	try:
		x, y = (float(v) for v in value.split(","))
	except ValueError:
		raise argparse.ArgumentTypeError("expected x,y but got '{}'".format(
			value))
	return x, y


def _add_flags(parser, keys):
	for key in keys:
		default = _DEFAULTS[key]
		flag = "--" + key.replace("_", "-")

		if key == 'home':
			parser.add_argument(flag, type=_point, help="The home point as x,y.")
		elif key == 'method':
			parser.add_argument(flag, choices=METHODS,
				help="The planning method.")
		else:
			parser.add_argument(flag, type=type(default),
				help="Default is {}.".format(default))


def _add_common(parser):
	parser.add_argument("-c", "--config", help="A JSON configuration file.")
	parser.add_argument("-v", "--verbose", action="store_const", const=True,
		help="Print progress.")


def _resolve(args):
	cfg = load_config(args.config) if args.config else PipelineConfig()
	return cfg.merge({key: getattr(args, key, None) for key in _DEFAULTS})


def _contour(args, cfg):
	save_binary(extract_contours(load_gray(args.input), cfg.fdog_params()),
		args.output)


def _trace(args, cfg):
	img = binarize(load_gray(args.input), cfg.threshold)
	segments = trace_image(img, cfg.trace_params())
	write_segments(segments, img.width, img.height, args.output)

	if cfg.verbose:
		print("Traced {} segments.".format(len(segments)))


def _plan(args, cfg):
	segments, width, height = read_segments(args.input)
	inst = build_instance(segments, cfg.home, cfg.cost_lift, width, height)

	path, stats = solve(inst, cfg.method, cfg.ga_config())
	export_path(path, inst, args.output)

	if args.log is not None and stats.logger is not None:
		stats.logger.save(args.log)

	if cfg.verbose:
		report = evaluate(inst, path)
		print("Fitness: {:.4f} ({} lifts)".format(report.v_fitness,
			report.n_lift))


def _render(args, cfg):
	inst, path = import_path(args.input)
	render_svg(path, inst, args.output)


def _bench(args, cfg):
	if args.instances:
		instances = []
		for filename in args.instances:
			segments, width, height = read_segments(filename)
			instances.append((filename, build_instance(segments, cfg.home,
				cfg.cost_lift, width, height)))
	else:
		instances = synthetic_suite(seed=args.suite_seed, home=cfg.home,
			cost_lift=cfg.cost_lift)

	results = bench(instances, args.methods, trials=args.trials,
		base_seed=cfg.seed, cfg=cfg.ga_config(), n_jobs=args.bench_jobs,
		verbose=cfg.verbose)

	table = benchmark_table(results).round(2).to_string()
	if args.output:
		with open(args.output, "w") as outfile:
			outfile.write(table + "\n")
	else:
		print(table)

	if args.csv:
		write_benchmark_csv(results, args.csv)


def _pipeline(args, cfg):
	report = run_pipeline(cfg, args.input, args.output)
	if cfg.verbose:
		print("Traced {} segments.".format(report['n_segments']))


def build_parser():
	"""Construct the argument parser of the `drawpath` tool."""

	parser = argparse.ArgumentParser(prog="drawpath",
		description="Turn line drawings into optimized pen paths.")
	parser.add_argument("--version", action="version",
		version="%(prog)s {}".format(__version__))
	subparsers = parser.add_subparsers(dest="command", required=True)

	p = subparsers.add_parser("contour", help="Extract contours with FDoG.")
	p.add_argument("input", help="A PNG or PGM image.")
	p.add_argument("-o", "--output", required=True, help="The contour image.")
	_add_common(p)
	_add_flags(p, _FDOG_KEYS)
	p.set_defaults(func=_contour)

	p = subparsers.add_parser("trace", help="Trace a contour image.")
	p.add_argument("input", help="A binary contour image.")
	p.add_argument("-o", "--output", required=True, help="The segment file.")
	_add_common(p)
	_add_flags(p, ['threshold'] + _TRACE_KEYS)
	p.set_defaults(func=_trace)

	p = subparsers.add_parser("plan", help="Plan a drawing path.")
	p.add_argument("input", help="A segment file.")
	p.add_argument("-o", "--output", required=True, help="The path file.")
	p.add_argument("--log", help="Where to write the genetic algorithm log.")
	_add_common(p)
	_add_flags(p, ['method', 'home', 'cost_lift'] + _GA_KEYS)
	p.set_defaults(func=_plan)

	p = subparsers.add_parser("render", help="Render a path file as SVG.")
	p.add_argument("input", help="A path file.")
	p.add_argument("-o", "--output", required=True, help="The SVG file.")
	_add_common(p)
	p.set_defaults(func=_render)

	p = subparsers.add_parser("bench", help="Compare planning methods.")
	p.add_argument("--instances", nargs="+", help="Segment files to use "
		"instead of the synthetic suite.")
	p.add_argument("--methods", nargs="+", choices=METHODS,
		default=list(METHODS[1:]), help="The methods to compare with greedy.")
	p.add_argument("--trials", type=int, default=10,
		help="The number of seeded runs per cell. Default is 10.")
	p.add_argument("--suite-seed", type=int, default=0,
		help="The seed of the synthetic suite. Default is 0.")
	p.add_argument("--bench-jobs", type=int, default=1,
		help="The number of cells run at once. Default is 1.")
	p.add_argument("--csv", help="Where to write the results as CSV.")
	p.add_argument("-o", "--output", help="Where to write the table.")
	_add_common(p)
	_add_flags(p, ['home', 'cost_lift'] + _GA_KEYS)
	p.set_defaults(func=_bench)

	p = subparsers.add_parser("pipeline", help="Run every step on an image.")
	p.add_argument("input", help="A PNG or PGM image.")
	p.add_argument("-o", "--output", required=True,
		help="The output directory.")
	_add_common(p)
	_add_flags(p, [key for key in _DEFAULTS if key != 'verbose'])
	p.set_defaults(func=_pipeline)

	return parser


def main(argv=None):
	"""Run the `drawpath` tool and return its exit code."""

	args = build_parser().parse_args(argv)

	try:
		cfg = _resolve(args)
		args.func(args, cfg)
	except ConfigError as e:
		print("drawpath: configuration error: {}".format(e), file=sys.stderr)
		return 2
	except PipelineError as e:
		print("drawpath: {}".format(e), file=sys.stderr)
		return 2 if isinstance(e.__cause__, ConfigError) else 1
	except (OSError, ValueError, RuntimeError) as e:
		print("drawpath: {}".format(e), file=sys.stderr)
		return 1

	return 0
