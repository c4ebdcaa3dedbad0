import os
import sys

import numpy
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from PIL import Image
from PIL import ImageDraw

from drawpath.rkga import GaConfig


@pytest.fixture
def small_cfg():
	return GaConfig(population_size=20, elite_count=2, max_generations=15,
		stall_limit=8, seed=3)


@pytest.fixture
def sketch_png(tmp_path):
	"""A small dark-on-light drawing of a few crossing strokes."""

	image = Image.new('L', (64, 64), 255)
	draw = ImageDraw.Draw(image)
	draw.line([(8, 10), (56, 12)], fill=0, width=2)
	draw.line([(10, 50), (32, 8), (54, 52)], fill=0, width=2)
	draw.ellipse([20, 28, 44, 52], outline=0, width=2)

	filename = str(tmp_path / "sketch.png")
	image.save(filename)
	return filename


@pytest.fixture
def blank_png(tmp_path):
	filename = str(tmp_path / "blank.png")
	Image.fromarray(numpy.full((32, 32), 255, dtype='uint8')).save(filename)
	return filename
