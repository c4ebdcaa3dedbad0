import json

import numpy
import pytest

from numpy.testing import assert_array_equal
from numpy.testing import assert_allclose
from PIL import Image

from drawpath.io import BinaryImage
from drawpath.io import GrayImage
from drawpath.io import binarize
from drawpath.io import load_gray
from drawpath.io import read_segments
from drawpath.io import save_binary
from drawpath.io import save_gray
from drawpath.io import write_segments
from drawpath.trace import LineSegment


def _write(tmp_path, array, name, mode=None):
	filename = str(tmp_path / name)
	image = Image.fromarray(numpy.asarray(array, dtype='uint8'))
	if mode is not None:
		image = image.convert(mode)
	image.save(filename)
	return filename


def test_load_white_and_black(tmp_path):
	white = load_gray(_write(tmp_path, [[255]], "white.png"))
	black = load_gray(_write(tmp_path, [[0]], "black.png"))

	assert (white.width, white.height) == (1, 1)
	assert_array_equal(white.data, [[1.0]])
	assert_array_equal(black.data, [[0.0]])


def test_load_color_uses_luminance(tmp_path):
	red = load_gray(_write(tmp_path, [[[255, 0, 0]]], "red.png"))
	assert red.data[0, 0] == pytest.approx(0.2126, abs=0.001)


def test_load_transparent_is_paper(tmp_path):
	img = load_gray(_write(tmp_path, [[[0, 0, 0, 0], [0, 0, 0, 255]]],
		"alpha.png"))
	assert_allclose(img.data, [[1.0, 0.0]])


def test_load_pgm(tmp_path):
	data = numpy.array([[0, 128], [255, 64]])
	img = load_gray(_write(tmp_path, data, "small.pgm"))
	assert_allclose(img.data, data / 255.)


def test_load_unsupported_format(tmp_path):
	with pytest.raises(ValueError, match="Unsupported"):
		load_gray(_write(tmp_path, [[0, 255]], "image.bmp"))


def test_load_missing_file(tmp_path):
	with pytest.raises(OSError):
		load_gray(str(tmp_path / "missing.png"))


@pytest.mark.parametrize("name", ["round.png", "round.pgm"])
def test_save_load_round_trip(tmp_path, name):
	rng = numpy.random.default_rng(0)
	img = GrayImage(rng.random((7, 9)))

	filename = str(tmp_path / name)
	save_gray(img, filename)
	loaded = load_gray(filename)

	assert (loaded.width, loaded.height) == (9, 7)
	assert numpy.abs(loaded.data - img.data).max() <= 1 / 255.


def test_gray_image_rejects_out_of_range():
	with pytest.raises(ValueError):
		GrayImage(numpy.array([[1.5]]))

	with pytest.raises(ValueError):
		GrayImage(numpy.zeros(4))


def test_binarize():
	assert not binarize(GrayImage(numpy.ones((3, 3)))).ink.any()
	assert binarize(GrayImage(numpy.zeros((3, 3)))).ink.all()
	assert not binarize(GrayImage(numpy.array([[0.5]])), 0.5).ink[0, 0]
	assert binarize(GrayImage(numpy.array([[0.4999]])), 0.5).ink[0, 0]


def test_binarize_idempotent():
	rng = numpy.random.default_rng(1)
	mask = binarize(GrayImage(rng.random((10, 10))), 0.3)

	again = binarize(GrayImage(numpy.where(mask.ink, 0.0, 1.0)), 0.3)
	assert again == mask


def test_save_binary_writes_ink_black(tmp_path):
	filename = str(tmp_path / "mask.png")
	save_binary(BinaryImage(numpy.array([[True, False]])), filename)
	assert_allclose(load_gray(filename).data, [[0.0, 1.0]])


def test_segments_round_trip(tmp_path):
	segments = [LineSegment(0, ((0, 0), (1, 1), (2, 1))),
		LineSegment(1, ((5, 5), (5, 6), (6, 6), (6, 5), (5, 5)))]

	filename = str(tmp_path / "segments.json")
	write_segments(segments, 10, 8, filename)
	loaded, width, height = read_segments(filename)

	assert loaded == segments
	assert (width, height) == (10, 8)


def test_read_malformed_segments(tmp_path):
	filename = str(tmp_path / "bad.json")
	with open(filename, "w") as outfile:
		json.dump({'width': 3, 'segments': []}, outfile)

	with pytest.raises(ValueError, match="Malformed"):
		read_segments(filename)
