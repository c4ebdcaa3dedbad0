# io.py
# Author: Jacob Schreiber <jmschreiber91@gmail.com>

"""
This module contains the file formats used by drawpath: loading raster
images into normalized grayscale arrays, writing them back out, turning
filter responses into binary ink masks, and reading and writing the segment
files that connect the tracing step to the path optimizer.
"""

import json
import numpy

from dataclasses import dataclass
from PIL import Image


_LUMINANCE = numpy.array([0.2126, 0.7152, 0.0722])
_SUPPORTED_FORMATS = 'PNG', 'PPM'


@dataclass(frozen=True, eq=False)
class GrayImage():
	"""A grayscale raster with intensities in [0, 1].

	Dark values are ink and light values are paper. The data is stored as a
	row-major array of shape (height, width).


	Parameters
	----------
	data: numpy.ndarray, shape=(height, width)
		The intensities of the image. Every value must lie in [0, 1].
	"""

	data: numpy.ndarray

	def __post_init__(self):
		data = numpy.asarray(self.data, dtype='float64')
		if data.ndim != 2:
			raise ValueError("Image data must be two dimensional, got shape "
				"{}".format(data.shape))

		if data.size > 0 and (data.min() < 0 or data.max() > 1):
			raise ValueError("Intensities must lie in [0, 1].")

		object.__setattr__(self, 'data', data)

	@property
	def width(self):
		return self.data.shape[1]

	@property
	def height(self):
		return self.data.shape[0]

	def __eq__(self, other):
		return isinstance(other, GrayImage) and numpy.array_equal(self.data,
			other.data)


@dataclass(frozen=True, eq=False)
class BinaryImage():
	"""A boolean raster where True marks ink.


	Parameters
	----------
	ink: numpy.ndarray, shape=(height, width)
		The ink mask of the image.
	"""

	ink: numpy.ndarray

	def __post_init__(self):
		ink = numpy.asarray(self.ink, dtype=bool)
		if ink.ndim != 2:
			raise ValueError("Ink mask must be two dimensional, got shape "
				"{}".format(ink.shape))

		object.__setattr__(self, 'ink', ink)

	@property
	def width(self):
		return self.ink.shape[1]

	@property
	def height(self):
		return self.ink.shape[0]

	def __eq__(self, other):
		return isinstance(other, BinaryImage) and numpy.array_equal(self.ink,
			other.ink)


def load_gray(path):
	"""Load a PNG or PGM image as a normalized grayscale image.

	Color images are converted using the Rec. 709 luminance weights and
	images with an alpha channel are composited onto a white page first.
	Integer images are scaled by the maximum of their bit depth so that
	white is 1.0 and black is 0.0.


	Parameters
	----------
	path: str
		The filename of the image to load.


	Returns
	-------
	img: drawpath.io.GrayImage
		The normalized grayscale image.
	"""

	with Image.open(path) as image:
		if image.format not in _SUPPORTED_FORMATS:
			raise ValueError("Unsupported image format '{}' for {}; expected "
				"PNG or PGM.".format(image.format, path))

		if image.width == 0 or image.height == 0:
			raise ValueError("Image {} has zero width or height.".format(path))

		image.load()
		mode = image.mode

		if mode in ('I;16', 'I;16B', 'I;16L'):
			data = numpy.asarray(image, dtype='float64') / 65535.
		elif mode == 'I':
			data = numpy.asarray(image, dtype='float64')
			data = data / max(data.max(), 1.)
		elif mode == 'F':
			data = numpy.clip(numpy.asarray(image, dtype='float64'), 0, 1)
		elif mode in ('1', 'L'):
			data = numpy.asarray(image.convert('L'), dtype='float64') / 255.
		else:
			rgba = numpy.asarray(image.convert('RGBA'), dtype='float64') / 255.
			alpha = rgba[:, :, 3:]
			rgb = rgba[:, :, :3] * alpha + (1 - alpha)
			data = rgb @ _LUMINANCE

	return GrayImage(numpy.clip(data, 0, 1))


def save_gray(img, path):
	"""Write a grayscale image as an 8-bit PNG or PGM.

	The output format is chosen by the file extension. Values are rounded to
	the nearest of the 256 levels, so a reload reproduces the image within
	1/255.


	Parameters
	----------
	img: drawpath.io.GrayImage
		The image to write.

	path: str
		The filename to write to.
	"""

	data = numpy.round(img.data * 255).astype('uint8')
	Image.fromarray(data).save(path)


def save_binary(img, path):
	"""Write a binary image with ink as black and paper as white."""

	data = numpy.where(img.ink, 0, 255).astype('uint8')
	Image.fromarray(data).save(path)


def binarize(img, threshold=0.5):
	"""Turn a grayscale image into an ink mask.

	A pixel is ink when its intensity is strictly below the threshold, so a
	pixel exactly at the threshold is paper.


	Parameters
	----------
	img: drawpath.io.GrayImage
		The image to threshold.

	threshold: float, optional
		The intensity below which a pixel is ink. Default is 0.5.


	Returns
	-------
	mask: drawpath.io.BinaryImage
		The ink mask.
	"""

	return BinaryImage(img.data < threshold)


def write_segments(segments, width, height, path):
	"""Write traced line segments to a JSON segment file.

	The file holds the image dimensions and one record per segment with its
	id and its ordered list of [x, y] pixel coordinates. This is the contract
	between tracing and path planning and round-trips losslessly.


	Parameters
	----------
	segments: list of drawpath.trace.LineSegment
		The segments to write.

	width: int
		The width of the image the segments were traced from.

	height: int
		The height of the image the segments were traced from.

	path: str
		The filename to write to.
	"""

	document = {
		'width': int(width),
		'height': int(height),
		'segments': [{'id': int(segment.id),
			'points': [[int(x), int(y)] for x, y in segment.points]}
				for segment in segments]
	}

	with open(path, "w") as outfile:
		json.dump(document, outfile, indent=1)


def read_segments(path):
	"""Read a segment file written by `write_segments`.


	Parameters
	----------
	path: str
		The filename of the segment file.


	Returns
	-------
	segments: list of drawpath.trace.LineSegment
		The segments in file order.

	width: int
		The width of the source image.

	height: int
		The height of the source image.
	"""

	from .trace import LineSegment

	with open(path, "r") as infile:
		document = json.load(infile)

	try:
		segments = [LineSegment(record['id'],
			tuple((int(x), int(y)) for x, y in record['points']))
				for record in document['segments']]
		width, height = int(document['width']), int(document['height'])
	except (KeyError, TypeError) as e:
		raise ValueError("Malformed segment file {}: {}".format(path, e)) from e

	return segments, width, height
