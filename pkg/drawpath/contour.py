# contour.py
# Author: Jacob Schreiber <jmschreiber91@gmail.com>

"""
This module contains the contour generation step: an Edge Tangent Flow
(ETF) field is built from the image gradient and smoothed, and then a
flow-based Difference-of-Gaussians (FDoG) filter is applied. The DoG is
taken across the flow at every pixel and those responses are accumulated
along the flow, which keeps coherent lines and suppresses isolated specks.
"""

import math
import numpy

from dataclasses import dataclass
from numba import njit
from scipy import ndimage

from .io import GrayImage
from .io import binarize


@dataclass(frozen=True)
class FdogParams():
	"""Parameters of the ETF construction and the FDoG filter.


	Parameters
	----------
	sigma_c: float, optional
		The standard deviation, in pixels, of the center Gaussian of the DoG
		taken across the flow. Default is 1.0.

	rho: float, optional
		The ratio of the surround Gaussian's standard deviation to sigma_c.
		Must be larger than 1. Default is 1.6.

	sigma_m: float, optional
		The standard deviation, in pixels, of the Gaussian that weights
		responses along the flow. Default is 3.0.

	line_length: int, optional
		The number of one-pixel steps taken along the flow in each direction
		when accumulating responses. 0 disables accumulation. Default is 8.

	tau: float, optional
		The threshold applied to the normalized FDoG response. Default is 0.3.

	etf_radius: int, optional
		The radius, in pixels, of the ETF smoothing neighborhood. Default is 5.

	etf_iterations: int, optional
		The number of ETF smoothing passes. Default is 3.
	"""

	sigma_c: float = 1.0
	rho: float = 1.6
	sigma_m: float = 3.0
	line_length: int = 8
	tau: float = 0.3
	etf_radius: int = 5
	etf_iterations: int = 3

	def __post_init__(self):
		if self.sigma_c <= 0 or self.sigma_m <= 0:
			raise ValueError("sigma_c and sigma_m must be positive.")
		if self.rho <= 1:
			raise ValueError("rho must be larger than 1, got {}".format(
				self.rho))
		if not 0 <= self.tau <= 1:
			raise ValueError("tau must lie in [0, 1], got {}".format(self.tau))
		if self.etf_iterations < 1:
			raise ValueError("etf_iterations must be at least 1.")
		if self.etf_radius < 1:
			raise ValueError("etf_radius must be at least 1.")
		if self.line_length < 0:
			raise ValueError("line_length must be non-negative.")


@dataclass(frozen=True, eq=False)
class EtfField():
	"""A per-pixel field of unit tangent vectors.

	Vectors are stored as two arrays of shape (height, width) holding the x
	and y components. Every vector has unit length or is exactly (0, 0).
	"""

	vx: numpy.ndarray
	vy: numpy.ndarray

	@property
	def width(self):
		return self.vx.shape[1]

	@property
	def height(self):
		return self.vx.shape[0]

	def __eq__(self, other):
		return (isinstance(other, EtfField) and
			numpy.array_equal(self.vx, other.vx) and
			numpy.array_equal(self.vy, other.vy))


@njit(cache=True, nogil=True)
def _smooth_etf(vx, vy, mag, radius):
	"""One magnitude- and direction-weighted smoothing pass of the flow.

	A pixel without a tangent of its own aligns its neighbours to the
	tangent of its strongest neighbour, so thin lines whose center row has
	no gradient still receive a flow.
	"""

	h, w = vx.shape
	ox = numpy.zeros((h, w))
	oy = numpy.zeros((h, w))
	r2 = radius * radius

	for y in range(h):
		for x in range(w):
			rx, ry = vx[y, x], vy[y, x]

			if rx == 0 and ry == 0:
				best = 0.0
				for dy in range(-radius, radius+1):
					yy = y + dy
					if yy < 0 or yy >= h:
						continue

					for dx in range(-radius, radius+1):
						xx = x + dx
						if xx < 0 or xx >= w or dx*dx + dy*dy > r2:
							continue

						if (vx[yy, xx] != 0 or vy[yy, xx] != 0) and mag[yy, xx] > best:
							best = mag[yy, xx]
							rx, ry = vx[yy, xx], vy[yy, xx]

				if best == 0:
					continue

			sx, sy = 0.0, 0.0
			for dy in range(-radius, radius+1):
				yy = y + dy
				if yy < 0 or yy >= h:
					continue

				for dx in range(-radius, radius+1):
					xx = x + dx
					if xx < 0 or xx >= w or dx*dx + dy*dy > r2:
						continue

					ux, uy = vx[yy, xx], vy[yy, xx]
					if ux == 0 and uy == 0:
						continue

					dot = rx * ux + ry * uy
					phi = 1.0 if dot > 0 else -1.0
					wm = (1.0 + math.tanh(mag[yy, xx] - mag[y, x])) / 2.0
					wd = abs(dot)

					sx += phi * ux * wm * wd
					sy += phi * uy * wm * wd

			norm = math.sqrt(sx * sx + sy * sy)
			if norm > 1e-12:
				ox[y, x] = sx / norm
				oy[y, x] = sy / norm

	return ox, oy


@njit(cache=True, nogil=True)
def _bilinear(img, x, y):
	h, w = img.shape
	x = min(max(x, 0.0), w - 1.0)
	y = min(max(y, 0.0), h - 1.0)

	x0, y0 = int(math.floor(x)), int(math.floor(y))
	x1, y1 = min(x0 + 1, w - 1), min(y0 + 1, h - 1)
	fx, fy = x - x0, y - y0

	top = img[y0, x0] * (1 - fx) + img[y0, x1] * fx
	bottom = img[y1, x0] * (1 - fx) + img[y1, x1] * fx
	return top * (1 - fy) + bottom * fy


@njit(cache=True, nogil=True)
def _fdog(img, vx, vy, dog, gm):
	h, w = img.shape
	half = (dog.shape[0] - 1) // 2
	length = gm.shape[0] - 1

	response = numpy.zeros((h, w))
	for y in range(h):
		for x in range(w):
			tx, ty = vx[y, x], vy[y, x]
			if tx == 0 and ty == 0:
				continue

			# perpendicular to the flow
			gx, gy = ty, -tx
			acc = 0.0
			for k in range(-half, half+1):
				acc += dog[k + half] * _bilinear(img, x + k * gx, y + k * gy)

			response[y, x] = acc

	accumulated = numpy.zeros((h, w))
	for y in range(h):
		for x in range(w):
			acc = gm[0] * response[y, x]
			weight = gm[0]

			if vx[y, x] != 0 or vy[y, x] != 0:
				for sign in (1.0, -1.0):
					px, py = float(x), float(y)
					dx, dy = sign * vx[y, x], sign * vy[y, x]

					for u in range(1, length+1):
						px += dx
						py += dy
						ix = int(math.floor(px + 0.5))
						iy = int(math.floor(py + 0.5))
						if ix < 0 or ix >= w or iy < 0 or iy >= h:
							break

						tx, ty = vx[iy, ix], vy[iy, ix]
						if tx == 0 and ty == 0:
							break

						acc += gm[u] * response[iy, ix]
						weight += gm[u]

						if tx * dx + ty * dy < 0:
							tx, ty = -tx, -ty
						dx, dy = tx, ty

			accumulated[y, x] = acc / weight

	return accumulated


def _gaussian(sigma, half):
	x = numpy.arange(-half, half+1, dtype='float64')
	g = numpy.exp(-x ** 2 / (2 * sigma ** 2))
	return g / g.sum()


def dog_kernel(params):
	"""The 1D DoG kernel applied across the flow.

	Both Gaussians are sampled on the support of the wider one, three
	surround standard deviations to each side, and normalized to unit sum
	so that the kernel sums to zero.
	"""

	sigma_s = params.rho * params.sigma_c
	half = int(math.ceil(3 * sigma_s))
	return _gaussian(params.sigma_c, half) - _gaussian(sigma_s, half)


def compute_etf(img, params=FdogParams()):
	"""Construct a smoothed Edge Tangent Flow field from an image.

	The initial tangent at each pixel is the Sobel gradient rotated by 90
	degrees and normalized, or (0, 0) where the gradient vanishes. The
	field is then smoothed `etf_iterations` times, each neighbour within
	`etf_radius` contributing in proportion to how much stronger its
	gradient is and how well its tangent aligns with the center tangent.


	Parameters
	----------
	img: drawpath.io.GrayImage
		The image to build the flow from. Must be nonempty.

	params: drawpath.contour.FdogParams, optional
		The filter parameters.


	Returns
	-------
	etf: drawpath.contour.EtfField
		The smoothed tangent field.
	"""

	if img.width == 0 or img.height == 0:
		raise ValueError("Cannot compute the flow of an empty image.")

	data = img.data
	gx = ndimage.sobel(data, axis=1)
	gy = ndimage.sobel(data, axis=0)
	mag = numpy.sqrt(gx ** 2 + gy ** 2)

	vx = numpy.zeros_like(data)
	vy = numpy.zeros_like(data)
	nonzero = mag > 0
	vx[nonzero] = -gy[nonzero] / mag[nonzero]
	vy[nonzero] = gx[nonzero] / mag[nonzero]

	if mag.max() > 0:
		mag = mag / mag.max()

	for _ in range(params.etf_iterations):
		vx, vy = _smooth_etf(vx, vy, mag, params.etf_radius)

	return EtfField(vx, vy)


def fdog(img, etf, params=FdogParams()):
	"""Apply the flow-based DoG filter to an image.

	At every pixel a 1D DoG is sampled, with bilinear interpolation, along
	the line perpendicular to the flow. Those responses are then averaged
	with Gaussian(sigma_m) weights along the streamline through the pixel,
	stepping one pixel at a time for up to `line_length` steps in each
	direction and stopping at the border or at a pixel without flow.

	Negative accumulated responses H are mapped through 1 + tanh(H) and
	stretched so the strongest line is 0; non-negative responses are 1.
	Thresholding the result with `tau` gives the contour mask.


	Parameters
	----------
	img: drawpath.io.GrayImage
		The image to filter.

	etf: drawpath.contour.EtfField
		The flow field of the image. Must have the same dimensions.

	params: drawpath.contour.FdogParams, optional
		The filter parameters.


	Returns
	-------
	response: drawpath.io.GrayImage
		The normalized filter response where 0 marks the strongest lines.
	"""

	if (img.width, img.height) != (etf.width, etf.height):
		raise ValueError("Image is {}x{} but the flow field is {}x{}.".format(
			img.width, img.height, etf.width, etf.height))

	steps = numpy.arange(params.line_length + 1, dtype='float64')
	gm = numpy.exp(-steps ** 2 / (2 * params.sigma_m ** 2))

	h = _fdog(img.data, etf.vx, etf.vy, dog_kernel(params), gm)

	response = numpy.ones_like(h)
	negative = h < 0
	response[negative] = 1 + numpy.tanh(h[negative])

	low = response.min() if response.size > 0 else 1.0
	if low < 1 - 1e-9:
		response = (response - low) / (1 - low)
	else:
		response[:] = 1.0

	return GrayImage(numpy.clip(response, 0, 1))


def extract_contours(img, params=FdogParams()):
	"""Run the full contour generation: ETF, FDoG and thresholding at tau."""

	etf = compute_etf(img, params)
	return binarize(fdog(img, etf, params), params.tau)
