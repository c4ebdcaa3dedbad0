# drawpath
# Author: Jacob Schreiber

from .contour import extract_contours
from .gtsp import build_instance
from .gtsp import evaluate
from .rkga import solve
from .trace import trace_image

__version__ = '0.1.0'
