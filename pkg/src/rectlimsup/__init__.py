"""Measure laboratory for limsup sets of rectangles."""
from .exceptions import SizeError, UseStatisticalError, ValidationError, WitnessError

__version__ = "0.1.0"
