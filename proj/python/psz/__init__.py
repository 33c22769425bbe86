"""Personal sound zone filter design and isolation metrics."""

from ._psz import *  # noqa: F401,F403
from ._psz import __doc__  # noqa: F401

__version__ = "0.1.0"
