"""Bell-inequality toolkit: postselection-sharpened bounds, thresholds,
detector models, and causal-structure checks."""

from bellpost._core import *  # noqa: F401,F403
from bellpost._core import __doc__  # noqa: F401

__version__ = "0.1.0"
