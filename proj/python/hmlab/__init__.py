"""Radial harmonic analysis and multiplier dynamics on model manifolds."""

try:
    from ._hmlab import *  # noqa: F401,F403
except ImportError:  # in-tree builds put the extension on sys.path directly
    from _hmlab import *  # noqa: F401,F403
