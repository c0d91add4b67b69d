"""Toda flows, spectral measures and kernels on the complex Kepler quadric."""

from ._core import *  # noqa: F401,F403
from ._core import Error, InvalidArgument, NumericError

__all__ = [name for name in dir() if not name.startswith("_")]
