"""Adiabatic elimination of a fast emitter ensemble in a driven cavity.

Everything lives in the compiled core; this package re-exports it.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__, __version__  # noqa: F401
