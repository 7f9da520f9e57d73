"""Python access to the dimrate C++ core."""

from ._dimrate import *  # noqa: F401,F403
from ._dimrate import __version__  # noqa: F401
