"""Co-occurrence statistics and social network extraction."""

from ._snmine import *  # noqa: F401,F403
from ._snmine import __doc__  # noqa: F401
