"""Low-complexity neural vocoder engine."""

from ._frgn import *  # noqa: F401,F403
from ._frgn import __doc__  # noqa: F401
