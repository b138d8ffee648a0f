"""Bell-test simulation, analysis and finite-model checks."""

from ._core import *  # noqa: F401,F403
from ._core import BellError, __version__, sign_convention  # noqa: F401
