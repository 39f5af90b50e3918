"""Population fluctuations in superradiant and conventional nanolaser LEDs."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
