"""Two-firm marketing game over a social network."""

from ._netduopoly import *  # noqa: F401,F403
from ._netduopoly import __version__  # noqa: F401
