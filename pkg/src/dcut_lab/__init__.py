"""Disconnected cuts, homomorphisms to the reflexive 4-cycle, and the gadget
graphs used to show those problems hard."""

from .errors import *  # noqa: F401,F403
from .gadgets import *  # noqa: F401,F403
from .graph import *  # noqa: F401,F403
from .problems import *  # noqa: F401,F403
from .relational import *  # noqa: F401,F403

__version__ = "0.1.0"
