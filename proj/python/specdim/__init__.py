"""FFT amplitude-spectrum reduction of dense embeddings with exact search and evaluation."""

from ._specdim import *  # noqa: F401,F403

__version__ = "0.1.0"
