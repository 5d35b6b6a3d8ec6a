"""Pulsed type-II downconversion: joint spectra, Schmidt analysis,
twin-beam statistics, click-detector simulation and overlap fits."""

from ._pdcsim import *  # noqa: F401,F403
from ._pdcsim import __version__  # noqa: F401
