"""Transfer-operator estimation for 1-D maps.

Sampling of (noisy) logistic orbits and ensembles, histogram and kernel
density estimation with bias/variance upper bounds and optimal-bandwidth
selection, Ulam and KDE-conditional operator matrices, and stationary
densities by power iteration.
"""

from transferop._core import *  # noqa: F401,F403
from transferop._core import __version__  # noqa: F401
