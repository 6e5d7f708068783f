"""Decoherence of single and entangled neutral kaons.

Density-matrix evolution under an effective-mass Hamiltonian with a
projector-built dissipator, strangeness coincidence probabilities and
asymmetries, entanglement measures of the evolved state, and chi-square
fits of the decoherence strength.
"""

from kaondec._core import *  # noqa: F401,F403

__version__ = "0.1.0"
