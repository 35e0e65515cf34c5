"""Numerical laboratory for resonant energy transfer in the quintic
derivative nonlinear Schrodinger equation on the torus.

Model hierarchy, coarse to fine: integer cluster algebra (resonance),
planar Hamiltonian reduction (reduced), four-mode truncation (toy) and the
full pseudospectral PDE (spectral), with cross-model experiments (harness).
"""

__version__ = "0.1.0"

from .resonance import ResonantQuad, build_quad  # noqa: F401
