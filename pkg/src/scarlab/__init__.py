"""Numerical laboratory for quantum many-body scars: sector bases, scarred
spin-chain models, exact-diagonalization diagnostics, a convolutional
quantum classifier, quasiparticle effective models, quench dynamics and a
simulated error-mitigation pipeline."""

__version__ = "0.1.0"
