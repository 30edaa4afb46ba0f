"""Magnetic Weyl calculus on discretized phase space."""
from .phasespace import PhaseGrid, PhasePoint, sigma

__version__ = "0.1.0"
__all__ = ["PhaseGrid", "PhasePoint", "sigma"]
