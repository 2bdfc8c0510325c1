"""Discrete-time quantum walk simulator with continuum oracles.

A split-step walk on an odd-sized periodic square lattice whose coin
angles vary in space.  Slowly varying profiles trap wave packets in
harmonic-oscillator-like orbits; sharp walls bind topological edge and
corner modes.  The `continuum` module carries the independent
Dirac/Schrodinger references the lattice results are checked against.
"""

__version__ = "0.1.0"

from .config import ConfigError, ExperimentConfig, parse_config
from .evolution import DynamicsSpec, band_filter, run_dynamics
from .lattice import LatticeSpec
from .operators import StepOperator1D, StepOperator2D
from .profiles import (Constant, DomainWall, LinearSaturated, parse_angle,
                       parse_profile)
from .spectral import (bulk_bands, commensurate_grid, near_unity_states,
                       quasi_energies, spectrum_scan)

__all__ = [
    "__version__",
    "ConfigError", "ExperimentConfig", "parse_config",
    "DynamicsSpec", "band_filter", "run_dynamics",
    "LatticeSpec",
    "StepOperator1D", "StepOperator2D",
    "Constant", "DomainWall", "LinearSaturated",
    "parse_angle", "parse_profile",
    "bulk_bands", "commensurate_grid", "near_unity_states",
    "quasi_energies", "spectrum_scan",
]
