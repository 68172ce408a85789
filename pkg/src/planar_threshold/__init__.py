"""Circuit-level threshold simulation of the planar surface code.

Staged multi-target-CNOT syndrome extraction under single-parameter
circuit noise, decoded with exact minimum-weight perfect matching.
"""

from .lattice import Kind, PlanarCodeLayout, build_planar_code, logical_operator, measurement_schedule
from .montecarlo import BatchResult, run_batch, run_grid
from .noise import NoiseParams
from .scaling import ThresholdEstimate, estimate_threshold

__all__ = [
    "BatchResult",
    "Kind",
    "NoiseParams",
    "PlanarCodeLayout",
    "ThresholdEstimate",
    "build_planar_code",
    "estimate_threshold",
    "logical_operator",
    "measurement_schedule",
    "run_batch",
    "run_grid",
]
