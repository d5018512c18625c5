"""Vectorised master equations, spectra and trajectory simulation."""

from .analytic import analytic_single_qubit, single_qubit_generator, single_qubit_rapidities
from .generator import (
    VectorizedLiouvillian,
    build_liouvillian,
    iter_series,
    propagate,
    propagate_with_lambda_derivative,
    vectorize_dissipator,
    vectorize_unitary,
)
from .spectrum import LiouvillianSpectrum, spectrum, steady_state
from .sse import SSEConfig, SSEResult, sse_simulate

__all__ = [
    "LiouvillianSpectrum",
    "SSEConfig",
    "SSEResult",
    "VectorizedLiouvillian",
    "analytic_single_qubit",
    "build_liouvillian",
    "iter_series",
    "propagate",
    "propagate_with_lambda_derivative",
    "single_qubit_generator",
    "single_qubit_rapidities",
    "spectrum",
    "sse_simulate",
    "steady_state",
    "vectorize_dissipator",
    "vectorize_unitary",
]
