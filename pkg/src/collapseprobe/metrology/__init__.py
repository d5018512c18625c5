"""Quantum Fisher information of the probe and the scans built on it."""

from .nelder_mead import NelderMeadResult, nelder_mead_max
from .optimize import OptimizationResult, optimize_t_theta
from .pipeline import (
    IsingExperiment,
    QFIRecord,
    TwoQubitExperiment,
    find_t_opt,
    initial_state,
    liouvillian,
    probe_qfi_at,
    probe_state,
    probe_state_fd,
    qfi_time_series,
)
from .qfi import cramer_rao_bound, qfi_general, qfi_qubit, qfi_stack, qsnr, sld
from .scans import (
    LAMBDA_INTERVALS,
    REFERENCE_T_OPT,
    ScanResult,
    TableCell,
    interval_grid,
    run_scan,
    table1,
)

__all__ = [
    "IsingExperiment",
    "LAMBDA_INTERVALS",
    "NelderMeadResult",
    "OptimizationResult",
    "QFIRecord",
    "REFERENCE_T_OPT",
    "ScanResult",
    "TableCell",
    "TwoQubitExperiment",
    "cramer_rao_bound",
    "find_t_opt",
    "initial_state",
    "interval_grid",
    "liouvillian",
    "nelder_mead_max",
    "optimize_t_theta",
    "probe_qfi_at",
    "probe_state",
    "probe_state_fd",
    "qfi_general",
    "qfi_qubit",
    "qfi_stack",
    "qfi_time_series",
    "qsnr",
    "run_scan",
    "sld",
    "table1",
]
