"""End-to-end probe QFI: build the model, propagate, reduce to the probe.

Two experiment records are supported:

* :class:`TwoQubitExperiment`: a collapsing qubit probed by a second qubit
  (energies in units of ``omega0``);
* :class:`IsingExperiment`: an open transverse-field Ising chain whose last
  site is coupled to a probe qubit (energies in units of ``J``).

In both, the probe is the last tensor factor and the system starts in a
Gibbs state.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from ..errors import InvalidArgumentError
from ..linalg import partial_trace
from ..liouville import (
    VectorizedLiouvillian,
    iter_series,
    propagate,
    propagate_with_lambda_derivative,
)
from ..liouville.generator import vectorize_dissipator, vectorize_unitary
from ..model import (
    SIGMA_X,
    BlochState,
    DissipatorSpec,
    IsingChainSpec,
    NoiseSpec,
    ProbeCouplingSpec,
    TwoQubitProbeModel,
    collapse_dissipator_spec,
    initial_product_state,
    ising_hamiltonian,
    ising_probe_hamiltonian,
    two_qubit_hamiltonian,
)
from .qfi import qfi_general, qfi_qubit, qfi_stack, qsnr


@dataclass(frozen=True)
class TwoQubitExperiment:
    omega0: float = 1.0
    omega_p: float = 0.3
    g: float = 0.2
    beta: float = 0.01

    units = "omega0"
    n_total = 2

    def hamiltonian(self):
        return two_qubit_hamiltonian(TwoQubitProbeModel(self.omega0, self.omega_p, self.g))

    def system_hamiltonian(self):
        return 0.5 * self.omega0 * SIGMA_X

    def dissipator(self):
        return DissipatorSpec(((1, 1, 1.0),))


@dataclass(frozen=True)
class IsingExperiment:
    n_sites: int = 4
    h: float = 1.0
    j: float = 1.0
    h_p: float = 0.5
    j_p: float = 0.5
    beta: float = 0.1
    noise: Literal["local", "correlated"] = "local"
    rc_over_a: float = 2.0
    sites: tuple = None  # dissipated chain sites, all when None

    units = "J"

    @property
    def n_total(self):
        return self.n_sites + 1

    @property
    def chain(self):
        return IsingChainSpec(self.n_sites, self.h, self.j)

    def hamiltonian(self):
        return ising_probe_hamiltonian(self.chain, ProbeCouplingSpec(self.h_p, self.j_p))

    def system_hamiltonian(self):
        return ising_hamiltonian(self.chain)

    def dissipator(self):
        return collapse_dissipator_spec(NoiseSpec(self.noise, 0.0, self.rc_over_a), self.n_sites,
                                       self.sites)


@dataclass(frozen=True)
class QFIRecord:
    lam: float
    t: float
    g_value: float
    q_value: float
    method: Literal["qubit_formula", "general_formula"] = "qubit_formula"
    derivative_source: Literal["exact_sensitivity", "finite_difference"] = "exact_sensitivity"


@lru_cache(maxsize=32)
def _generator_parts(experiment):
    lu = vectorize_unitary(experiment.hamiltonian(), sparse=True)
    ld = vectorize_dissipator(experiment.dissipator(), experiment.n_total, sparse=True)
    return lu, ld


def liouvillian(experiment, lam):
    lu, ld = _generator_parts(experiment)
    return VectorizedLiouvillian(lu, ld, lam)


def initial_state(experiment, probe):
    return initial_product_state(experiment.system_hamiltonian(), experiment.beta, probe)


def reduce_to_probe(rho, n_total):
    return partial_trace(rho, [2] * n_total, keep=[n_total - 1])


def _reduce_stack(rhos):
    k, d, _ = rhos.shape
    return np.einsum("kiaib->kab", rhos.reshape(k, d // 2, 2, d // 2, 2))


def probe_state(experiment, lam, t, probe, method="auto"):
    """Reduced probe state and its exact ``lam``-derivative at time ``t``."""
    if t < 0:
        raise InvalidArgumentError("time must be >= 0")
    liou = liouvillian(experiment, lam)
    rho, drho = propagate_with_lambda_derivative(
        liou, initial_state(experiment, probe), t, method=method
    )
    n = experiment.n_total
    return reduce_to_probe(rho, n), reduce_to_probe(drho, n)


def fd_step(lam):
    return max(1e-8, 1e-3 * lam)


def probe_state_fd(experiment, lam, t, probe, step=None, method="auto"):
    """Probe state with a central finite-difference ``lam``-derivative."""
    step = fd_step(lam) if step is None else step
    rho0 = initial_state(experiment, probe)
    n = experiment.n_total

    def at(x):
        return reduce_to_probe(propagate(liouvillian(experiment, x), rho0, t, method=method), n)

    lo = max(lam - step, 0.0)
    hi = lam + step
    return at(lam), (at(hi) - at(lo)) / (hi - lo)


def probe_qfi_at(experiment, lam, t, probe=BlochState(np.pi, 0.0), method="auto",
                 derivative="exact_sensitivity", formula="qubit_formula"):
    """QFI of the probe about ``lam`` after evolving for ``t``."""
    if derivative == "exact_sensitivity":
        rho, drho = probe_state(experiment, lam, t, probe, method=method)
    elif derivative == "finite_difference":
        rho, drho = probe_state_fd(experiment, lam, t, probe, method=method)
    else:
        raise InvalidArgumentError(f"unknown derivative source {derivative!r}")
    if formula == "qubit_formula":
        g = qfi_qubit(rho, drho)
    elif formula == "general_formula":
        g = qfi_general(rho, drho)
    else:
        raise InvalidArgumentError(f"unknown QFI formula {formula!r}")
    return QFIRecord(lam, t, g, qsnr(lam, g), formula, derivative)


def qfi_time_series(experiment, lam, probe, t_max, num):
    """QFI on ``linspace(0, t_max, num)``, via the exponential action on the
    sensitivity-augmented state."""
    liou = liouvillian(experiment, lam)
    rho0 = initial_state(experiment, probe)
    times, values = [], []
    for ts, rhos, drhos in iter_series(liou, rho0, t_max, num, derivative=True):
        times.append(ts)
        values.append(qfi_stack(_reduce_stack(rhos), _reduce_stack(drhos)))
    return np.concatenate(times), np.concatenate(values)


def find_t_opt(experiment, lam, probe=BlochState(np.pi, 0.0), t_window=(0.0, 1000.0),
               dt=0.05, n_refine=3, fine=100):
    """Time in ``t_window`` maximising the QFI at fixed ``lam``.

    A uniform scan with spacing ``dt`` locates the best ``n_refine`` local
    maxima. Each is then resampled ``fine`` times more densely over the two
    neighbouring grid cells, starting from the state stored at the left
    neighbour. Returns ``(t_opt, g_max)``.
    """
    t_lo, t_hi = t_window
    if not 0 <= t_lo < t_hi:
        raise InvalidArgumentError(f"invalid time window {t_window}")
    num = int(np.ceil(t_hi / dt)) + 1
    liou = liouvillian(experiment, lam)
    rho0 = initial_state(experiment, probe)

    # candidates: (g, t_peak, t_left, rho_left, drho_left)
    candidates = []
    prev = None  # (t, g, rho, drho) of the last two points of the previous chunk
    for ts, rhos, drhos in iter_series(liou, rho0, t_hi, num, derivative=True):
        gs = qfi_stack(_reduce_stack(rhos), _reduce_stack(drhos))
        if prev is not None:
            ts = np.concatenate([prev[0], ts])
            gs = np.concatenate([prev[1], gs])
            rhos = np.concatenate([prev[2], rhos])
            drhos = np.concatenate([prev[3], drhos])
        for k in range(len(gs) - 1):
            if ts[k] < t_lo or (k == 0 and prev is not None):
                continue
            left_ok = k == 0 or gs[k] >= gs[k - 1]
            if left_ok and gs[k] >= gs[k + 1]:
                kl = max(k - 1, 0)
                candidates.append((gs[k], ts[k], ts[kl], rhos[kl], drhos[kl]))
        candidates = sorted(candidates, key=lambda c: -c[0])[:n_refine]
        prev = (ts[-2:], gs[-2:], rhos[-2:], drhos[-2:])
    # the last grid point can be a maximum on the window edge
    if prev is not None and prev[1][-1] >= prev[1][-2]:
        candidates.append((prev[1][-1], prev[0][-1], prev[0][-2], prev[2][-2], prev[3][-2]))
        candidates = sorted(candidates, key=lambda c: -c[0])[:n_refine]
    if not candidates:
        raise RuntimeError("no QFI maximum found inside the time window")

    best_g, best_t = candidates[0][0], candidates[0][1]
    for g_peak, t_peak, t_left, rho_l, drho_l in candidates:
        span = min(t_peak + dt, t_hi) - t_left
        if span <= 0:
            continue
        n_fine = max(int(round(fine * span / dt)), 2) + 1
        for ts, rhos, drhos in iter_series(liou, rho_l, span, n_fine, derivative=True,
                                           drho0=drho_l, t0=t_left):
            gs = qfi_stack(_reduce_stack(rhos), _reduce_stack(drhos))
            gs = np.where(ts >= t_lo, gs, -np.inf)
            k = int(np.argmax(gs))
            if gs[k] > best_g:
                best_g, best_t = gs[k], ts[k]
    return float(best_t), float(best_g)
