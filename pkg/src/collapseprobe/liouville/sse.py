"""Stochastic Schroedinger equation for a single collapsing qubit.

Each trajectory follows

    d|psi> = [-i H dt + sqrt(lam) (sz - <sz>) dW - (lam/2) (sz - <sz>)^2 dt] |psi>

integrated with Euler-Maruyama and renormalised after every step. Trajectory
``k`` draws its Wiener increments from a Philox stream keyed by
``(seed, k)``, so results do not depend on how trajectories are batched.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError
from ..model import PAULI, SIGMA_X, bloch_vector


@dataclass(frozen=True)
class SSEConfig:
    dt: float = 1e-3
    n_traj: int = 2000
    seed: int = 0
    batch: int = 500
    chunk_steps: int = 1000

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidArgumentError("dt must be positive")
        if self.n_traj < 1:
            raise InvalidArgumentError("n_traj must be >= 1")
        if self.seed < 0:
            raise InvalidArgumentError("seed must be a non-negative integer")


@dataclass(frozen=True)
class SSEResult:
    times: np.ndarray
    rho_mean: np.ndarray  # (n_samples, 2, 2)
    bloch_mean: np.ndarray  # (n_samples, 3)
    bloch_stderr: np.ndarray  # (n_samples, 3)
    final_bloch: np.ndarray  # (n_traj, 3), per-trajectory Bloch vector at the last sample


def trajectory_rng(seed, index):
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(ss))


def _step(psi, h, lam, dt, dw):
    # sigma_z = diag(-1, +1) acts as a sign on each amplitude
    p0 = np.abs(psi[:, 0]) ** 2
    p1 = np.abs(psi[:, 1]) ** 2
    mean_z = (p1 - p0) / (p0 + p1)
    a = np.stack([-1.0 - mean_z, 1.0 - mean_z], axis=1)
    drift = -1j * psi @ h.T - 0.5 * lam * a**2 * psi
    psi = psi + drift * dt + np.sqrt(lam) * a * psi * dw[:, None]
    return psi / np.linalg.norm(psi, axis=1, keepdims=True)


def sse_simulate(model, psi0, t_final, cfg, sample_times=None):
    """Ensemble average of ``cfg.n_traj`` trajectories.

    ``sample_times`` defaults to ten equally spaced times ending at
    ``t_final``; each is rounded to the nearest multiple of ``cfg.dt``.
    """
    psi0 = np.asarray(psi0, dtype=complex).ravel()
    if psi0.shape != (2,) or abs(np.linalg.norm(psi0) - 1) > 1e-10:
        raise InvalidArgumentError("psi0 must be a normalised qubit state vector")
    if cfg.dt * model.omega0 > 1e-2:
        raise InvalidArgumentError("time step too coarse: need dt * omega0 <= 1e-2")
    if sample_times is None:
        sample_times = np.linspace(0, t_final, 11)[1:]
    sample_steps = np.rint(np.asarray(sample_times, dtype=float) / cfg.dt).astype(int)
    if np.any(sample_steps < 0) or np.any(np.diff(sample_steps) <= 0):
        raise InvalidArgumentError("sample times must be non-negative and increasing")
    n_steps = int(sample_steps[-1])
    h = 0.5 * model.omega0 * SIGMA_X
    lam = model.lam
    sq_dt = np.sqrt(cfg.dt)

    bloch = np.empty((len(sample_steps), cfg.n_traj, 3))
    for b0 in range(0, cfg.n_traj, cfg.batch):
        b1 = min(b0 + cfg.batch, cfg.n_traj)
        idx = slice(b0, b1)
        rngs = [trajectory_rng(cfg.seed, k) for k in range(b0, b1)]
        psi = np.tile(psi0, (b1 - b0, 1))
        step, s = 0, 0
        while s < len(sample_steps) and sample_steps[s] == 0:
            bloch[s, idx] = bloch_vector(np.einsum("ki,kj->kij", psi, psi.conj()))
            s += 1
        while step < n_steps:
            m = min(cfg.chunk_steps, n_steps - step)
            noise = np.stack([r.standard_normal(m) for r in rngs], axis=1) * sq_dt
            for n in range(m):
                psi = _step(psi, h, lam, cfg.dt, noise[n])
                step += 1
                while s < len(sample_steps) and sample_steps[s] == step:
                    bloch[s, idx] = bloch_vector(np.einsum("ki,kj->kij", psi, psi.conj()))
                    s += 1
    mean = bloch.mean(axis=1)
    stderr = bloch.std(axis=1, ddof=1) / np.sqrt(cfg.n_traj) if cfg.n_traj > 1 else np.zeros_like(mean)
    paulis = np.array([PAULI[k] for k in "xyz"])
    rho_mean = 0.5 * (np.eye(2) + np.einsum("sk,kij->sij", mean, paulis))
    return SSEResult(sample_steps * cfg.dt, rho_mean, mean, stderr, bloch[-1])
