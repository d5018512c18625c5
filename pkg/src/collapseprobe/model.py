"""Hamiltonians, collapse dissipators and initial states.

Conventions
-----------
Single-qubit basis is ordered ``(|0>, |1>)`` with

    sigma_z = |1><1| - |0><0| = diag(-1, +1)
    sigma_x = |1><0| + |0><1|

which is the opposite sign of the usual ``diag(+1, -1)``. Sites are numbered
from 1. In the Ising setup the tensor order is chain sites ``1..N`` followed
by the probe, which is factor ``N + 1``. The probe never carries a collapse
term.
"""

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import InvalidArgumentError
from .linalg import gibbs_state, is_hermitian, kron_all

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, 1j], [-1j, 0]], dtype=complex)
SIGMA_Z = np.array([[-1, 0], [0, 1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

# sigma_y is fixed by sigma_y = -i sigma_z sigma_x so that [sx, sy] = 2i sz
# holds with the flipped sigma_z.
PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


@dataclass(frozen=True)
class BlochState:
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise InvalidArgumentError(f"theta={self.theta} outside [0, pi]")
        if not 0.0 <= self.phi <= 2 * np.pi:
            raise InvalidArgumentError(f"phi={self.phi} outside [0, 2pi)")


@dataclass(frozen=True)
class SingleQubitModel:
    omega0: float = 1.0
    lam: float = 0.0

    def __post_init__(self):
        if not self.omega0 > 0:
            raise InvalidArgumentError("omega0 must be positive")
        if not self.lam >= 0:
            raise InvalidArgumentError("collapse rate must be >= 0")

    def hamiltonian(self):
        return 0.5 * self.omega0 * SIGMA_X


@dataclass(frozen=True)
class TwoQubitProbeModel:
    omega0: float = 1.0
    omega_p: float = 0.3
    g: float = 0.2
    lam: float = 0.0

    def __post_init__(self):
        if not (self.omega0 > 0 and self.omega_p > 0):
            raise InvalidArgumentError("omega0 and omega_p must be positive")
        if not self.lam >= 0:
            raise InvalidArgumentError("collapse rate must be >= 0")


@dataclass(frozen=True)
class IsingChainSpec:
    n_sites: int = 2
    h: float = 1.0
    j: float = 1.0

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 1:
            raise InvalidArgumentError(f"n_sites must be a positive integer, got {self.n_sites}")
        if not (self.h > 0 and self.j > 0):
            raise InvalidArgumentError("h and J must be positive")


@dataclass(frozen=True)
class ProbeCouplingSpec:
    h_p: float = 0.5
    j_p: float = 0.5

    def __post_init__(self):
        if not (np.isfinite(self.h_p) and np.isfinite(self.j_p)):
            raise InvalidArgumentError("probe couplings must be finite")


@dataclass(frozen=True)
class NoiseSpec:
    kind: Literal["local", "correlated"] = "local"
    lam: float = 0.0
    rc_over_a: float = 1.0

    def __post_init__(self):
        if self.kind not in ("local", "correlated"):
            raise InvalidArgumentError(f"unknown noise kind {self.kind!r}")
        if not self.lam >= 0:
            raise InvalidArgumentError("collapse rate must be >= 0")
        if self.kind == "correlated" and not self.rc_over_a > 0:
            raise InvalidArgumentError("rc_over_a must be positive for correlated noise")


@dataclass(frozen=True)
class DissipatorSpec:
    """Unit-rate sigma_z double-commutator dissipator.

    ``terms`` holds ``(i, j, weight)`` with 1-based site indices; the
    generated superoperator is ``-1/2 sum_ij w_ij [sz_i, [sz_j, rho]]``.
    """

    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        w = self.weight_matrix()
        if w.size:
            if np.max(np.abs(w - w.T)) > 1e-12:
                raise InvalidArgumentError("dissipator weight matrix is not symmetric")
            if np.linalg.eigvalsh(w)[0] < -1e-12:
                raise InvalidArgumentError("dissipator weight matrix is not positive semidefinite")

    @property
    def sites(self):
        return sorted({i for i, _, _ in self.terms} | {j for _, j, _ in self.terms})

    def weight_matrix(self, n=None):
        if n is None:
            n = max(self.sites, default=0)
        w = np.zeros((n, n))
        for i, j, weight in self.terms:
            if weight < 0:
                raise InvalidArgumentError("dissipator weights must be >= 0")
            w[i - 1, j - 1] += weight
        return w


def pauli_site(axis, site, n_total):
    """Pauli operator ``axis`` on ``site`` (1-based) of ``n_total`` qubits."""
    if axis not in PAULI:
        raise InvalidArgumentError(f"unknown Pauli axis {axis!r}")
    if not 1 <= site <= n_total:
        raise InvalidArgumentError(f"site {site} out of range 1..{n_total}")
    factors = [IDENTITY_2] * n_total
    factors[site - 1] = PAULI[axis]
    return kron_all(factors)


def two_qubit_hamiltonian(m):
    """``(w0/2) sx (x) 1 + 1 (x) (wp/2) sx + g sz (x) sz``; system first, probe second."""
    return (
        0.5 * m.omega0 * np.kron(SIGMA_X, IDENTITY_2)
        + 0.5 * m.omega_p * np.kron(IDENTITY_2, SIGMA_X)
        + m.g * np.kron(SIGMA_Z, SIGMA_Z)
    )


def _open_chain(fields, bonds):
    n = len(fields)
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    for site, f in enumerate(fields, start=1):
        if f:
            h -= f * pauli_site("x", site, n)
    for site, b in enumerate(bonds, start=1):
        if b:
            h -= b * pauli_site("z", site, n) @ pauli_site("z", site + 1, n)
    return h


def ising_hamiltonian(spec):
    """Open transverse-field Ising chain ``-h sum sx_j - J sum sz_j sz_{j+1}``."""
    n = spec.n_sites
    return _open_chain([spec.h] * n, [spec.j] * (n - 1))


def ising_probe_hamiltonian(chain, probe):
    """Chain plus probe on factor ``N + 1``: an ``N + 1`` site chain whose last
    field is ``h_p`` and last bond is ``J_p``."""
    n = chain.n_sites
    return _open_chain([chain.h] * n + [probe.h_p], [chain.j] * (n - 1) + [probe.j_p])


def bloch_pure_state(b):
    """Projector on ``cos(theta/2)|1> + e^{i phi} sin(theta/2)|0>``."""
    psi = bloch_ket(b)
    return np.outer(psi, psi.conj())


def bloch_ket(b):
    return np.array(
        [np.exp(1j * b.phi) * np.sin(b.theta / 2), np.cos(b.theta / 2)], dtype=complex
    )


def bloch_vector(rho):
    """``(Tr sx rho, Tr sy rho, Tr sz rho)`` for a single qubit, or a stack of them."""
    rho = np.asarray(rho)
    return np.real(np.stack(
        [np.einsum("...ij,ji->...", rho, PAULI[k]) for k in "xyz"], axis=-1
    ))


def initial_product_state(h_system, beta, probe):
    """Gibbs state of ``h_system`` at inverse temperature ``beta``, tensored with the probe."""
    if not is_hermitian(h_system):
        raise InvalidArgumentError("system Hamiltonian is not Hermitian")
    return np.kron(gibbs_state(h_system, beta), bloch_pure_state(probe))


def correlation_kernel(n_chain, rc_over_a):
    """Gaussian kernel ``exp(-(i - j)^2 / (4 (rc/a)^2))`` on an ``n_chain`` lattice."""
    d = np.arange(n_chain)[:, None] - np.arange(n_chain)[None, :]
    return np.exp(-(d**2) / (4.0 * rc_over_a**2))


def collapse_dissipator_spec(noise, n_chain, sites=None):
    """Collapse dissipator on chain sites ``1..n_chain`` (or the subset ``sites``)."""
    if n_chain < 1:
        raise InvalidArgumentError("n_chain must be >= 1")
    sites = list(range(1, n_chain + 1)) if sites is None else sorted(set(sites))
    bad = [s for s in sites if not 1 <= s <= n_chain]
    if bad:
        raise InvalidArgumentError(
            f"sites {bad} are not chain sites 1..{n_chain}; the probe never collapses"
        )
    if noise.kind == "local":
        return DissipatorSpec(tuple((s, s, 1.0) for s in sites))
    kernel = correlation_kernel(n_chain, noise.rc_over_a)
    return DissipatorSpec(
        tuple((i, j, float(kernel[i - 1, j - 1])) for i in sites for j in sites)
    )
