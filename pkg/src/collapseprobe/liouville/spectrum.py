"""Eigen-analysis of vectorised Liouvillians: rapidities, gap, steady state."""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ..errors import AmbiguityError, UnsupportedInputError
from ..linalg import fix_phase, spectral_order, unvec

SPECTRUM_LIMIT = 4096
NULL_TOL = 1e-9
PAIRING_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class LiouvillianSpectrum:
    """Rapidities ``l_a = -i omega_a - Gamma_a`` with biorthonormal eigenvectors.

    ``right[:, a]`` is the right eigenvector of mode ``a``; ``left[:, a]`` is
    the left one, normalised so that ``left[:, a].conj() @ right[:, b]`` is
    ``delta_ab``. Modes are sorted by descending real part, then ascending
    imaginary part.
    """

    rapidities: np.ndarray
    right: np.ndarray
    left: np.ndarray
    degenerate_modes: tuple = field(default=())

    @property
    def gammas(self):
        return -self.rapidities.real

    @property
    def omegas(self):
        return -self.rapidities.imag

    @property
    def gap(self):
        """Smallest decay rate over every mode except the leading one."""
        return float(np.min(self.gammas[1:]))

    def null_modes(self, tol=NULL_TOL):
        return np.flatnonzero(np.abs(self.rapidities) <= tol)

    def coefficients(self, v):
        """``c_a = <<L_a | v>>``."""
        return self.left.conj().T @ v

    def evolve(self, v0, t):
        """``sum_a c_a exp(l_a t) |R_a>>`` for a vectorised initial state."""
        return self.right @ (self.coefficients(v0) * np.exp(self.rapidities * t))


def spectrum(liou):
    """Full non-Hermitian eigendecomposition of ``liou``.

    Left eigenvectors are taken from the inverse of the right-eigenvector
    matrix, which makes them biorthonormal even inside degenerate
    eigenspaces. A mode whose eigenvalue condition ``|<<L|R>>|`` (unit-norm
    vectors) falls below 1e-12 is reported in ``degenerate_modes`` and its
    left vector is returned with unit norm instead.
    """
    if liou.dim2 > SPECTRUM_LIMIT:
        raise UnsupportedInputError(
            f"dense spectrum limited to D^2 <= {SPECTRUM_LIMIT}, got {liou.dim2}"
        )
    w, v = scipy.linalg.eig(liou.dense())
    order = spectral_order(w)
    w, v = w[order], fix_phase(v[:, order])
    inv = scipy.linalg.solve(v, np.eye(v.shape[0], dtype=complex))
    left = inv.conj().T
    pairing = 1.0 / np.linalg.norm(left, axis=0)
    bad = tuple(int(a) for a in np.flatnonzero(pairing < PAIRING_TOL))
    if bad:
        warnings.warn(f"near-defective Liouvillian modes {bad}", RuntimeWarning, stacklevel=2)
        left[:, bad] /= np.linalg.norm(left[:, bad], axis=0)
    return LiouvillianSpectrum(w, v, left, bad)


def steady_state(liou, spec=None):
    """Unique stationary state, from the null mode of ``liou``.

    Raises
    ------
    AmbiguityError
        If the null space is not one-dimensional.
    """
    spec = spectrum(liou) if spec is None else spec
    null = spec.null_modes()
    if len(null) != 1:
        raise AmbiguityError(
            f"steady state not unique: null space dimension {len(null)}", len(null)
        )
    rho = unvec(spec.right[:, null[0]], liou.dim)
    rho = rho / np.trace(rho)
    rho = 0.5 * (rho + rho.conj().T)
    residual = np.max(np.abs(liou.generator() @ rho.reshape(-1, order="F")))
    if residual > NULL_TOL:
        raise AmbiguityError(f"null mode residual {residual:.3e} exceeds tolerance", 1)
    return rho
