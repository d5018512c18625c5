"""Closed-form reference for a single qubit under collapse noise.

The 4x4 generator for ``H = (w0/2) sx`` and dissipator
``-(lam/2) [sz, [sz, rho]]`` is written out entry by entry here rather than
assembled from the general vectorisation routines, so it can serve as an
independent check on them.
"""

import numpy as np

from ..errors import InvalidArgumentError, UnsupportedInputError

EXCEPTIONAL_TOL = 1e-9


def single_qubit_generator(omega0, lam):
    w, g = omega0, lam
    return 0.5 * np.array(
        [
            [0, -1j * w, 1j * w, 0],
            [-1j * w, -4 * g, 0, 1j * w],
            [1j * w, 0, -4 * g, -1j * w],
            [0, 1j * w, -1j * w, 0],
        ],
        dtype=complex,
    )


def single_qubit_rapidities(omega0, lam):
    """``{0, -2 lam, -lam + sqrt(lam^2 - w0^2), -lam - sqrt(lam^2 - w0^2)}``."""
    root = np.sqrt(complex(lam**2 - omega0**2))
    return np.array([0.0, -2 * lam, -lam + root, -lam - root], dtype=complex)


def analytic_single_qubit(omega0, lam, rho0, t):
    """``rho(t) = sum_a c_a exp(l_a t) R_a`` for the single-qubit generator.

    ``t`` may be a scalar or an array; for an array the result is stacked
    along the first axis.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (2, 2):
        raise InvalidArgumentError("analytic solution needs a 2x2 initial state")
    if abs(lam - omega0) <= EXCEPTIONAL_TOL * omega0:
        raise UnsupportedInputError("lam == omega0 is an exceptional point of the generator")
    l_mat = single_qubit_generator(omega0, lam)
    rapid, right = np.linalg.eig(l_mat)
    coeff = np.linalg.solve(right, rho0.reshape(-1, order="F"))
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    vecs = (right[None, :, :] * (coeff * np.exp(np.outer(ts, rapid)))[:, None, :]).sum(-1)
    out = vecs.reshape(-1, 2, 2).transpose(0, 2, 1)
    out = 0.5 * (out + out.conj().transpose(0, 2, 1))
    return out[0] if np.ndim(t) == 0 else out
