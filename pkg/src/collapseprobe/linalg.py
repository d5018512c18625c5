"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Vectorisation
follows column stacking, so that ``vec(A @ B @ C) == kron(C.T, A) @ vec(B)``.
"""

import numpy as np
import scipy.linalg

from .errors import InvalidArgumentError

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = -1e-9


def as_matrix(a):
    """Return ``a`` as a finite 2-D complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise InvalidArgumentError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidArgumentError("matrix contains NaN or Inf entries")
    return m


def _square(a, name="matrix"):
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise InvalidArgumentError(f"{name} must be square, got shape {m.shape}")
    return m


def kron(a, b):
    """Kronecker product; row index ``i_a * r_b + i_b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors):
    out = np.eye(1, dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def vec(m):
    """Stack the columns of ``m`` into a 1-D vector."""
    return as_matrix(m).reshape(-1, order="F")


def unvec(v, dim=None):
    """Inverse of :func:`vec` for a square ``dim x dim`` matrix."""
    v = np.asarray(v, dtype=complex).ravel()
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size:
        raise InvalidArgumentError(
            f"vector of length {v.size} cannot be reshaped to {dim}x{dim}"
        )
    return v.reshape((dim, dim), order="F")


def is_hermitian(m, tol=HERMITIAN_TOL):
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.max(
        np.abs(m - m.conj().T), initial=0.0
    ) <= tol


def check_density_matrix(rho, herm_tol=HERMITIAN_TOL, trace_tol=TRACE_TOL,
                         pos_tol=POSITIVITY_TOL):
    """Validate Hermiticity, unit trace and positivity; return the array.

    Raises
    ------
    InvalidArgumentError
        If any of the three conditions is violated beyond its tolerance.
    """
    rho = _square(rho, "density matrix")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > herm_tol:
        raise InvalidArgumentError(f"not Hermitian (deviation {herm:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1) > trace_tol:
        raise InvalidArgumentError(f"trace is {tr:.12g}, expected 1")
    w_min = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if w_min < pos_tol:
        raise InvalidArgumentError(f"not positive (smallest eigenvalue {w_min:.3e})")
    return rho


def partial_trace(rho, dims, keep):
    """Trace out every tensor factor not listed in ``keep``.

    Parameters
    ----------
    rho : (D, D) array
    dims : sequence of int
        Factor dimensions, ``prod(dims) == D``.
    keep : iterable of int
        0-based indices of the factors to keep. Their order in the output
        follows their order in ``dims``.
    """
    rho = _square(rho, "rho")
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != rho.shape[0]:
        raise InvalidArgumentError(
            f"factor dimensions {dims} do not match matrix size {rho.shape[0]}"
        )
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise InvalidArgumentError(f"invalid factor selection {keep} for {len(dims)} factors")
    n = len(dims)
    t = rho.reshape(dims + dims)
    # trace the discarded factors from the highest index down so axes stay valid
    for k in reversed(range(n)):
        if k in keep:
            continue
        m = t.ndim // 2
        t = np.trace(t, axis1=k, axis2=k + m)
    d_keep = int(np.prod([dims[k] for k in keep]))
    return t.reshape(d_keep, d_keep)


def expm(a):
    """Matrix exponential (scaling and squaring with Pade approximant)."""
    return scipy.linalg.expm(_square(a))


def eigh_sorted(h):
    """Hermitian eigendecomposition, eigenvalues ascending."""
    w, v = np.linalg.eigh(_square(h))
    return w, v


def eig_sorted(a):
    """General eigendecomposition sorted by descending real part, then
    ascending imaginary part. Each eigenvector has unit norm and its
    largest-magnitude component made real positive."""
    w, v = scipy.linalg.eig(_square(a))
    order = spectral_order(w)
    w, v = w[order], v[:, order]
    return w, fix_phase(v)


def spectral_order(w, decimals=10):
    # rounding keeps the order stable against last-bit noise in the eigensolver
    re = np.round(w.real, decimals)
    im = np.round(w.imag, decimals)
    return np.lexsort((im, -re))


def fix_phase(v):
    v = v / np.linalg.norm(v, axis=0, keepdims=True)
    idx = np.argmax(np.abs(v) - 1e-12 * np.arange(v.shape[0])[:, None], axis=0)
    ph = v[idx, np.arange(v.shape[1])]
    return v * (np.abs(ph) / ph)[None, :]


def gibbs_state(h, beta):
    """Thermal state ``exp(-beta h) / Tr exp(-beta h)``.

    Built from the Hermitian eigendecomposition with the ground energy
    shifted out, so large ``beta`` does not overflow.
    """
    h = _square(h, "Hamiltonian")
    if not is_hermitian(h):
        raise InvalidArgumentError("Hamiltonian is not Hermitian")
    if beta < 0:
        raise InvalidArgumentError(f"beta must be >= 0, got {beta}")
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    p = np.exp(-beta * (w - w[0]))
    p /= p.sum()
    rho = (v * p) @ v.conj().T
    return 0.5 * (rho + rho.conj().T)


def purity(rho):
    return float(np.real(np.trace(rho @ rho)))
