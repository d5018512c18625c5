"""Quantum Fisher information, symmetric logarithmic derivative, QSNR."""

import numpy as np

from ..errors import InvalidArgumentError

EIG_CUTOFF = 1e-12


def _pair(rho, drho):
    rho = np.asarray(rho, dtype=complex)
    drho = np.asarray(drho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape != drho.shape:
        raise InvalidArgumentError(
            f"rho and drho must be square and of equal shape, got {rho.shape} and {drho.shape}"
        )
    return 0.5 * (rho + rho.conj().T), 0.5 * (drho + drho.conj().T)


def _eigen_split(rho, drho):
    w, v = np.linalg.eigh(rho)
    d = v.conj().T @ drho @ v
    return w, v, d


def sld(rho, drho):
    """Symmetric logarithmic derivative ``L`` with ``drho = (L rho + rho L) / 2``.

    Eigenbasis formula ``L_ij = 2 drho_ij / (p_i + p_j)``; pairs with
    ``p_i + p_j <= 1e-12`` are set to zero.
    """
    rho, drho = _pair(rho, drho)
    w, v, d = _eigen_split(rho, drho)
    s = w[:, None] + w[None, :]
    keep = s > EIG_CUTOFF
    lam = np.zeros_like(d)
    lam[keep] = 2 * d[keep] / s[keep]
    out = v @ lam @ v.conj().T
    return 0.5 * (out + out.conj().T)


def qfi_general(rho, drho):
    """``G = sum_ij 2 |<i|drho|j>|^2 / (p_i + p_j)`` over pairs with ``p_i + p_j > 1e-12``."""
    rho, drho = _pair(rho, drho)
    w, _, d = _eigen_split(rho, drho)
    s = w[:, None] + w[None, :]
    keep = s > EIG_CUTOFF
    g = float(np.sum(2 * np.abs(d[keep]) ** 2 / s[keep]))
    return max(g, 0.0)


def qfi_stack(rhos, drhos):
    """:func:`qfi_general` over a stack of ``(K, D, D)`` states."""
    rhos = 0.5 * (rhos + np.conj(np.swapaxes(rhos, -1, -2)))
    drhos = 0.5 * (drhos + np.conj(np.swapaxes(drhos, -1, -2)))
    w, v = np.linalg.eigh(rhos)
    d = np.conj(np.swapaxes(v, -1, -2)) @ drhos @ v
    s = w[:, :, None] + w[:, None, :]
    keep = s > EIG_CUTOFF
    terms = np.where(keep, 2 * np.abs(d) ** 2 / np.where(keep, s, 1.0), 0.0)
    return np.maximum(terms.sum(axis=(1, 2)), 0.0)


def qfi_qubit(rho, drho):
    """Qubit QFI split into a population term and a coherence term.

    With ``rho = p+ |+><+| + p- |-><-|``::

        G = sum_j (dp_j)^2 / p_j + 2 k (|<-|d+>|^2 + |<+|d->|^2),  k = (1 - 2 p+)^2

    Eigenvalue derivatives are ``dp_j = <j|drho|j>`` and the eigenvector
    overlaps come from first-order perturbation theory,
    ``<-|d+> = <-|drho|+> / (p+ - p-)``, which is insensitive to the phase
    convention of the eigenvectors.
    """
    rho, drho = _pair(rho, drho)
    if rho.shape != (2, 2):
        raise InvalidArgumentError(f"qfi_qubit needs 2x2 input, got {rho.shape}")
    w, _, d = _eigen_split(rho, drho)
    p_minus, p_plus = w
    dp = np.real(np.diag(d))
    classical = sum(dp[k] ** 2 / w[k] for k in range(2) if w[k] > EIG_CUTOFF)
    gap = p_plus - p_minus
    kappa = (1 - 2 * p_plus) ** 2
    off = abs(d[0, 1]) ** 2
    if gap > 1e-6:
        coherent = 2 * kappa * (off / gap**2 + off / gap**2)
    elif p_plus + p_minus > EIG_CUTOFF:
        # degenerate limit of kappa / gap^2 at unit trace
        coherent = 4 * off / (p_plus + p_minus)
    else:
        coherent = 0.0
    return max(float(classical + coherent), 0.0)


def qsnr(lam, g):
    """Quantum signal-to-noise ratio ``lam^2 G``."""
    return lam**2 * g


def cramer_rao_bound(g, m=1):
    """Variance bound ``1 / (M G)``; ``inf`` when ``G <= 0``."""
    if m < 1:
        raise InvalidArgumentError("number of measurements must be >= 1")
    if g <= 0:
        return float("inf")
    return 1.0 / (m * g)
