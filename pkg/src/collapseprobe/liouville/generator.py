"""Vectorised Lindblad generators and their propagation.

The generator acts on column-stacked density matrices. It is stored as a
unitary part plus a unit-rate dissipative part, ``L = L_U + lam * L_D``, so
the exact derivative with respect to ``lam`` is simply ``L_D``.
"""

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.integrate import solve_ivp
from scipy.sparse.linalg import expm_multiply

from ..errors import InvalidArgumentError
from ..linalg import is_hermitian, unvec, vec
from ..model import pauli_site

DENSE_LIMIT = 1024  # D^2 above which propagate() switches to the ODE backend
ODE_RTOL = 1e-10
ODE_ATOL = 1e-10


def vectorize_unitary(h, sparse=False):
    """``-i (1 (x) H - H^T (x) 1)``, the vectorised form of ``-i [H, .]``."""
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise InvalidArgumentError("Hamiltonian is not Hermitian")
    eye = sp.identity(h.shape[0], dtype=complex, format="csr")
    hs = sp.csr_matrix(h)
    out = (-1j * (sp.kron(eye, hs) - sp.kron(hs.T, eye))).tocsr()
    return out if sparse else out.toarray()


def _z_diagonal(site, n_total):
    return np.real(np.diag(pauli_site("z", site, n_total)))


def vectorize_dissipator(spec, n_total, sparse=False):
    """Unit-rate generator of ``-1/2 sum_ij w_ij [sz_i, [sz_j, rho]]``.

    Each term contributes ``sz_j^T (x) sz_i - 1/2 (1 (x) sz_i sz_j + (sz_i sz_j)^T (x) 1)``.
    All operators are diagonal in the computational basis, so the result is
    a diagonal matrix.
    """
    bad = [s for s in spec.sites if not 1 <= s <= n_total]
    if bad:
        raise InvalidArgumentError(f"dissipator sites {bad} outside 1..{n_total}")
    dim = 2**n_total
    ones = np.ones(dim)
    diag = np.zeros(dim * dim)
    z = {s: _z_diagonal(s, n_total) for s in spec.sites}
    for i, j, w in spec.terms:
        zz = z[i] * z[j]
        diag += w * (np.kron(z[j], z[i]) - 0.5 * (np.kron(ones, zz) + np.kron(zz, ones)))
    out = sp.diags(diag.astype(complex), format="csr")
    return out if sparse else out.toarray()


@dataclass(frozen=True, eq=False)
class VectorizedLiouvillian:
    """``L = l_unitary + lam * l_dissipative_unit`` on ``D^2``-dimensional vectors.

    Both parts are kept as sparse CSR matrices; use :meth:`dense` for a
    full array.
    """

    l_unitary: sp.csr_matrix
    l_dissipative_unit: sp.csr_matrix
    lam: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "l_unitary", sp.csr_matrix(self.l_unitary, dtype=complex))
        object.__setattr__(
            self, "l_dissipative_unit", sp.csr_matrix(self.l_dissipative_unit, dtype=complex)
        )
        if self.l_unitary.shape != self.l_dissipative_unit.shape:
            raise InvalidArgumentError("unitary and dissipative parts differ in shape")
        if not self.lam >= 0:
            raise InvalidArgumentError("collapse rate must be >= 0")
        d = int(round(np.sqrt(self.dim2)))
        if d * d != self.dim2:
            raise InvalidArgumentError("generator size is not a perfect square")

    @property
    def dim2(self):
        return self.l_unitary.shape[0]

    @property
    def dim(self):
        return int(round(np.sqrt(self.dim2)))

    def generator(self):
        return (self.l_unitary + self.lam * self.l_dissipative_unit).tocsr()

    def dense(self):
        return self.generator().toarray()

    def with_lambda(self, lam):
        return replace(self, lam=lam)

    def sensitivity_generator(self):
        """Block generator of ``(rho, d rho / d lam)``: ``[[L, 0], [L_D, L]]``."""
        g = self.generator()
        return sp.bmat([[g, None], [self.l_dissipative_unit, g]], format="csr")


def build_liouvillian(h, dissipator, n_total, lam):
    return VectorizedLiouvillian(
        vectorize_unitary(h, sparse=True),
        vectorize_dissipator(dissipator, n_total, sparse=True),
        lam,
    )


def _resolve(method, dim2):
    if method == "auto":
        return "expm" if dim2 <= DENSE_LIMIT else "ode"
    if method not in ("expm", "ode", "krylov"):
        raise InvalidArgumentError(f"unknown propagation method {method!r}")
    return method


def _ode(gen, y0, t):
    sol = solve_ivp(
        lambda _, y: gen @ y, (0.0, t), y0, method="DOP853", rtol=ODE_RTOL, atol=ODE_ATOL
    )
    if not sol.success:
        raise RuntimeError(f"ODE integration failed: {sol.message}")
    return sol.y[:, -1]


def _hermitize(m):
    return 0.5 * (m + m.conj().T)


def propagate(liou, rho0, t, method="auto"):
    """Evolve ``rho0`` for a time ``t`` under ``liou``.

    ``method`` is ``"expm"`` (dense matrix exponential), ``"ode"`` (adaptive
    Dormand-Prince 8(5,3), rtol = atol = 1e-10), ``"krylov"`` (action of the
    exponential on the vector) or ``"auto"``, which picks ``"expm"`` up to
    ``D^2 = 1024`` and ``"ode"`` above.
    """
    if t < 0:
        raise InvalidArgumentError(f"time must be >= 0, got {t}")
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (liou.dim, liou.dim):
        raise InvalidArgumentError(f"state shape {rho0.shape} does not match generator")
    if t == 0:
        return rho0.copy()
    v0 = vec(rho0)
    method = _resolve(method, liou.dim2)
    if method == "expm":
        v = scipy.linalg.expm(t * liou.dense()) @ v0
    elif method == "ode":
        v = _ode(liou.generator(), v0, t)
    else:
        v = expm_multiply(t * liou.generator(), v0)
    return _hermitize(unvec(v, liou.dim))


def propagate_with_lambda_derivative(liou, rho0, t, method="auto", drho0=None):
    """Return ``(rho(t), d rho(t) / d lam)``.

    The derivative solves ``d/dt drho = L drho + L_D rho`` with
    ``drho(0) = drho0`` (zero by default, i.e. a lam-independent initial
    state). The ``"expm"`` backend evaluates the block exponential through
    the Frechet derivative of ``expm`` at ``t L`` in direction ``t L_D``.
    """
    if t < 0:
        raise InvalidArgumentError(f"time must be >= 0, got {t}")
    rho0 = np.asarray(rho0, dtype=complex)
    d = liou.dim
    if rho0.shape != (d, d):
        raise InvalidArgumentError(f"state shape {rho0.shape} does not match generator")
    drho0 = np.zeros_like(rho0) if drho0 is None else np.asarray(drho0, dtype=complex)
    if t == 0:
        return rho0.copy(), drho0.copy()
    v0, dv0 = vec(rho0), vec(drho0)
    method = _resolve(method, liou.dim2)
    if method == "expm":
        e, f = scipy.linalg.expm_frechet(
            t * liou.dense(), t * liou.l_dissipative_unit.toarray(), compute_expm=True
        )
        v, dv = e @ v0, f @ v0 + e @ dv0
    else:
        y0 = np.concatenate([v0, dv0])
        block = liou.sensitivity_generator()
        y = _ode(block, y0, t) if method == "ode" else expm_multiply(t * block, y0)
        v, dv = y[: liou.dim2], y[liou.dim2:]
    drho = unvec(dv, d)
    return _hermitize(unvec(v, d)), _hermitize(drho)


def iter_series(liou, rho0, t_max, num, derivative=False, chunk=256, drho0=None, t0=0.0):
    """Yield ``(times, rhos, drhos)`` blocks on ``t0 + linspace(0, t_max, num)``.

    ``rho0`` (and ``drho0``, zero by default) is the state at ``t0``. The
    exponential action is evaluated chunk by chunk so that only ``chunk``
    states are held in memory at once. ``drhos`` is ``None`` when
    ``derivative`` is false.
    """
    if t_max <= 0 or num < 2:
        raise InvalidArgumentError("need t_max > 0 and at least two time points")
    d, d2 = liou.dim, liou.dim2
    gen = liou.sensitivity_generator() if derivative else liou.generator()
    y = vec(np.asarray(rho0, dtype=complex))
    if derivative:
        dy = np.zeros(d2, dtype=complex) if drho0 is None else vec(np.asarray(drho0, dtype=complex))
        y = np.concatenate([y, dy])
    dt = t_max / (num - 1)
    start = 0
    while start < num:
        stop = min(start + chunk, num)
        if start == 0:
            ys = np.vstack([y[None, :], _steps(gen, y, dt, stop - 1)])
        else:
            ys = _steps(gen, y, dt, stop - start)
        y = ys[-1]
        times = t0 + dt * np.arange(start, stop)
        rhos = ys[:, :d2].reshape(-1, d, d).transpose(0, 2, 1)
        drhos = ys[:, d2:].reshape(-1, d, d).transpose(0, 2, 1) if derivative else None
        yield times, rhos, drhos
        start = stop


def _steps(gen, y, dt, m):
    # states at dt, 2 dt, ..., m dt
    if m == 0:
        return np.empty((0, y.size), dtype=complex)
    if m == 1:
        return expm_multiply(dt * gen, y)[None, :]
    return expm_multiply(gen, y, start=dt, stop=m * dt, num=m, endpoint=True)
