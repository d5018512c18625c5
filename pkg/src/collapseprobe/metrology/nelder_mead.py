"""Bounded Nelder-Mead maximiser on the unit box."""

from dataclasses import dataclass

import numpy as np


@dataclass
class NelderMeadResult:
    x: np.ndarray
    fx: float
    n_iterations: int
    converged: bool
    simplex: np.ndarray
    values: np.ndarray


def _diameter(simplex):
    diff = simplex[:, None, :] - simplex[None, :, :]
    return float(np.max(np.linalg.norm(diff, axis=-1)))


def nelder_mead_max(f, x0, step, xtol=1e-4, max_iter=500,
                    alpha=1.0, gamma=2.0, rho=0.5, sigma=0.5):
    """Maximise ``f`` over ``[0, 1]^n`` starting from ``x0``.

    Points outside the box are scored ``-inf``, which the simplex then
    contracts away from. Stops when the simplex diameter drops below
    ``xtol`` or after ``max_iter`` iterations.

    Parameters
    ----------
    f : callable
        Objective on scaled coordinates.
    x0 : array_like
        Starting vertex.
    step : float or array_like
        Offset of the other initial vertices along each axis. A vertex that
        would leave the box is placed on the opposite side of ``x0``.
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    step = np.broadcast_to(np.asarray(step, dtype=float), (n,))

    def score(x):
        if np.any(x < 0) or np.any(x > 1):
            return -np.inf
        return float(f(x))

    simplex = [x0]
    for k in range(n):
        v = x0.copy()
        v[k] = v[k] + step[k] if v[k] + step[k] <= 1 else v[k] - step[k]
        simplex.append(v)
    simplex = np.array(simplex)
    values = np.array([score(v) for v in simplex])

    it = 0
    converged = False
    while it < max_iter:
        order = np.argsort(-values, kind="stable")
        simplex, values = simplex[order], values[order]
        if _diameter(simplex) < xtol:
            converged = True
            break
        it += 1
        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + alpha * (centroid - worst)
        fr = score(xr)
        if values[0] >= fr > values[-2]:
            simplex[-1], values[-1] = xr, fr
            continue
        if fr > values[0]:
            xe = centroid + gamma * (xr - centroid)
            fe = score(xe)
            if fe > fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
            continue
        if fr > values[-1]:
            xc = centroid + rho * (xr - centroid)
            fc = score(xc)
            if fc >= fr:
                simplex[-1], values[-1] = xc, fc
                continue
        else:
            xc = centroid + rho * (worst - centroid)
            fc = score(xc)
            if fc > values[-1]:
                simplex[-1], values[-1] = xc, fc
                continue
        # shrink towards the best vertex
        simplex[1:] = simplex[0] + sigma * (simplex[1:] - simplex[0])
        values[1:] = [score(v) for v in simplex[1:]]

    best = int(np.argmax(values))
    return NelderMeadResult(simplex[best].copy(), float(values[best]), it, converged,
                            simplex, values)
