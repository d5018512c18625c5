import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collapseprobe.errors import InvalidArgumentError
from collapseprobe.metrology import cramer_rao_bound, qfi_general, qfi_qubit, qfi_stack, qsnr, sld
from collapseprobe.model import SIGMA_Z

seeds = st.integers(0, 2**32 - 1)


def hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return a + a.conj().T


def unitary(rng, d):
    q, _ = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return q


def qubit_family(rng):
    """A differentiable mixed-qubit family rho(x) = U(x) diag(p(x)) U(x)^dag
    with its exact derivative at x = 0."""
    h = hermitian(rng, 2)
    p, dp = rng.uniform(0.05, 0.95), rng.normal()
    d0 = np.diag([p, 1 - p]).astype(complex)
    dd = np.diag([dp, -dp]).astype(complex)
    u = unitary(rng, 2)
    rho = u @ d0 @ u.conj().T
    drho = u @ (dd - 1j * (h @ d0 - d0 @ h)) @ u.conj().T
    return rho, drho


def test_sld_trivial_and_maximally_mixed():
    assert np.allclose(sld(np.eye(2) / 2, np.zeros((2, 2))), 0)
    eps = 0.3
    assert np.allclose(sld(np.eye(2) / 2, eps * SIGMA_Z), 2 * eps * SIGMA_Z)


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(2, 5))
def test_sld_reconstructs_derivative(seed, d):
    rng = np.random.default_rng(seed)
    w = rng.dirichlet(np.ones(d))
    u = unitary(rng, d)
    rho = u @ np.diag(w) @ u.conj().T
    drho = hermitian(rng, d)
    drho -= np.trace(drho) / d * np.eye(d)
    lam = sld(rho, drho)
    assert np.max(np.abs(0.5 * (lam @ rho + rho @ lam) - drho)) <= 1e-9
    assert np.isclose(qfi_general(rho, drho), np.trace(rho @ lam @ lam).real, rtol=1e-8)


def test_qfi_zero_derivative():
    rho = np.diag([0.3, 0.7])
    assert qfi_qubit(rho, np.zeros((2, 2))) == 0
    assert qfi_general(rho, np.zeros((2, 2))) == 0


def test_qfi_binary_classical():
    p, dp = 0.27, 0.8
    expect = dp**2 / p + dp**2 / (1 - p)
    rho, drho = np.diag([p, 1 - p]), np.diag([dp, -dp])
    assert np.isclose(qfi_qubit(rho, drho), expect, rtol=1e-12)
    assert np.isclose(qfi_general(rho, drho), expect, rtol=1e-12)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 4))
def test_pure_state_identity(seed, d):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    psi /= np.linalg.norm(psi)
    dpsi = rng.normal(size=d) + 1j * rng.normal(size=d)
    # keep the family normalised: Re <psi|dpsi> = 0
    dpsi -= np.real(np.vdot(psi, dpsi)) * psi
    rho = np.outer(psi, psi.conj())
    drho = np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj())
    expect = 4 * (np.vdot(dpsi, dpsi).real - abs(np.vdot(psi, dpsi)) ** 2)
    assert np.isclose(qfi_general(rho, drho), expect, rtol=1e-8)


def test_dual_formula_agreement_200_families():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        rho, drho = qubit_family(rng)
        a, b = qfi_qubit(rho, drho), qfi_general(rho, drho)
        assert abs(a - b) <= 1e-8 * max(abs(b), 1e-300)


def test_qubit_formula_degenerate_limit():
    rho = np.eye(2) / 2
    drho = np.array([[0.1, 0.2 - 0.1j], [0.2 + 0.1j, -0.1]])
    assert np.isclose(qfi_qubit(rho, drho), qfi_general(rho, drho), rtol=1e-12)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 4))
def test_unitary_invariance(seed, d):
    rng = np.random.default_rng(seed)
    w = rng.dirichlet(np.ones(d))
    rho = np.diag(w).astype(complex)
    drho = hermitian(rng, d)
    drho -= np.trace(drho) / d * np.eye(d)
    u = unitary(rng, d)
    a = qfi_general(rho, drho)
    b = qfi_general(u @ rho @ u.conj().T, u @ drho @ u.conj().T)
    assert abs(a - b) <= 1e-9 * max(1.0, a)


def test_stack_matches_single():
    rng = np.random.default_rng(5)
    fams = [qubit_family(rng) for _ in range(10)]
    rhos = np.array([f[0] for f in fams])
    drhos = np.array([f[1] for f in fams])
    assert np.allclose(qfi_stack(rhos, drhos), [qfi_general(*f) for f in fams], rtol=1e-12)


def test_dimension_errors():
    with pytest.raises(InvalidArgumentError):
        qfi_general(np.eye(2) / 2, np.zeros((3, 3)))
    with pytest.raises(InvalidArgumentError):
        qfi_qubit(np.eye(3) / 3, np.zeros((3, 3)))
    with pytest.raises(InvalidArgumentError):
        sld(np.eye(2) / 2, np.zeros((2, 3)))


def test_cramer_rao_and_qsnr():
    assert cramer_rao_bound(1.0, 1) == 1.0
    assert np.isclose(cramer_rao_bound(2.0, 50), 0.01)
    assert np.isclose(cramer_rao_bound(3.0, 20), 0.5 * cramer_rao_bound(3.0, 10))
    assert cramer_rao_bound(0.0) == float("inf")
    for g, m in [(0.37, 3), (12.5, 1000), (1e-7, 7)]:
        assert np.isclose(cramer_rao_bound(g, m) * m * g, 1.0, rtol=1e-15)
    assert qsnr(0.3, 7.0) == 0.3**2 * 7.0
    with pytest.raises(InvalidArgumentError):
        cramer_rao_bound(1.0, 0)
