import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collapseprobe.errors import AmbiguityError, InvalidArgumentError, UnsupportedInputError
from collapseprobe.linalg import check_density_matrix, unvec, vec
from collapseprobe.liouville import (
    analytic_single_qubit,
    build_liouvillian,
    iter_series,
    propagate,
    propagate_with_lambda_derivative,
    single_qubit_generator,
    single_qubit_rapidities,
    spectrum,
    steady_state,
    vectorize_dissipator,
    vectorize_unitary,
)
from collapseprobe.metrology import IsingExperiment, TwoQubitExperiment, initial_state, liouvillian
from collapseprobe.model import (
    SIGMA_X,
    SIGMA_Z,
    BlochState,
    DissipatorSpec,
    SingleQubitModel,
    bloch_pure_state,
    bloch_vector,
    pauli_site,
)

# sympy eigenvalues of the single-qubit generator at w0 = 1, lam = 0.1 (tests/oracles)
RAPIDITIES = np.array([0, -0.1 - 0.99498743710662j, -0.1 + 0.99498743710662j, -0.2])
LOCAL = DissipatorSpec(((1, 1, 1.0),))


def qubit(lam, w0=1.0):
    return build_liouvillian(SingleQubitModel(w0, lam).hamiltonian(), LOCAL, 1, lam)


def rand_density(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


MODELS = {
    "qubit": lambda lam: qubit(lam),
    "two-qubit": lambda lam: liouvillian(TwoQubitExperiment(), lam),
    "ising-2": lambda lam: liouvillian(IsingExperiment(n_sites=2), lam),
    "ising-3-corr": lambda lam: liouvillian(IsingExperiment(n_sites=3, noise="correlated"), lam),
    "ising-4": lambda lam: liouvillian(IsingExperiment(n_sites=4), lam),
}
SMALL = ["qubit", "two-qubit", "ising-2", "ising-3-corr"]


def test_unitary_part():
    assert not np.any(vectorize_unitary(np.zeros((2, 2))))
    lu = vectorize_unitary(0.5 * SIGMA_X)
    assert np.allclose(lu, single_qubit_generator(1.0, 0.0))
    with pytest.raises(InvalidArgumentError):
        vectorize_unitary(np.array([[0, 1], [0, 0]]))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_unitary_matches_commutator(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = a + a.conj().T
    rho = rand_density(rng, 4)
    assert np.allclose(vectorize_unitary(h) @ vec(rho), vec(-1j * (h @ rho - rho @ h)))


def test_single_qubit_dissipator_closed_form():
    ld = vectorize_dissipator(LOCAL, 1)
    assert np.allclose(ld, np.kron(SIGMA_Z, SIGMA_Z) - np.eye(4))
    assert np.allclose(single_qubit_generator(1.0, 0.3), qubit(0.3).dense())


def test_dissipator_matches_double_commutators():
    rng = np.random.default_rng(3)
    rho = rand_density(rng, 8)
    w = np.array([[1.0, 0.4], [0.4, 1.0]])
    spec = DissipatorSpec(((1, 1, 1.0), (2, 2, 1.0), (1, 2, 0.4), (2, 1, 0.4)))
    z = [pauli_site("z", k, 3) for k in (1, 2)]
    ref = np.zeros_like(rho)
    for i in range(2):
        for j in range(2):
            inner = z[j] @ rho - rho @ z[j]
            ref += -0.5 * w[i, j] * (z[i] @ inner - inner @ z[i])
    assert np.allclose(vectorize_dissipator(spec, 3) @ vec(rho), vec(ref))
    with pytest.raises(InvalidArgumentError):
        vectorize_dissipator(DissipatorSpec(((4, 4, 1.0),)), 3)


@pytest.mark.parametrize("name", list(MODELS))
def test_trace_preserving_and_unital(name):
    liou = MODELS[name](0.3)
    gen = liou.generator()
    one = vec(np.eye(liou.dim))
    assert np.max(np.abs(gen.conj().T @ one)) <= 1e-10
    assert np.max(np.abs(gen @ one)) <= 1e-10


def test_affine_in_lambda():
    a, b = qubit(0.2).dense(), qubit(0.7).dense()
    assert np.allclose(qubit(0.45).dense(), 0.5 * (a + b), atol=1e-15)


@pytest.mark.parametrize("name", list(MODELS))
def test_propagation_keeps_density_invariants(name):
    liou = MODELS[name](0.2)
    rng = np.random.default_rng(4)
    rho0 = rand_density(rng, liou.dim)
    for t in np.geomspace(1e-3, 100, 20):
        check_density_matrix(propagate(liou, rho0, t))


def test_propagate_t0_and_negative_time():
    liou = qubit(0.1)
    rho0 = bloch_pure_state(BlochState(0.0, 0.0))
    assert np.array_equal(propagate(liou, rho0, 0.0), rho0)
    with pytest.raises(InvalidArgumentError):
        propagate(liou, rho0, -1.0)


@pytest.mark.parametrize("method", ["expm", "ode", "krylov"])
def test_backends_agree(method):
    liou = MODELS["ising-2"](0.05)
    rho0 = initial_state(IsingExperiment(n_sites=2), BlochState(np.pi, 0.0))
    ref = propagate(liou, rho0, 7.3, method="expm")
    assert np.max(np.abs(propagate(liou, rho0, 7.3, method=method) - ref)) < 1e-8


def test_ode_backend_on_big_model():
    liou = MODELS["ising-4"](0.1)
    rho0 = initial_state(IsingExperiment(n_sites=4), BlochState(np.pi, 0.0))
    a = propagate(liou, rho0, 3.0, method="ode")
    b = propagate(liou, rho0, 3.0, method="krylov")
    assert np.max(np.abs(a - b)) < 1e-8


@pytest.mark.parametrize("name", SMALL)
def test_semigroup(name):
    liou = MODELS[name](0.15)
    rho0 = rand_density(np.random.default_rng(5), liou.dim)
    two_step = propagate(liou, propagate(liou, rho0, 1.7), 2.6)
    assert np.max(np.abs(two_step - propagate(liou, rho0, 4.3))) < 1e-8


def test_unitary_limit_keeps_purity():
    liou = qubit(0.0)
    rho0 = bloch_pure_state(BlochState(1.0, 0.5))
    for t in (0.5, 3.0, 20.0):
        rho = propagate(liou, rho0, t)
        assert abs(np.trace(rho @ rho).real - 1) < 1e-9


def test_matches_analytic_single_qubit():
    liou = qubit(0.1)
    rho0 = bloch_pure_state(BlochState(0.0, 0.0))
    ts = np.linspace(0, 50, 101)
    exact = bloch_vector(analytic_single_qubit(1.0, 0.1, rho0, ts))
    num = np.array([bloch_vector(propagate(liou, rho0, t)) for t in ts])
    assert np.max(np.abs(num - exact)) <= 1e-8


def test_analytic_oracle_limits():
    rho0 = bloch_pure_state(BlochState(0.0, 0.0))
    assert np.allclose(analytic_single_qubit(1.0, 0.1, rho0, 1e4), np.eye(2) / 2, atol=1e-8)
    ts = np.linspace(0, 30, 301)
    z = bloch_vector(analytic_single_qubit(1.0, 0.0, rho0, ts))[:, 2]
    assert np.allclose(z, np.cos(ts), atol=1e-10)
    with pytest.raises(UnsupportedInputError):
        analytic_single_qubit(1.0, 1.0, rho0, 1.0)


def test_analytic_rapidities_closed_form():
    w = single_qubit_rapidities(1.0, 0.1)
    assert np.allclose(np.sort_complex(w), np.sort_complex(RAPIDITIES), atol=1e-12)


@pytest.mark.parametrize("name", SMALL)
def test_sensitivity_is_hermitian_traceless(name):
    liou = MODELS[name](0.05)
    rho0 = rand_density(np.random.default_rng(6), liou.dim)
    rho, drho = propagate_with_lambda_derivative(liou, rho0, 0.0)
    assert not np.any(drho)
    for t in (0.3, 2.0, 9.0):
        rho, drho = propagate_with_lambda_derivative(liou, rho0, t)
        assert np.max(np.abs(drho - drho.conj().T)) < 1e-9
        assert abs(np.trace(drho)) < 1e-10


def test_sensitivity_matches_fd_single_qubit():
    rho0 = bloch_pure_state(BlochState(0.0, 0.0))
    _, drho = propagate_with_lambda_derivative(qubit(0.01), rho0, 5.0)
    d = 1e-6
    fd = (propagate(qubit(0.01 + d), rho0, 5.0) - propagate(qubit(0.01 - d), rho0, 5.0)) / (2 * d)
    assert np.max(np.abs(drho - fd)) < 1e-6


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("method", ["expm", "ode"])
def test_sensitivity_matches_fd_all_small_models(name, method):
    lam, t = 0.07, 4.0
    rho0 = rand_density(np.random.default_rng(7), MODELS[name](lam).dim)
    _, drho = propagate_with_lambda_derivative(MODELS[name](lam), rho0, t, method=method)
    d = 1e-5
    fd = (propagate(MODELS[name](lam + d), rho0, t) - propagate(MODELS[name](lam - d), rho0, t)) / (2 * d)
    assert np.max(np.abs(drho - fd)) <= max(1e-6, 1e-4 * np.max(np.abs(drho)))


def test_series_matches_pointwise():
    liou = MODELS["two-qubit"](0.1)
    rho0 = rand_density(np.random.default_rng(8), 4)
    chunks = list(iter_series(liou, rho0, 10.0, 41, derivative=True, chunk=7))
    ts = np.concatenate([c[0] for c in chunks])
    rhos = np.concatenate([c[1] for c in chunks])
    drhos = np.concatenate([c[2] for c in chunks])
    assert np.allclose(ts, np.linspace(0, 10, 41))
    for k in (0, 13, 40):
        rho, drho = propagate_with_lambda_derivative(liou, rho0, ts[k])
        assert np.max(np.abs(rhos[k] - rho)) < 1e-10
        assert np.max(np.abs(drhos[k] - drho)) < 1e-9


def test_spectrum_single_qubit_oracle():
    spec = spectrum(qubit(0.1))
    assert np.max(np.abs(spec.rapidities - RAPIDITIES)) < 1e-9
    assert abs(spec.gap - 0.1) < 1e-12
    assert np.allclose(steady_state(qubit(0.1), spec), np.eye(2) / 2, atol=1e-10)


@pytest.mark.parametrize("lam", [0.05, 0.4, 0.9, 1.3])
def test_minus_two_lambda_mode_and_gap(lam):
    spec = spectrum(qubit(lam))
    assert np.min(np.abs(spec.rapidities + 2 * lam)) < 1e-9
    if lam < 1:
        assert abs(spec.gap - lam) < 1e-9


@pytest.mark.parametrize("name", SMALL + ["ising-4"])
def test_spectral_properties(name):
    spec = spectrum(MODELS[name](0.2))
    w = spec.rapidities
    # (ii) left half-plane
    assert np.max(w.real) <= 1e-9
    # (i) closed under conjugation
    assert max(np.min(np.abs(w - np.conj(z))) for z in w) <= 1e-9
    # (iii) a single null mode
    assert np.sum(np.abs(w) <= 1e-9) == 1
    # biorthonormality
    overlap = spec.left.conj().T @ spec.right
    assert np.max(np.abs(overlap - np.eye(len(w)))) <= 1e-8
    # ordering
    re = np.round(w.real, 10)
    assert np.all(np.diff(re) <= 0)


@pytest.mark.parametrize("name", ["qubit", "two-qubit"])
def test_spectral_reconstruction(name):
    liou = MODELS[name](0.1)
    spec = spectrum(liou)
    rho0 = rand_density(np.random.default_rng(9), liou.dim)
    for t in (0.5, 5.0, 25.0):
        rho = unvec(spec.evolve(vec(rho0), t), liou.dim)
        assert np.max(np.abs(rho - propagate(liou, rho0, t))) < 1e-7


def test_steady_states():
    assert np.allclose(steady_state(MODELS["ising-2"](0.1)), np.eye(8) / 8, atol=1e-7)
    with pytest.raises(AmbiguityError) as err:
        steady_state(qubit(0.0))
    assert err.value.dimension > 1


def test_spectrum_refuses_large():
    big = liouvillian(IsingExperiment(n_sites=6), 0.1)
    with pytest.raises(UnsupportedInputError):
        spectrum(big)
