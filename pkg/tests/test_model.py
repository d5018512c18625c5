import numpy as np
import pytest

from collapseprobe.errors import InvalidArgumentError
from collapseprobe.linalg import check_density_matrix, gibbs_state, partial_trace
from collapseprobe.model import (
    IDENTITY_2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    BlochState,
    DissipatorSpec,
    IsingChainSpec,
    NoiseSpec,
    ProbeCouplingSpec,
    TwoQubitProbeModel,
    bloch_pure_state,
    bloch_vector,
    collapse_dissipator_spec,
    initial_product_state,
    ising_hamiltonian,
    ising_probe_hamiltonian,
    pauli_site,
    two_qubit_hamiltonian,
)

ISING_N2_GROUND = -2.23606797749979  # sympy, tests/oracles
KERNEL_F12 = 0.9394130628134758  # exp(-1/16)


def test_pauli_conventions():
    assert np.allclose(pauli_site("z", 1, 1), np.diag([-1, 1]))
    assert np.allclose(pauli_site("x", 2, 2), np.kron(IDENTITY_2, SIGMA_X))
    assert np.allclose(SIGMA_X @ SIGMA_Y - SIGMA_Y @ SIGMA_X, 2j * SIGMA_Z)
    with pytest.raises(InvalidArgumentError):
        pauli_site("z", 4, 3)
    with pytest.raises(InvalidArgumentError):
        pauli_site("w", 1, 3)


def test_z_strings_commute():
    for i in range(1, 4):
        for j in range(1, 4):
            a, b = pauli_site("z", i, 3), pauli_site("z", j, 3)
            assert np.allclose(a @ b, b @ a)


def test_two_qubit_hamiltonian():
    h = two_qubit_hamiltonian(TwoQubitProbeModel(1.0, 0.3, 0.2))
    assert np.allclose(h, h.conj().T) and abs(np.trace(h)) < 1e-12
    w = np.linalg.eigvalsh(h)
    assert np.allclose(w, -w[::-1])
    free = np.linalg.eigvalsh(two_qubit_hamiltonian(TwoQubitProbeModel(1.0, 0.3, 0.0)))
    assert np.allclose(free, sorted(s * 0.5 + p * 0.15 for s in (1, -1) for p in (1, -1)))


def test_ising_small_cases():
    assert np.allclose(ising_hamiltonian(IsingChainSpec(1, 0.7, 1.0)), -0.7 * SIGMA_X)
    w = np.linalg.eigvalsh(ising_hamiltonian(IsingChainSpec(2, 1.0, 1.0)))
    assert np.isclose(w[0], ISING_N2_GROUND, atol=1e-12)


def test_ising_classical_limit():
    # h must be positive, so take it tiny and compare against the h=0 spectrum
    w = np.linalg.eigvalsh(ising_hamiltonian(IsingChainSpec(3, 1e-12, 1.0)))
    assert np.allclose(w, [-2, -2, 0, 0, 0, 0, 2, 2], atol=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_ising_hermitian_traceless_z2(n):
    h = ising_hamiltonian(IsingChainSpec(n, 0.8, 1.3))
    assert np.max(np.abs(h - h.conj().T)) < 1e-12 and abs(np.trace(h)) < 1e-12
    flip = np.eye(1)
    for _ in range(n):
        flip = np.kron(flip, SIGMA_X)
    assert np.max(np.abs(flip @ h - h @ flip)) < 1e-12


def test_probe_hamiltonian_is_longer_chain():
    chain = IsingChainSpec(3, 1.0, 1.0)
    h = ising_probe_hamiltonian(chain, ProbeCouplingSpec(1.0, 1.0))
    assert np.allclose(h, ising_hamiltonian(IsingChainSpec(4, 1.0, 1.0)))


def test_probe_hamiltonian_decoupled():
    chain = IsingChainSpec(2, 1.0, 1.0)
    h = ising_probe_hamiltonian(chain, ProbeCouplingSpec(0.5, 0.0))
    wc = np.linalg.eigvalsh(ising_hamiltonian(chain))
    expect = np.sort([a + b for a in wc for b in (-0.5, 0.5)])
    assert np.allclose(np.linalg.eigvalsh(h), expect)


def test_probe_hamiltonian_term_by_term():
    h = ising_probe_hamiltonian(IsingChainSpec(2, 1.1, 0.9), ProbeCouplingSpec(0.5, 0.4))
    z = lambda k: pauli_site("z", k, 3)  # noqa: E731
    x = lambda k: pauli_site("x", k, 3)  # noqa: E731
    ref = -1.1 * (x(1) + x(2)) - 0.9 * z(1) @ z(2) - 0.5 * x(3) - 0.4 * z(2) @ z(3)
    assert np.allclose(h, ref)


def test_bloch_states():
    assert np.allclose(bloch_pure_state(BlochState(0, 0)), np.diag([0, 1]))
    assert np.allclose(bloch_pure_state(BlochState(np.pi, 1.3)), np.diag([1, 0]))
    assert np.allclose(bloch_pure_state(BlochState(np.pi / 2, 0)), np.full((2, 2), 0.5))
    with pytest.raises(InvalidArgumentError):
        BlochState(4.0, 0.0)


def test_bloch_vector_is_unit_for_pure_states():
    for th in np.linspace(0, np.pi, 7):
        for ph in np.linspace(0, 2 * np.pi, 5, endpoint=False):
            rho = bloch_pure_state(BlochState(th, ph))
            assert abs(np.trace(rho @ rho) - 1) < 1e-12
            assert abs(np.linalg.norm(bloch_vector(rho)) - 1) < 1e-12
    # theta=0 is |1>, which has sz = +1
    assert np.allclose(bloch_vector(bloch_pure_state(BlochState(0, 0))), [0, 0, 1])


def test_initial_product_state():
    hs = ising_hamiltonian(IsingChainSpec(2, 1.0, 1.0))
    probe = BlochState(np.pi, 0.0)
    rho = initial_product_state(hs, 0.0, probe)
    assert np.allclose(rho, np.kron(np.eye(4) / 4, bloch_pure_state(probe)))
    rho = initial_product_state(hs, 0.1, probe)
    check_density_matrix(rho)
    assert np.allclose(partial_trace(rho, [2, 2, 2], keep=[0, 1]), gibbs_state(hs, 0.1),
                       atol=1e-12)


def test_local_dissipator_terms():
    spec = collapse_dissipator_spec(NoiseSpec("local", 0.1), 3)
    assert spec.terms == ((1, 1, 1.0), (2, 2, 1.0), (3, 3, 1.0))


def test_correlated_dissipator_kernel():
    spec = collapse_dissipator_spec(NoiseSpec("correlated", 0.1, 2.0), 4)
    w = spec.weight_matrix()
    assert np.isclose(w[0, 1], KERNEL_F12, rtol=1e-14)
    narrow = collapse_dissipator_spec(NoiseSpec("correlated", 0.1, 1e-3), 4).weight_matrix()
    off = narrow - np.diag(np.diag(narrow))
    assert np.max(off) < 1e-100
    assert np.allclose(narrow, collapse_dissipator_spec(NoiseSpec("local", 0.1), 4).weight_matrix())


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("rc", [0.5, 1.0, 2.0, 5.0])
def test_correlated_weights_symmetric_psd(n, rc):
    w = collapse_dissipator_spec(NoiseSpec("correlated", 0.0, rc), n).weight_matrix()
    assert np.allclose(w, w.T)
    assert np.linalg.eigvalsh(w)[0] >= -1e-12


def test_dissipator_rejects_probe_and_bad_weights():
    with pytest.raises(InvalidArgumentError):
        collapse_dissipator_spec(NoiseSpec("local", 0.1), 3, sites=[1, 4])
    with pytest.raises(InvalidArgumentError):
        DissipatorSpec(((1, 2, 1.0),))  # not symmetric
    with pytest.raises(InvalidArgumentError):
        DissipatorSpec(((1, 1, 1.0), (2, 2, 1.0), (1, 2, 2.0), (2, 1, 2.0)))  # not PSD


def test_parameter_records_validate():
    with pytest.raises(InvalidArgumentError):
        IsingChainSpec(0)
    with pytest.raises(InvalidArgumentError):
        NoiseSpec("correlated", 0.1, 0.0)
    with pytest.raises(InvalidArgumentError):
        TwoQubitProbeModel(omega_p=-1.0)
