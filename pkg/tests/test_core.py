import numpy as np
import pytest

from kerrcircuit.core import (
    DimensionMismatchError,
    HilbertSpace,
    NegativeRateError,
    Operator,
    QuantumState,
    SteadyStateError,
    coherent_amplitudes,
    destroy,
    eig_hermitian,
    embed,
    evolve_lindblad,
    expectation,
    fock_ket,
    liouvillian_matrix,
    matrix_unit,
    number,
    purity,
    steady_state,
    tensor,
    trace_distance,
)

TWO_PI = 2.0 * np.pi


def test_destroy_commutator():
    n = 8
    a = destroy(n)
    comm = a @ a.conj().T - a.conj().T @ a
    # truncation corrupts only the top diagonal entry
    assert np.allclose(np.diag(comm)[:-1], 1.0)
    assert np.allclose(a.conj().T @ a, number(n))


def test_matrix_unit():
    e = matrix_unit(4, 1, 2)
    assert e[1, 2] == 1.0 and np.count_nonzero(e) == 1


def test_tensor_dimensions_and_embedding():
    space = HilbertSpace((2, 3))
    op = tensor(space, [np.eye(2), destroy(3)])
    assert op.matrix.shape == (6, 6)
    same = embed(space, 1, destroy(3))
    assert np.allclose(op.matrix, same.matrix)
    with pytest.raises(DimensionMismatchError):
        tensor(space, [np.eye(3), destroy(3)])


def test_fock_and_coherent_states():
    space = HilbertSpace((2, 4))
    psi = fock_ket(space, (1, 2))
    assert psi.vector[1 * 4 + 2] == 1.0
    amp = coherent_amplitudes(1.3, 30)
    assert np.isclose(np.linalg.norm(amp), 1.0)
    # mean photon number |alpha|^2 for a generous cutoff
    assert np.isclose(np.sum(np.arange(30) * np.abs(amp) ** 2), 1.69, atol=1e-6)


def test_eig_hermitian_phase_convention():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    m = m + m.conj().T
    op = Operator(HilbertSpace((5,)), m)
    w, v = eig_hermitian(op)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose(v @ np.diag(w) @ v.conj().T, m)
    for col in v.T:
        assert col[np.argmax(np.abs(col))].real > 0
        assert abs(col[np.argmax(np.abs(col))].imag) < 1e-12


def test_lindblad_decay_rate():
    # a single decay channel at rate gamma empties the excited state as
    # exp(-2 * 2*pi*gamma * t) under the convention L[c] = 2 c.c† - {c†c, .}
    space = HilbertSpace((2,))
    h = Operator(space, np.zeros((2, 2)))
    gamma = 0.05
    c = Operator(space, matrix_unit(2, 0, 1))
    rho0 = fock_ket(space, (1,)).to_density()
    times = np.linspace(0.0, 10.0, 6)
    states = evolve_lindblad(h, [(gamma, c)], QuantumState(space, density=rho0), times)
    pops = [s.density[1, 1].real for s in states]
    assert np.allclose(pops, np.exp(-2 * TWO_PI * gamma * times), atol=1e-7)


def test_rabi_oscillation_frequency():
    # H = (Omega/2)(sx) in GHz units gives population period 1/Omega ns
    space = HilbertSpace((2,))
    omega = 0.25
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    h = Operator(space, 0.5 * omega * sx)
    times = np.linspace(0.0, 1.0 / omega, 33)
    states = evolve_lindblad(h, [], fock_ket(space, (0,)), times)
    pops = np.array([s.density[1, 1].real for s in states])
    assert np.isclose(pops[16], 1.0, atol=1e-6)  # half period: full inversion
    assert np.isclose(pops[-1], 0.0, atol=1e-6)


def test_negative_rate_rejected():
    space = HilbertSpace((2,))
    h = Operator(space, np.zeros((2, 2)))
    c = Operator(space, matrix_unit(2, 0, 1))
    with pytest.raises(NegativeRateError):
        evolve_lindblad(h, [(-0.1, c)], fock_ket(space, (0,)), [0.0, 1.0])


def test_liouvillian_matches_evolution():
    rng = np.random.default_rng(11)
    space = HilbertSpace((3,))
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    h = Operator(space, m + m.conj().T)
    c = Operator(space, destroy(3))
    L = liouvillian_matrix(h, [(0.02, c)])
    from scipy.linalg import expm

    rho0 = fock_ket(space, (2,)).to_density()
    t = 0.7
    direct = (expm(L * t) @ rho0.reshape(-1)).reshape(3, 3)
    states = evolve_lindblad(
        h, [(0.02, c)], QuantumState(space, density=rho0), [0.0, t], tol=1e-11
    )
    assert np.allclose(direct, states[-1].density, atol=1e-8)


def test_steady_state_driven_qubit():
    # driven lossy two-level system; steady state matches the long-time limit
    space = HilbertSpace((2,))
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    h = Operator(space, 0.1 * sx)
    c = Operator(space, matrix_unit(2, 0, 1))
    ss = steady_state(h, [(0.05, c)])
    states = evolve_lindblad(
        h, [(0.05, c)], fock_ket(space, (0,)), [0.0, 400.0], tol=1e-10
    )
    assert trace_distance(ss, states[-1]) < 1e-6
    assert np.isclose(np.trace(ss.density).real, 1.0, atol=1e-12)


def test_steady_state_degenerate_raises():
    # no decay: every mixture of energy eigenstates is stationary
    space = HilbertSpace((2,))
    h = Operator(space, np.diag([0.0, 1.0]).astype(complex))
    with pytest.raises(SteadyStateError):
        steady_state(h, [])


def test_purity_and_trace_distance():
    space = HilbertSpace((2,))
    pure = fock_ket(space, (0,))
    mixed = QuantumState(space, density=0.5 * np.eye(2, dtype=complex))
    assert np.isclose(purity(pure), 1.0)
    assert np.isclose(purity(mixed), 0.5)
    assert np.isclose(trace_distance(pure, mixed), 0.5)
    assert trace_distance(pure, pure) < 1e-14


def test_expectation_value():
    space = HilbertSpace((3,))
    psi = fock_ket(space, (2,))
    n = Operator(space, number(3))
    assert np.isclose(expectation(psi, n).real, 2.0)
