import numpy as np
import pytest

from kerrcircuit.core import expectation, fock_ket
from kerrcircuit.nscheme import (
    EliminationInvalidError,
    NSchemeParams,
    Truncation,
    adiabatic_check,
    build_hsys,
    collapse_operators,
    conserved_excitations,
    mode_op,
    sigma,
    simulate,
)


def test_params_defaults_and_gamma5():
    p = NSchemeParams()
    assert p.g1 == 0.3 and p.omega_c == 1.5 and p.big_delta == 1.5
    assert p.with_(gamma4=2e-4, gamma_phi=3e-4).gamma5 == pytest.approx(5e-4)


def test_negative_rate_rejected():
    with pytest.raises(ValueError):
        NSchemeParams(gamma1=-1e-3)


@pytest.mark.parametrize("convention", ["hermitian", "antihermitian"])
def test_hamiltonian_hermitian(convention):
    p = NSchemeParams(delta=0.1)
    h = build_hsys(p, Truncation(2, 2), convention)
    assert h.is_hermitian()


def test_conventions_are_unitarily_equivalent():
    # the two coupling phase conventions share one spectrum
    p = NSchemeParams(delta=0.07)
    t = Truncation(2, 2)
    wa = np.linalg.eigvalsh(build_hsys(p, t, "hermitian").matrix)
    wb = np.linalg.eigvalsh(build_hsys(p, t, "antihermitian").matrix)
    assert np.allclose(wa, wb, atol=1e-12)


def test_collapse_channel_count():
    t = Truncation(1, 1)
    none = collapse_operators(NSchemeParams(), t)
    assert none == []
    p = NSchemeParams(
        gamma1=1e-4, gamma2=1e-4, gamma3=1e-4, gamma4=1e-4, gamma_phi=1e-4,
        kappa1=1e-5, kappa2=1e-5,
    )
    assert len(collapse_operators(p, t)) == 7


def test_excitation_numbers_conserved():
    p = NSchemeParams(delta=0.1)
    t = Truncation(2, 2)
    h = build_hsys(p, t).matrix
    for op in conserved_excitations(t):
        comm = h @ op.matrix - op.matrix @ h
        assert np.max(np.abs(comm)) < 1e-12


def test_adiabatic_check_operating_point():
    rep = adiabatic_check(NSchemeParams())
    assert rep.r1 == pytest.approx(0.04)
    assert rep.r2 == pytest.approx(0.2)
    assert rep.passed


def test_adiabatic_check_rejects_degenerate():
    with pytest.raises(EliminationInvalidError):
        adiabatic_check(NSchemeParams(omega_c=0.0))
    with pytest.raises(EliminationInvalidError):
        adiabatic_check(NSchemeParams(big_delta=0.0))


def test_simulate_preserves_trace_and_populations():
    p = NSchemeParams(gamma1=1e-3, gamma2=1e-3, gamma3=1e-3)
    t = Truncation(1, 1)
    rho0 = fock_ket(t.space, (0, 1, 1))
    times = np.linspace(0.0, 5.0, 11)
    traj = simulate(p, t, rho0, times)
    totals = traj.populations.sum(axis=0)
    assert np.allclose(totals, 1.0, atol=1e-7)
    assert np.all(traj.populations > -1e-9)
    assert traj.populations[0, 0] == pytest.approx(1.0)
    assert traj.n1[0] == pytest.approx(1.0)


def test_sigma_and_mode_operators():
    t = Truncation(1, 1)
    s13 = sigma(t.space, 1, 3)
    psi3 = fock_ket(t.space, (2, 0, 0))  # atom level |3> is index 2
    psi1 = fock_ket(t.space, (0, 0, 0))
    assert expectation(
        psi1, s13
    ) == pytest.approx(0.0)
    assert (s13.matrix @ psi3.vector)[0] == pytest.approx(1.0)
    a1 = mode_op(t.space, 1)
    assert np.allclose(a1.matrix @ fock_ket(t.space, (0, 1, 0)).vector,
                       fock_ket(t.space, (0, 0, 0)).vector)
