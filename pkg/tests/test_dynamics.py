import numpy as np
import pytest

from kerrcircuit.dynamics import (
    KerrParams,
    cat_protocol,
    coherent_overlap,
    compare_full_vs_effective,
    fidelity,
    kerr_evolve,
    two_mode_coherent,
)
from kerrcircuit.nscheme import NSchemeParams, Truncation

CHI3 = 2.4e-3  # GHz


def test_kerr_evolve_single_fock_phase():
    amp = np.zeros((3, 3), dtype=complex)
    amp[1, 2] = 1.0
    out = kerr_evolve(KerrParams(chi3=CHI3), amp, t=10.0)
    # phase 2*pi * chi3 * t * n1 * n2
    assert out.amplitudes[1, 2] == pytest.approx(np.exp(1j * 2 * np.pi * CHI3 * 10.0 * 2))
    assert out.success_probability == pytest.approx(1.0)


def test_kerr_evolve_absorption():
    amp = np.zeros((2, 2), dtype=complex)
    amp[1, 1] = 1.0
    chi = CHI3 + 1j * 8e-7
    out = kerr_evolve(KerrParams(chi3=chi), amp, t=100.0)
    assert out.success_probability == pytest.approx(np.exp(-2 * 2 * np.pi * 8e-7 * 100.0))
    assert np.isclose(np.linalg.norm(out.amplitudes), 1.0)


def test_gain_rejected():
    with pytest.raises(ValueError):
        KerrParams(chi3=CHI3 - 1e-9j)


def test_coherent_overlap_values():
    assert coherent_overlap(2.0, 2.0) == pytest.approx(1.0)
    amp = abs(coherent_overlap(2.0, -2.0))
    assert amp == pytest.approx(np.exp(-8.0))
    assert amp**2 == pytest.approx(np.exp(-16.0), abs=1e-12)


def test_cat_protocol_ideal():
    result = cat_protocol(KerrParams(chi3=CHI3), alpha=2.0, beta=2.0, n_max=20)
    assert result.t_gate == pytest.approx(1.0 / (2 * CHI3))  # 208.33 ns
    assert result.fidelity > 1 - 1e-8
    assert result.success_probability == pytest.approx(1.0)


def test_cat_protocol_four_branches():
    # the target is an equal-weight superposition of four coherent branches;
    # overlap with each branch is 1/2 up to the tiny branch overlaps
    result = cat_protocol(KerrParams(chi3=CHI3), alpha=2.0, beta=2.0, n_max=20)
    for sa, sb, sign in ((1, 1, 1), (-1, 1, 1), (1, -1, 1), (-1, -1, -1)):
        branch = two_mode_coherent(2.0 * sa, 2.0 * sb, 20, 20).reshape(-1)
        ov = np.vdot(branch, result.target.reshape(-1))
        assert ov * sign == pytest.approx(0.5, abs=1e-3)


def test_cat_protocol_lossy():
    chi = CHI3 * (1 + 1j * 3.33e-4)  # relative decay from the damping channel
    result = cat_protocol(KerrParams(chi3=chi), n_max=20)
    assert result.fidelity > 0.98
    assert 0.9 < result.success_probability < 1.0


def test_fidelity_shape_check():
    with pytest.raises(ValueError):
        fidelity(np.zeros((2, 2)), np.zeros((3, 3)))


def test_full_model_accumulates_kerr_phase():
    p = NSchemeParams()
    chi3 = 2.4e-3
    times = np.linspace(0.0, 100.0, 6)
    res = compare_full_vs_effective(
        p, chi3, Truncation(2, 2), alpha=0.5, beta=0.5, times=times
    )
    # adiabatic corrections keep the effective picture good to a few percent
    assert res.infidelity[0] < 1e-10
    assert np.all(res.infidelity < 0.01)
    # the worst per-Fock phase is dominated by barely populated edge
    # components; it stays bounded while the fidelity stays high
    assert np.all(res.phase_error < 1.0)
