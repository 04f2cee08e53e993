import numpy as np
import pytest

from kerrcircuit.elimination import (
    EliminationSingularError,
    chi_closed_forms,
    conditional_phase_oracle,
    stationary_moments,
    susceptibilities,
    sweep,
)
from kerrcircuit.nscheme import EliminationInvalidError, NSchemeParams, Truncation

OPERATING_POINT = NSchemeParams()  # g1 = g2 = 0.3, Omega_c = 1.5, Delta = 1.5 GHz


def test_chi3_operating_point():
    s = susceptibilities(OPERATING_POINT)
    assert s.chi3.real == pytest.approx(2.4e-3, rel=1e-6)
    # g^2 captured by chi1 vanishes without dephasing of the |1>-|2> coherence
    assert abs(s.chi1) < 1e-12


def test_chi1_closed_form_with_gamma5():
    p = OPERATING_POINT.with_(gamma4=5e-4, delta=0.02, gamma1=3e-4, gamma2=2e-4)
    s = susceptibilities(p)
    chi1_cf, _ = chi_closed_forms(p)
    assert s.chi1 == pytest.approx(chi1_cf, rel=1e-9)


def test_chi3_closed_form_with_gamma3():
    p = OPERATING_POINT.with_(gamma3=5e-4)
    s = susceptibilities(p)
    _, chi3_cf = chi_closed_forms(p)
    assert s.chi3 == pytest.approx(chi3_cf, rel=1e-9)
    assert s.relative_decay == pytest.approx(p.gamma3 / p.big_delta, rel=1e-6)


def test_stationary_coefficients_match_closed_forms():
    # the full coefficient table of the antisymmetric-phase convention, at
    # 50 random positive rate sets
    rng = np.random.default_rng(2024)
    for _ in range(50):
        g1, g2 = rng.uniform(0.05, 0.4, 2)
        om = rng.uniform(0.8, 3.0)
        dlt = rng.uniform(-0.2, 0.2)
        big = rng.uniform(0.8, 3.0)
        r = rng.uniform(1e-4, 2e-3, 3)
        p = NSchemeParams(g1=g1, g2=g2, omega_c=om, delta=dlt, big_delta=big,
                          gamma1=r[0], gamma2=r[1], gamma3=r[2])
        m = stationary_moments(p, convention="antihermitian", require_adiabatic=False)
        d = r[2] + 1j * big
        expected = {
            ((1, 1), (0, 0, 0, 0)): 1.0,
            ((1, 1), (1, 1, 0, 0)): -g1**2 / om**2,
            ((2, 2), (1, 1, 0, 0)): g1**2 / om**2,
            ((1, 2), (0, 1, 0, 0)): -g1 / om,
            ((1, 2), (1, 2, 0, 0)): g1**3 / om**3,
            ((1, 2), (0, 1, 1, 1)): (r[0] + r[1] + 1j * dlt) * g1 * g2**2 / (d * om**3),
            ((1, 3), (0, 1, 1, 1)): -g1 * g2**2 / (d * om**2),
            ((1, 4), (0, 1, 0, 1)): g1 * g2 / (d * om),
            ((2, 4), (1, 1, 0, 1)): -g1**2 * g2 / (d * om**2),
        }
        for (tgt, mono), want in expected.items():
            got = m[tgt].coefficient(mono)
            assert got == pytest.approx(want, rel=1e-10), (tgt, mono)
        for tgt in ((3, 3), (4, 4), (3, 2), (3, 4)):
            for mono, c in m[tgt].terms.items():
                assert abs(c) < 1e-10, (tgt, mono)
        # perfect-transparency zeros at first order
        assert abs(m[(1, 3)].coefficient((0, 1, 0, 0))) < 1e-12
        assert abs(m[(2, 4)].coefficient((0, 0, 0, 1))) < 1e-12


def test_chi3_independent_of_gamma12():
    rng = np.random.default_rng(5)
    base = OPERATING_POINT.with_(gamma3=4e-4)
    ref = susceptibilities(base).chi3
    for _ in range(5):
        g1v, g2v = rng.uniform(1e-4, 2e-3, 2)
        s = susceptibilities(base.with_(gamma1=g1v, gamma2=g2v))
        assert s.chi3 == pytest.approx(ref, rel=1e-10)


def test_factors_at_half_mhz_gamma5():
    p = OPERATING_POINT.with_(gamma4=5e-4, gamma3=5e-4, gamma1=5e-4, gamma2=5e-4)
    s = susceptibilities(p)
    assert 0 < s.dispersion_factor < 1e-2
    assert abs(s.linear_absorption_factor) < 1e-2
    assert 0 < s.nonlinear_absorption_factor < 1e-2


def test_requires_positive_pump():
    with pytest.raises(EliminationInvalidError):
        susceptibilities(OPERATING_POINT.with_(omega_c=0.0))


def test_singular_at_zero_detuning_without_decay():
    with pytest.raises((EliminationSingularError, EliminationInvalidError)):
        susceptibilities(OPERATING_POINT.with_(big_delta=0.0), require_adiabatic=False)


def test_adiabatic_gate():
    bad = OPERATING_POINT.with_(g1=1.0)  # r1 = 0.44
    with pytest.raises(EliminationInvalidError):
        susceptibilities(bad)
    susceptibilities(bad, require_adiabatic=False)  # override works


def test_oracle_agrees_with_elimination():
    r = conditional_phase_oracle(OPERATING_POINT)
    s = susceptibilities(OPERATING_POINT)
    assert abs(r.chi3.real - s.chi3.real) / s.chi3.real < 0.05


def test_oracle_converges_with_adiabaticity():
    tight = OPERATING_POINT.with_(omega_c=3.0, big_delta=6.0)
    r = conditional_phase_oracle(tight)
    s = susceptibilities(tight)
    assert abs(r.chi3.real - s.chi3.real) / s.chi3.real < 0.02


def test_oracle_decay_ratio():
    p = OPERATING_POINT.with_(gamma3=5e-4)
    r = conditional_phase_oracle(p, horizon=2000.0, samples=20001)
    ratio = r.chi3.imag / r.chi3.real
    assert ratio == pytest.approx(p.gamma3 / p.big_delta, rel=0.1)


def test_sweep_table_shape_and_errors():
    table = sweep(
        OPERATING_POINT,
        ("omega_ex", [1.0, 1.5]),
        ("gamma5", [0.0, 5e-4]),
    )
    assert len(table.cells) == 2 and len(table.cells[0]) == 2
    assert table.metadata["g1"] == 0.3
    # a singular cell is recorded, not raised
    bad = sweep(OPERATING_POINT.with_(big_delta=0.0), ("omega_ex", [1.5]), ("gamma5", [0.0]))
    assert isinstance(bad.cells[0][0], str)


def test_sweep_inverse_square_law():
    table = sweep(OPERATING_POINT, ("omega_ex", [0.8, 1.5, 3.0]), ("gamma5", [0.0]))
    vals = np.array([c.chi3.real for row in table.cells for c in row])
    scaled = vals * np.array([0.8, 1.5, 3.0]) ** 2
    assert np.allclose(scaled, scaled[0], rtol=1e-6)
