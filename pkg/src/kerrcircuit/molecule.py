"""Coupled-Cooper-pair-box artificial molecule.

Two identical charge qubits joined by a coupling SQUID form a four-level
system with an N-shaped transition graph.  This module builds the reduced
4x4 Hamiltonian at the co-degeneracy point, its closed-form eigenstructure,
the noise/drive operators in the eigenbasis, the flux-pump Hamiltonian, and
the capacitive coupling factors to the two transmission-line resonators.

Energies are frequency/2pi in GHz; circuit geometry is in SI units.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.constants import e as ELEMENTARY_CHARGE, h as PLANCK, hbar as HBAR

from .core import HilbertSpace, Operator, eig_hermitian
from .nscheme import NSchemeParams

TWO_PI = 2.0 * np.pi

SPACE4 = HilbertSpace((2, 2))


class CoDegeneracyError(ValueError):
    """Gate charges off the co-degeneracy point without an explicit override."""


class XPMPurityError(ValueError):
    def __init__(self, message: str, residuals: dict[str, float]):
        super().__init__(message)
        self.residuals = residuals


@dataclass(frozen=True)
class MoleculeParams:
    """Circuit energies of the coupled-CPB molecule (GHz, dimensionless, farads)."""

    e_j: float = 20.0
    e_m: float = 5.0
    b0: float = 0.0
    n_g1: float = 0.5
    n_g2: float = 0.5
    c_sigma: float = 600e-18
    c_m: float = 30e-18
    # optional asymmetric extension, used only for validating the reduction
    e_c1: float | None = None
    e_c2: float | None = None

    def __post_init__(self):
        if self.e_j <= 0 or self.e_m <= 0:
            raise ValueError("E_J and E_m must be positive")
        if not 0.0 <= self.b0 <= 1.0:
            raise ValueError(f"b0 = {self.b0} outside [0, 1]")

    @property
    def at_codegeneracy(self) -> bool:
        return self.n_g1 == 0.5 and self.n_g2 == 0.5


@dataclass(frozen=True)
class LevelStructure:
    energies: tuple[float, float, float, float]
    theta: float
    e_mn: float
    e_total: float
    e31: float
    e42: float
    e32: float
    eigenvectors: np.ndarray  # columns |1>..|4> in the {|00>,|01>,|10>,|11>} basis


@dataclass(frozen=True)
class PumpParams:
    omega_ex: float = 1.5  # modulation amplitude, GHz
    omega_p: float = 10.0  # drive frequency, GHz

    def __post_init__(self):
        if self.omega_ex < 0:
            raise ValueError("pump amplitude must be >= 0")


@dataclass(frozen=True)
class TLRGeometry:
    """One transmission-line resonator: fullwave mode plus two coupling taps."""

    length: float  # m
    frequency: float  # fullwave frequency, GHz
    cap_per_length: float  # F/m
    c1: float  # coupling capacitor to qubit 1, F
    c2: float  # coupling capacitor to qubit 2, F
    x1: float  # tap positions in [-L/2, L/2], m
    x2: float

    def __post_init__(self):
        half = self.length / 2.0
        for x in (self.x1, self.x2):
            if not -half <= x <= half:
                raise ValueError(f"tap position {x} outside [-L/2, L/2]")
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("coupling capacitances must be >= 0")


@dataclass(frozen=True)
class CouplingGeometry:
    tlr_a: TLRGeometry
    tlr_b: TLRGeometry


@dataclass(frozen=True)
class CouplingFactors:
    """Bare (h) and eigenbasis (g) coupling factors, GHz."""

    h_a1: float
    h_a2: float
    h_b1: float
    h_b2: float
    g_a1: float
    g_a2: float
    g_b1: float
    g_b2: float


def _require_codegeneracy(params: MoleculeParams, allow_bias: bool):
    if not params.at_codegeneracy and not allow_bias:
        raise CoDegeneracyError(
            "four-level reduction is only valid at n_g1 = n_g2 = 1/2; "
            "pass allow_bias=True to override"
        )


def build_h0(params: MoleculeParams, allow_bias: bool = False) -> Operator:
    """Reduced 4x4 molecule Hamiltonian in the two-qubit basis {|00>,|01>,|10>,|11>}.

    At the co-degeneracy point the Hamiltonian is block diagonal over
    {|00>,|11>} and {|01>,|10>} with identical off-diagonal coupling
    E_m*(1 - b0); this is the form whose spectrum matches the closed-form
    level energies used everywhere downstream.
    """
    _require_codegeneracy(params, allow_bias)
    ej, em, b0 = params.e_j, params.e_m, params.b0
    off = em * (1.0 - b0)
    h = np.array(
        [
            [ej - b0 * em, 0.0, 0.0, off],
            [0.0, b0 * em, off, 0.0],
            [0.0, off, b0 * em, 0.0],
            [off, 0.0, 0.0, -ej - b0 * em],
        ],
        dtype=complex,
    )
    if not params.at_codegeneracy:
        # linear charge-bias terms, only meaningful with the charging energies given
        if params.e_c1 is None or params.e_c2 is None:
            raise CoDegeneracyError("off-degeneracy bias requires e_c1 and e_c2")
        eb1 = 2.0 * (params.e_c1 * (1 - 2 * params.n_g1) + em * (1 - 2 * params.n_g2))
        eb2 = 2.0 * (params.e_c2 * (1 - 2 * params.n_g2) + em * (1 - 2 * params.n_g1))
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        eye = np.eye(2, dtype=complex)
        h += 0.5 * (eb1 * np.kron(sx, eye) + eb2 * np.kron(eye, sx))
    return Operator(SPACE4, h)


def level_structure(params: MoleculeParams, allow_bias: bool = False) -> LevelStructure:
    """Closed-form eigenlevels, mixing angle and spacings of the molecule."""
    _require_codegeneracy(params, allow_bias)
    ej, em, b0 = params.e_j, params.e_m, params.b0
    e_mn = np.hypot(ej, em * (1.0 - b0))
    e_total = np.hypot(ej, em)
    theta = 0.5 * np.arctan2(em * (1.0 - b0), ej)
    e1 = -e_mn - em * b0
    e2 = -em * (1.0 - 2.0 * b0)
    e3 = em
    e4 = e_mn - em * b0
    s, c = np.sin(theta), np.cos(theta)
    r2 = 1.0 / np.sqrt(2.0)
    vecs = np.array(
        [
            [-s, 0.0, 0.0, c],
            [0.0, -r2, r2, 0.0],
            [0.0, r2, r2, 0.0],
            [c, 0.0, 0.0, s],
        ],
        dtype=complex,
    ).T  # rows built per eigenvector, transpose to columns
    return LevelStructure(
        energies=(e1, e2, e3, e4),
        theta=float(theta),
        e_mn=float(e_mn),
        e_total=float(e_total),
        e31=e3 - e1,
        e42=e4 - e2,
        e32=e3 - e2,
        eigenvectors=vecs,
    )


_PAULIS = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _charge_basis_sigma(which: str) -> np.ndarray:
    axis, qubit = which[-2], which[-1]
    p = _PAULIS[axis]
    eye = np.eye(2, dtype=complex)
    return np.kron(p, eye) if qubit == "1" else np.kron(eye, p)


def operator_in_eigenbasis(params: MoleculeParams, which: str) -> Operator:
    """sigma_x1/x2/z1/z2 expressed in the molecule eigenbasis (phi = theta + pi/4).

    Returns the closed-form matrix; it is cross-checked against the numerical
    conjugation V^dag sigma V at test time.
    """
    if which not in ("sigma_x1", "sigma_x2", "sigma_z1", "sigma_z2"):
        raise ValueError(f"unknown operator {which!r}")
    ls = level_structure(params)
    phi = ls.theta + np.pi / 4.0
    sp, cp = np.sin(phi), np.cos(phi)
    s2t, c2t = np.sin(2 * ls.theta), np.cos(2 * ls.theta)
    if which == "sigma_x1":
        m = np.array(
            [
                [0, -sp, cp, 0],
                [-sp, 0, 0, cp],
                [cp, 0, 0, sp],
                [0, cp, sp, 0],
            ],
            dtype=complex,
        )
    elif which == "sigma_x2":
        m = np.array(
            [
                [0, sp, cp, 0],
                [sp, 0, 0, -cp],
                [cp, 0, 0, sp],
                [0, -cp, sp, 0],
            ],
            dtype=complex,
        )
    elif which == "sigma_z1":
        m = np.array(
            [
                [-c2t, 0, 0, -s2t],
                [0, 0, -1, 0],
                [0, -1, 0, 0],
                [-s2t, 0, 0, c2t],
            ],
            dtype=complex,
        )
    else:  # sigma_z2
        m = np.array(
            [
                [-c2t, 0, 0, -s2t],
                [0, 0, 1, 0],
                [0, 1, 0, 0],
                [-s2t, 0, 0, c2t],
            ],
            dtype=complex,
        )
    return Operator(SPACE4, m)


def eigenbasis_numeric(params: MoleculeParams, which: str) -> np.ndarray:
    """V^dag sigma V with V the closed-form eigenvector matrix."""
    v = level_structure(params).eigenvectors
    sig = _charge_basis_sigma(which)
    return v.conj().T @ sig @ v


def pump_hamiltonian(
    params: MoleculeParams, pump: PumpParams, mode: str = "rwa"
) -> Operator | Callable[[float], Operator]:
    """Flux-pump coupling of the |2> <-> |3> transition.

    rwa mode: static -Omega_Ex(|2><3| + |3><2|) in the frame rotating at the
    drive frequency.  full mode: callable t -> Omega_Ex cos(w_p t)(sz1 - sz2)
    in the eigenbasis, for RWA-validity checks (the level energies are not
    included in the schedule).
    """
    ls = level_structure(params)
    if mode == "rwa":
        if abs(pump.omega_p - ls.e32) > 0.5 * ls.e32:
            warnings.warn(
                f"drive frequency {pump.omega_p} GHz far from E32 = {ls.e32} GHz; "
                "rotating-wave form is unreliable"
            )
        e41 = ls.energies[3] - ls.energies[0]
        if pump.omega_ex > 0 and abs(pump.omega_p - e41) < 10.0 * pump.omega_ex:
            warnings.warn(
                f"drive frequency {pump.omega_p} GHz within 10*Omega_Ex of "
                f"E41 = {e41} GHz: unwanted |1> <-> |4> proximity"
            )
        m = np.zeros((4, 4), dtype=complex)
        m[1, 2] = m[2, 1] = -pump.omega_ex
        return Operator(SPACE4, m)
    if mode == "full":
        sz_diff = (
            operator_in_eigenbasis(params, "sigma_z1").matrix
            - operator_in_eigenbasis(params, "sigma_z2").matrix
        )

        def schedule(t: float) -> Operator:
            return Operator(SPACE4, pump.omega_ex * np.cos(TWO_PI * pump.omega_p * t) * sz_diff)

        return schedule
    raise ValueError(f"mode must be 'rwa' or 'full', got {mode!r}")


def _h_factor(tlr: TLRGeometry, c_own: float, x_own: float, c_other: float,
              x_other: float, c_sigma: float, c_m: float) -> float:
    """One bare coupling factor from the tap-position cosine formula, in GHz."""
    omega_ang = TWO_PI * tlr.frequency * 1e9  # rad/s
    v_zpf = np.sqrt(HBAR * omega_ang / (tlr.length * tlr.cap_per_length))
    pref = ELEMENTARY_CHARGE * v_zpf / (c_sigma**2 - c_m**2)
    geom = c_own * np.cos(TWO_PI * x_own / tlr.length) * c_sigma
    geom += c_other * np.cos(TWO_PI * x_other / tlr.length) * c_m
    return float(pref * geom / (PLANCK * 1e9))


def coupling_factors(geom: CouplingGeometry, params: MoleculeParams) -> CouplingFactors:
    """h factors from the capacitor geometry and g factors in the eigenbasis."""
    cs, cm = params.c_sigma, params.c_m
    a, b = geom.tlr_a, geom.tlr_b
    h_a1 = _h_factor(a, a.c1, a.x1, a.c2, a.x2, cs, cm)
    h_a2 = _h_factor(a, a.c2, a.x2, a.c1, a.x1, cs, cm)
    h_b1 = _h_factor(b, b.c1, b.x1, b.c2, b.x2, cs, cm)
    h_b2 = _h_factor(b, b.c2, b.x2, b.c1, b.x1, cs, cm)
    phi = level_structure(params).theta + np.pi / 4.0
    cphi = np.cos(phi)
    return CouplingFactors(
        h_a1=h_a1,
        h_a2=h_a2,
        h_b1=h_b1,
        h_b2=h_b2,
        g_a1=cphi * (h_a1 + h_a2),
        g_a2=cphi * (h_a1 - h_a2),
        g_b1=cphi * (h_b1 + h_b2),
        g_b2=cphi * (h_b1 - h_b2),
    )


@dataclass(frozen=True)
class DeriveReport:
    residual_g_a2: float
    residual_g_b1: float
    xpm_pure: bool
    degenerate_n: bool
    r1: float
    r2: float


def derive_nscheme(
    params: MoleculeParams,
    pump: PumpParams,
    omega_a: float,
    omega_b: float,
    geom: CouplingGeometry | None = None,
    factors: CouplingFactors | None = None,
    rates: dict[str, float] | None = None,
    purity_threshold: float = 0.05,
    allow_mixed: bool = False,
) -> tuple[NSchemeParams, DeriveReport]:
    """Map the driven circuit to the abstract N-scheme parameters.

    g1 := g_A1, g2 := g_B2, Omega_c := Omega_Ex, delta := E31 - omega_A,
    Delta := E42 - omega_B.  Decoherence rates are passed through unchanged.
    Residual couplings g_A2, g_B1 beyond purity_threshold (relative to the
    wanted factors) abort the mapping unless allow_mixed is set.
    """
    if (geom is None) == (factors is None):
        raise ValueError("provide exactly one of geom / factors")
    f = factors if factors is not None else coupling_factors(geom, params)
    ls = level_structure(params)
    wanted = max(abs(f.g_a1), abs(f.g_b2), np.finfo(float).tiny)
    res_a2 = abs(f.g_a2) / wanted
    res_b1 = abs(f.g_b1) / wanted
    pure = res_a2 <= purity_threshold and res_b1 <= purity_threshold
    if not pure and not allow_mixed:
        raise XPMPurityError(
            "geometry is not XPM-pure: residual couplings "
            f"g_A2/g = {res_a2:.3g}, g_B1/g = {res_b1:.3g} exceed {purity_threshold}",
            {"g_a2": f.g_a2, "g_b1": f.g_b1},
        )
    delta = ls.e31 - omega_a
    big_delta = ls.e42 - omega_b
    rates = dict(rates or {})
    p = NSchemeParams(
        g1=abs(f.g_a1),
        g2=abs(f.g_b2),
        omega_c=pump.omega_ex,
        delta=delta,
        big_delta=big_delta,
        gamma1=rates.get("gamma1", 0.0),
        gamma2=rates.get("gamma2", 0.0),
        gamma3=rates.get("gamma3", 0.0),
        gamma4=rates.get("gamma4", 0.0),
        gamma_phi=rates.get("gamma_phi", 0.0),
        kappa1=rates.get("kappa1", 0.0),
        kappa2=rates.get("kappa2", 0.0),
    )
    r1 = (p.g1 / p.omega_c) ** 2 if p.omega_c else np.inf
    r2 = abs(p.g2 / p.big_delta) if p.big_delta else np.inf
    report = DeriveReport(
        residual_g_a2=f.g_a2,
        residual_g_b1=f.g_b1,
        xpm_pure=pure,
        degenerate_n=np.isclose(delta, big_delta),
        r1=r1,
        r2=r2,
    )
    return p, report


def closed_form_vs_numeric_residual(params: MoleculeParams) -> float:
    """Max relative mismatch between closed-form energies and eig(build_h0)."""
    ls = level_structure(params)
    w, _ = eig_hermitian(build_h0(params))
    scale = max(abs(e) for e in ls.energies)
    return float(np.abs(w - np.array(ls.energies)).max() / scale)
