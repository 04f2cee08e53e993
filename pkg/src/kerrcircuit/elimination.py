"""Adiabatic elimination of the atom: stationary moments and susceptibilities.

The atomic expectation values <sigma_jk> are expanded in normally ordered
cavity monomials a1^dag^p a1^q a2^dag^r a2^s.  Setting every atomic time
derivative to zero turns the moment hierarchy into one small linear solve
per monomial: the atomic part of the generator maps a monomial to itself
while each cavity coupling raises the monomial degree by one, so the
expansion is built order by order starting from <sigma_11> = 1.

The bilinear closure (substituting the already-solved atomic expansion into
products like <sigma a1>) is the defining approximation of this module; the
brute-force propagation in conditional_phase_oracle quantifies its error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.linalg import expm

from .core import eig_hermitian, liouvillian_matrix, matrix_unit
from .nscheme import (
    AdiabaticReport,
    EliminationInvalidError,
    NSchemeParams,
    Truncation,
    adiabatic_check,
    build_hsys,
    collapse_operators,
)

TWO_PI = 2.0 * np.pi

Monomial = tuple[int, int, int, int]  # powers of a1^dag, a1, a2^dag, a2

# relative size used to regularize exactly-zero upper-level decays; the
# stationary solve needs every level to relax somewhere, and all extracted
# quantities are continuous in these rates
_REG = 1e-7


class EliminationSingularError(RuntimeError):
    pass


@dataclass(frozen=True)
class MomentExpansion:
    target: tuple[int, int]  # 1-based (j, k) of sigma_jk
    terms: dict[Monomial, complex]

    def coefficient(self, mono: Monomial) -> complex:
        return self.terms.get(mono, 0.0 + 0.0j)


@dataclass(frozen=True)
class Susceptibilities:
    chi1: complex  # GHz
    chi3: complex  # GHz
    dispersion_factor: float
    linear_absorption_factor: float
    nonlinear_absorption_factor: float
    relative_decay: float
    factors_defined: bool = True


def _atomic_pieces(p: NSchemeParams, convention: str):
    """Atomic Hamiltonian, coupling terms and collapse channels as 4x4 blocks.

    Coupling terms are (coef, mode, kind, atomic 4x4) with kind 'create'
    (cavity creation operator on the left) or 'annihilate' (annihilation on
    the right).
    """
    e = lambda j, k: matrix_unit(4, j - 1, k - 1)
    if convention == "hermitian":
        h_at = p.delta * e(3, 3) + p.big_delta * e(4, 4) + p.omega_c * (e(2, 3) + e(3, 2))
        couplings = [
            (p.g1, 1, "create", e(1, 3)),
            (p.g1, 1, "annihilate", e(3, 1)),
            (p.g2, 2, "create", e(2, 4)),
            (p.g2, 2, "annihilate", e(4, 2)),
        ]
    elif convention == "antihermitian":
        h_at = p.delta * e(3, 3) + p.big_delta * e(4, 4) + 1j * p.omega_c * (e(2, 3) - e(3, 2))
        couplings = [
            (1j * p.g1, 1, "create", e(1, 3)),
            (-1j * p.g1, 1, "annihilate", e(3, 1)),
            (1j * p.g2, 2, "create", e(2, 4)),
            (-1j * p.g2, 2, "annihilate", e(4, 2)),
        ]
    else:
        raise ValueError(f"unknown convention {convention!r}")
    scale = max(p.omega_c, abs(p.big_delta), abs(p.delta), p.g1, p.g2, 1e-3)
    channels = [
        (p.gamma1 or _REG * scale, e(1, 3)),
        (p.gamma2 or _REG * scale, e(2, 3)),
        (p.gamma3 or _REG * scale, e(2, 4)),
        (p.gamma4, e(1, 2)),
        (p.gamma_phi, e(2, 2)),
    ]
    channels = [(g, c) for g, c in channels if g > 0.0]
    return h_at, couplings, channels


def _adjoint_atomic_matrix(h_at: np.ndarray, channels) -> np.ndarray:
    """16x16 matrix M with d<sigma_jk>/dt = sum_mn M[(jk),(mn)] <sigma_mn> (atomic part)."""
    m = np.zeros((16, 16), dtype=complex)
    for j in range(4):
        for k in range(4):
            o = matrix_unit(4, j, k)
            kmat = 1j * (h_at @ o - o @ h_at)
            for g, c in channels:
                cd = c.conj().T
                cdc = cd @ c
                kmat = kmat + g * (2.0 * cd @ o @ c - cdc @ o - o @ cdc)
            m[4 * j + k, :] = kmat.reshape(-1)
    return m


def _raise_monomial(mono: Monomial, mode: int, kind: str) -> Monomial:
    p, q, r, s = mono
    if mode == 1:
        return (p + 1, q, r, s) if kind == "create" else (p, q + 1, r, s)
    return (p, q, r + 1, s) if kind == "create" else (p, q, r, s + 1)


def stationary_moments(
    p: NSchemeParams,
    order: int = 3,
    convention: str = "hermitian",
    require_adiabatic: bool = True,
) -> dict[tuple[int, int], MomentExpansion]:
    """Order-by-order stationary expansion of all <sigma_jk>, seeded by <sigma_11> = 1."""
    if p.omega_c <= 0.0:
        raise EliminationInvalidError("elimination requires Omega_c > 0")
    if require_adiabatic and not adiabatic_check(p).passed:
        raise EliminationInvalidError(
            "adiabatic criteria violated; pass require_adiabatic=False to override"
        )
    if order < 0 or order > 3:
        raise ValueError("orders above 3 are not implemented")

    scale = max(p.omega_c, abs(p.big_delta), abs(p.delta), p.g1, p.g2, 1e-3)
    if abs(p.gamma3 + 1j * p.big_delta) < 1e-6 * scale:
        raise EliminationSingularError(
            "resonant denominator gamma3 + i*Delta vanished: the |2>-|4> "
            "transition has neither detuning nor damping"
        )
    h_at, couplings, channels = _atomic_pieces(p, convention)
    m = _adjoint_atomic_matrix(h_at, channels)

    # the four population rows are linearly dependent; swap the sigma_44 row
    # for the trace constraint
    m_solve = m.copy()
    trace_row = np.zeros(16, dtype=complex)
    trace_row[[0, 5, 10, 15]] = 1.0
    m_solve[15, :] = trace_row

    cond = np.linalg.cond(m_solve)
    if not np.isfinite(cond) or cond > 1e14:
        raise EliminationSingularError(
            "stationary linear system is singular; a resonant denominator "
            "(gamma3 + i*Delta, or B = Omega_c^2 + (gamma1+gamma2)*gamma5 + "
            "i*delta*gamma5) vanished for these parameters"
        )

    coeffs: dict[tuple[int, int], dict[Monomial, complex]] = {
        (j, k): {} for j in range(4) for k in range(4)
    }
    coeffs[(0, 0)][(0, 0, 0, 0)] = 1.0 + 0.0j

    for o in range(1, order + 1):
        sources: dict[Monomial, np.ndarray] = {}
        for coef, mode, kind, amat in couplings:
            for j in range(4):
                for k in range(4):
                    o_jk = matrix_unit(4, j, k)
                    pmat = 1j * coef * (amat @ o_jk - o_jk @ amat)
                    nz = np.argwhere(np.abs(pmat) > 0)
                    for mrow, ncol in nz:
                        for mono, c in coeffs[(mrow, ncol)].items():
                            if sum(mono) != o - 1:
                                continue
                            new = _raise_monomial(mono, mode, kind)
                            vec = sources.setdefault(new, np.zeros(16, dtype=complex))
                            vec[4 * j + k] += pmat[mrow, ncol] * c
        for mono, src in sources.items():
            rhs = -src
            rhs[15] = 0.0  # trace of every order>0 correction vanishes
            x = np.linalg.solve(m_solve, rhs)
            for j in range(4):
                for k in range(4):
                    val = x[4 * j + k]
                    if abs(val) > 1e-14 * max(1.0, np.abs(x).max()):
                        coeffs[(j, k)][mono] = coeffs[(j, k)].get(mono, 0.0) + val

    return {
        (j + 1, k + 1): MomentExpansion((j + 1, k + 1), dict(coeffs[(j, k)]))
        for j in range(4)
        for k in range(4)
    }


def susceptibilities(
    p: NSchemeParams, require_adiabatic: bool = True
) -> Susceptibilities:
    """Complex chi1 and chi3 with the diagnostic ratios of the decoherence study.

    Extraction is pinned to the closed forms: the a1 coefficient c1 of
    <sigma_13> gives chi1 = i*g1*c1 (reproducing g1^2*gamma5/B in the
    gamma5-only case) and the a2^dag a1 a2 coefficient c3 gives
    chi3 = -g1*c3 (reproducing g1^2*g2^2/((Delta - i*gamma3)*Omega_c^2)).
    """
    moments = stationary_moments(p, order=3, require_adiabatic=require_adiabatic)
    s13 = moments[(1, 3)]
    c1 = s13.coefficient((0, 1, 0, 0))
    c3 = s13.coefficient((0, 1, 1, 1))
    chi1 = 1j * p.g1 * c1
    chi3 = -p.g1 * c3
    re3 = chi3.real
    if re3 == 0.0:
        return Susceptibilities(chi1, chi3, np.nan, np.nan, np.nan, np.nan, False)
    return Susceptibilities(
        chi1=chi1,
        chi3=chi3,
        dispersion_factor=chi1.real / re3,
        linear_absorption_factor=chi1.imag / re3,
        nonlinear_absorption_factor=chi3.imag / re3,
        relative_decay=abs(chi3.imag / re3),
    )


def chi_closed_forms(p: NSchemeParams) -> tuple[complex, complex]:
    """Analytic limits of the two susceptibilities (chi1 from the first-order
    solve with gamma5 > 0; chi3 exact at gamma5 = 0)."""
    if p.omega_c <= 0.0:
        raise EliminationInvalidError("closed forms require Omega_c > 0")
    g5 = p.gamma5
    b = p.omega_c**2 + (p.gamma1 + p.gamma2) * g5 + 1j * p.delta * g5
    chi1 = p.g1**2 * g5 / b
    chi3 = p.g1**2 * p.g2**2 / ((p.big_delta - 1j * p.gamma3) * p.omega_c**2)
    return chi1, chi3


# ---------------------------------------------------------------------------
# brute-force oracle


@dataclass(frozen=True)
class OracleResult:
    chi3: complex  # GHz
    residual: float  # rms fit residual of the unwrapped phase, rad
    adiabatic: AdiabaticReport


def conditional_phase_oracle(
    p: NSchemeParams,
    t: Truncation = Truncation(1, 1),
    horizon: float | None = None,
    samples: int = 400,
    require_adiabatic: bool = True,
    residual_threshold: float = 0.5,
) -> OracleResult:
    """Estimate chi3 by brute-force propagation of the full model.

    The state |1>_atom (|0>+|1>)/sqrt2 (|0>+|1>)/sqrt2 is propagated under
    the full Hamiltonian (plus all collapse channels when any rate is
    nonzero).  The cross-phase accumulates in the coherence combination
    q = rho[(1,1),(0,0)] / rho[(1,0),(0,1)]; a linear fit of arg q gives
    Re(chi3) and of ln|q| gives Im(chi3).
    """
    report = adiabatic_check(p)
    if require_adiabatic and not report.passed:
        raise EliminationInvalidError("oracle outside the adiabatic regime")
    if horizon is None:
        chi_guess = p.g1**2 * p.g2**2 / (abs(p.big_delta) * p.omega_c**2)
        horizon = 0.5 / max(chi_guess, 1e-9)
    times = np.linspace(0.0, horizon, samples)

    space = t.space
    d = space.total_dim
    h = build_hsys(p, t)
    channels = collapse_operators(p, t)

    d1, d2 = t.n_max1 + 1, t.n_max2 + 1
    idx = lambda n, m_: (0 * d1 + n) * d2 + m_  # atom fixed in |1>
    amp = np.zeros(d, dtype=complex)
    for n in (0, 1):
        for m_ in (0, 1):
            amp[idx(n, m_)] = 0.5

    if channels:
        L = liouvillian_matrix(h, channels)
        dt = times[1] - times[0]
        step = expm(L * dt)
        rho = np.outer(amp, amp.conj()).reshape(-1)
        q = np.empty(samples, dtype=complex)
        for i in range(samples):
            r = rho.reshape(d, d)
            q[i] = r[idx(1, 1), idx(0, 0)] / r[idx(1, 0), idx(0, 1)]
            if i + 1 < samples:
                rho = step @ rho
    else:
        w, v = eig_hermitian(h)
        c0 = v.conj().T @ amp
        q = np.empty(samples, dtype=complex)
        for i, tt in enumerate(times):
            psi = v @ (np.exp(-1j * TWO_PI * w * tt) * c0)
            q[i] = (
                psi[idx(1, 1)] * psi[idx(0, 0)].conj()
                / (psi[idx(1, 0)] * psi[idx(0, 1)].conj())
            )

    phase = np.unwrap(np.angle(q))
    slope_re, _ = np.polyfit(times, phase, 1)
    resid = float(np.sqrt(np.mean((phase - np.polyval(np.polyfit(times, phase, 1), times)) ** 2)))
    slope_im, _ = np.polyfit(times, np.log(np.abs(q)), 1)
    chi3 = slope_re / TWO_PI - 1j * slope_im / TWO_PI
    if resid > residual_threshold:
        raise EliminationSingularError(
            f"oracle phase fit residual {resid:.3g} rad exceeds {residual_threshold}: "
            "adiabaticity violated at these parameters"
        )
    return OracleResult(chi3=chi3, residual=resid, adiabatic=report)


# ---------------------------------------------------------------------------
# parameter sweeps


_AXIS_ALIASES = {"omega_ex": "omega_c"}


def _apply_axis(p: NSchemeParams, name: str, value: float) -> NSchemeParams:
    if name == "gamma5":
        # all of gamma5 is attributed to the |2> -> |1> decay channel
        return p.with_(gamma4=value, gamma_phi=0.0)
    return p.with_(**{_AXIS_ALIASES.get(name, name): value})


@dataclass(frozen=True)
class SweepTable:
    axis1_name: str
    axis1_values: np.ndarray
    axis2_name: str
    axis2_values: np.ndarray
    cells: list[list[Susceptibilities | str]]  # row-major, axis1 outer; str = error
    metadata: dict[str, object] = field(default_factory=dict)


def sweep(
    p_base: NSchemeParams,
    axis1: tuple[str, Iterable[float]],
    axis2: tuple[str, Iterable[float]],
    require_adiabatic: bool = False,
) -> SweepTable:
    """Dense susceptibility table over two parameter grids (axis1 outer).

    Per-point failures are recorded in the table as error strings; the sweep
    always completes.
    """
    name1, grid1 = axis1
    name2, grid2 = axis2
    grid1 = np.asarray(list(grid1), dtype=float)
    grid2 = np.asarray(list(grid2), dtype=float)
    if grid1.size == 0 or grid2.size == 0:
        raise ValueError("sweep grids must be non-empty")
    cells: list[list[Susceptibilities | str]] = []
    for v1 in grid1:
        row: list[Susceptibilities | str] = []
        for v2 in grid2:
            try:
                pt = _apply_axis(_apply_axis(p_base, name1, v1), name2, v2)
                row.append(susceptibilities(pt, require_adiabatic=require_adiabatic))
            except Exception as exc:  # per-point failure stays in-table
                row.append(f"err: {exc}")
        cells.append(row)
    meta = {f: getattr(p_base, f) for f in (
        "g1", "g2", "omega_c", "delta", "big_delta",
        "gamma1", "gamma2", "gamma3", "gamma4", "gamma_phi", "kappa1", "kappa2",
    )}
    meta["gamma5_convention"] = "gamma5 swept as gamma4 with gamma_phi = 0"
    meta["units"] = "GHz (frequency/2pi)"
    return SweepTable(name1, grid1, name2, grid2, cells, meta)
