"""Effective two-mode Kerr evolution and the entangled-cat protocol.

After the atom is eliminated the two cavity modes evolve under a diagonal
generator: a cross-Kerr phase per photon pair plus (optionally) self-Kerr
phases and a nonlinear absorption that shrinks the state norm.  Everything
here works on Fock-basis amplitude arrays for the two modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import coherent_amplitudes, eig_hermitian
from .nscheme import NSchemeParams, Truncation, build_hsys

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class KerrParams:
    """Effective parameters in GHz (frequency/2pi); chi3 may be complex."""

    chi3: complex
    chi_self1: float = 0.0
    chi_self2: float = 0.0

    def __post_init__(self):
        if isinstance(self.chi3, complex) and self.chi3.imag < 0:
            raise ValueError("Im(chi3) < 0 would amplify the state")


@dataclass(frozen=True)
class KerrResult:
    amplitudes: np.ndarray  # (n1+1, n2+1), renormalized
    success_probability: float  # squared norm surviving nonlinear absorption


def kerr_evolve(params: KerrParams, amplitudes: np.ndarray, t: float) -> KerrResult:
    """Evolve a two-mode amplitude array for time t (ns) under the Kerr generator."""
    amp = np.asarray(amplitudes, dtype=complex)
    if amp.ndim != 2:
        raise ValueError("amplitudes must be a 2-d (mode1, mode2) array")
    n1 = np.arange(amp.shape[0])[:, None]
    n2 = np.arange(amp.shape[1])[None, :]
    chi = params.chi3
    phase = (
        TWO_PI * chi.real * t * n1 * n2
        + TWO_PI * params.chi_self1 * t * n1 * (n1 - 1)
        + TWO_PI * params.chi_self2 * t * n2 * (n2 - 1)
    )
    damp = -TWO_PI * chi.imag * t * n1 * n2
    out = amp * np.exp(1j * phase + damp)
    p_success = float(np.sum(np.abs(out) ** 2) / np.sum(np.abs(amp) ** 2))
    norm = np.linalg.norm(out)
    if norm == 0.0:
        raise ValueError("state fully absorbed; nothing to renormalize")
    return KerrResult(out / norm, p_success)


def coherent_overlap(alpha: complex, beta: complex) -> complex:
    """<beta|alpha> for ideal (untruncated) coherent states."""
    return np.exp(-(abs(alpha) ** 2 + abs(beta) ** 2) / 2.0 + np.conj(beta) * alpha)


def two_mode_coherent(alpha: complex, beta: complex, n_max1: int, n_max2: int) -> np.ndarray:
    return np.outer(
        coherent_amplitudes(alpha, n_max1 + 1), coherent_amplitudes(beta, n_max2 + 1)
    )


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 for normalized amplitude arrays of equal shape."""
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if a.shape != b.shape:
        raise ValueError("state shapes differ")
    return float(abs(np.vdot(a, b)) ** 2)


@dataclass(frozen=True)
class CatProtocolResult:
    t_gate: float  # ns
    state: np.ndarray  # evolved, renormalized amplitudes
    target: np.ndarray  # ideal four-component superposition, same truncation
    fidelity: float
    success_probability: float


def cat_protocol(
    params: KerrParams,
    alpha: complex = 2.0,
    beta: complex = 2.0,
    n_max: int = 20,
) -> CatProtocolResult:
    """Run the pi conditional phase gate on a product of two coherent states.

    Waiting t = 1/(2 Re chi3) imprints exp(i pi n1 n2), which maps
    |alpha>|beta> onto the normalized four-component superposition
    (|a,b> + |-a,b> + |a,-b> - |-a,-b>)/2 because
    exp(i pi n m) = [1 + (-1)^n + (-1)^m - (-1)^(n+m)] / 2.
    """
    if params.chi3.real == 0.0:
        raise ValueError("cat protocol needs Re(chi3) != 0")
    t_gate = 1.0 / (2.0 * params.chi3.real)
    initial = two_mode_coherent(alpha, beta, n_max, n_max)
    evolved = kerr_evolve(params, initial, t_gate)

    target = (
        two_mode_coherent(alpha, beta, n_max, n_max)
        + two_mode_coherent(-alpha, beta, n_max, n_max)
        + two_mode_coherent(alpha, -beta, n_max, n_max)
        - two_mode_coherent(-alpha, -beta, n_max, n_max)
    )
    target = target / np.linalg.norm(target)

    return CatProtocolResult(
        t_gate=t_gate,
        state=evolved.amplitudes,
        target=target,
        fidelity=fidelity(evolved.amplitudes, target),
        success_probability=evolved.success_probability,
    )


@dataclass(frozen=True)
class ComparisonResult:
    times: np.ndarray
    infidelity: np.ndarray  # 1 - |<effective|full>|^2 at each time
    phase_error: np.ndarray  # worst per-Fock-pair phase mismatch (rad) at each time
    chi3_effective: complex


def compare_full_vs_effective(
    p: NSchemeParams,
    chi3: complex,
    t: Truncation,
    alpha: complex,
    beta: complex,
    times: np.ndarray,
) -> ComparisonResult:
    """Propagate the full coherent model against the diagonal Kerr picture.

    The full state starts with the atom in its ground level and each mode in
    a truncated coherent state; the effective state is the same cavity
    amplitude array under kerr_evolve.  Useful as a visual check of where
    the elimination breaks down.
    """
    times = np.asarray(times, dtype=float)
    space = t.space
    h = build_hsys(p, t)
    w, v = eig_hermitian(h)

    amp_cav = two_mode_coherent(alpha, beta, t.n_max1, t.n_max2)
    psi0 = np.zeros(space.total_dim, dtype=complex)
    d1, d2 = t.n_max1 + 1, t.n_max2 + 1
    psi0[: d1 * d2] = amp_cav.reshape(-1)  # atom index 0 = level |1>
    c0 = v.conj().T @ psi0

    kerr = KerrParams(chi3=chi3)
    infid = np.empty(times.size)
    perr = np.empty(times.size)
    for i, tt in enumerate(times):
        psi = v @ (np.exp(-1j * TWO_PI * w * tt) * c0)
        cav = psi[: d1 * d2].reshape(d1, d2)
        nrm = np.linalg.norm(cav)
        cav = cav / nrm
        eff = kerr_evolve(kerr, amp_cav, tt).amplitudes
        infid[i] = 1.0 - fidelity(cav, eff)
        mask = np.abs(amp_cav) > 1e-3
        dphi = np.angle(cav[mask] * np.conj(eff[mask]))
        dphi -= np.average(dphi, weights=np.abs(amp_cav[mask]) ** 2)
        perr[i] = float(np.max(np.abs(dphi)))
    return ComparisonResult(times, infid, perr, chi3)
