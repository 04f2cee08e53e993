"""Driven N-type four-level model on a truncated two-mode Fock space.

Level labels follow the transition graph: mode 1 drives |1> <-> |3| with
strength g1 (detuning delta), mode 2 drives |2> <-> |4> with strength g2
(detuning Delta), and a classical pump couples |2> <-> |3> with Rabi
frequency Omega_c.  Everything lives in the interaction picture, so the
Hamiltonian contains only detunings and couplings.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .core import (
    HilbertSpace,
    Operator,
    QuantumState,
    destroy,
    evolve_lindblad,
    expectation,
    matrix_unit,
    number,
    tensor,
)


class EliminationInvalidError(ValueError):
    """Adiabatic elimination requested outside its domain (Omega_c = 0 or Delta = 0)."""


@dataclass(frozen=True)
class NSchemeParams:
    """Couplings, detunings and decoherence rates of the N scheme (GHz)."""

    g1: float = 0.3
    g2: float = 0.3
    omega_c: float = 1.5
    delta: float = 0.0
    big_delta: float = 1.5
    gamma1: float = 0.0  # |3> -> |1>
    gamma2: float = 0.0  # |3> -> |2>
    gamma3: float = 0.0  # |4> -> |2>
    gamma4: float = 0.0  # |2> -> |1>
    gamma_phi: float = 0.0  # |1>-|2> pure dephasing
    kappa1: float = 0.0
    kappa2: float = 0.0

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "gamma3", "gamma4", "gamma_phi", "kappa1", "kappa2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def gamma5(self) -> float:
        return self.gamma4 + self.gamma_phi

    def with_(self, **kwargs) -> "NSchemeParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class Truncation:
    n_max1: int = 3
    n_max2: int = 3

    def __post_init__(self):
        if self.n_max1 < 0 or self.n_max2 < 0:
            raise ValueError("Fock cutoffs must be >= 0")

    @property
    def space(self) -> HilbertSpace:
        return HilbertSpace((4, self.n_max1 + 1, self.n_max2 + 1))


@dataclass(frozen=True)
class AdiabaticReport:
    r1: float  # (g1/Omega_c)^2
    r2: float  # |g2/Delta|
    r1_threshold: float
    r2_threshold: float

    @property
    def passed(self) -> bool:
        return self.r1 < self.r1_threshold and self.r2 < self.r2_threshold


def sigma(space: HilbertSpace, j: int, k: int) -> Operator:
    """Atomic |j><k| (1-based level labels) embedded on the full space."""
    return tensor(space, [matrix_unit(4, j - 1, k - 1), None, None])


def mode_op(space: HilbertSpace, mode: int) -> Operator:
    """Annihilation operator of cavity mode 1 or 2 embedded on the full space."""
    idx = mode  # atom is factor 0
    return tensor(space, [None if i != idx else destroy(space.factor_dims[idx])
                          for i in range(3)])


def build_hsys(
    p: NSchemeParams, t: Truncation, convention: str = "hermitian"
) -> Operator:
    """Interaction-picture system Hamiltonian on the space [4, n1+1, n2+1].

    The default Hermitian convention writes the couplings as
    g (a^dag sigma_lower + sigma_upper a); the alternative 'antihermitian'
    convention multiplies the coupling bracket by i with a relative minus
    sign, i*g (a^dag sigma_lower - sigma_upper a).  Populations and |chi|
    values are identical in both (tested), only coherence phases differ.
    """
    if convention not in ("hermitian", "antihermitian"):
        raise ValueError(f"unknown convention {convention!r}")
    if (t.n_max1 == 0 and p.g1 != 0.0) or (t.n_max2 == 0 and p.g2 != 0.0):
        warnings.warn("zero Fock cutoff on a coupled mode; dynamics will be trivial")
    space = t.space
    a1 = mode_op(space, 1).matrix
    a2 = mode_op(space, 2).matrix
    s13 = sigma(space, 1, 3).matrix
    s24 = sigma(space, 2, 4).matrix
    s23 = sigma(space, 2, 3).matrix
    h = p.delta * sigma(space, 3, 3).matrix + p.big_delta * sigma(space, 4, 4).matrix
    if convention == "hermitian":
        h += p.g1 * (a1.conj().T @ s13 + s13.conj().T @ a1)
        h += p.g2 * (a2.conj().T @ s24 + s24.conj().T @ a2)
        h += p.omega_c * (s23 + s23.conj().T)
    else:
        h += 1j * p.g1 * (a1.conj().T @ s13 - s13.conj().T @ a1)
        h += 1j * p.g2 * (a2.conj().T @ s24 - s24.conj().T @ a2)
        h += 1j * p.omega_c * (s23 - s23.conj().T)
    return Operator(space, h)


def collapse_operators(p: NSchemeParams, t: Truncation) -> list[tuple[float, Operator]]:
    """Decoherence channels [(rate, operator)], zero-rate channels omitted."""
    space = t.space
    channels = [
        (p.gamma1, sigma(space, 1, 3)),
        (p.gamma2, sigma(space, 2, 3)),
        (p.gamma3, sigma(space, 2, 4)),
        (p.gamma4, sigma(space, 1, 2)),
        (p.gamma_phi, sigma(space, 2, 2)),
        (p.kappa1, mode_op(space, 1)),
        (p.kappa2, mode_op(space, 2)),
    ]
    return [(rate, op) for rate, op in channels if rate > 0.0]


def adiabatic_check(
    p: NSchemeParams, r1_threshold: float = 0.1, r2_threshold: float = 0.3
) -> AdiabaticReport:
    """Adiabaticity ratios (g1/Omega_c)^2 and |g2/Delta| against thresholds."""
    if p.omega_c == 0.0:
        raise EliminationInvalidError("adiabatic elimination requires Omega_c > 0")
    if p.big_delta == 0.0:
        raise EliminationInvalidError("adiabatic elimination requires Delta != 0")
    return AdiabaticReport(
        r1=(p.g1 / p.omega_c) ** 2,
        r2=abs(p.g2 / p.big_delta),
        r1_threshold=r1_threshold,
        r2_threshold=r2_threshold,
    )


def conserved_excitations(t: Truncation) -> tuple[Operator, Operator]:
    """The two exact conserved quantities of H_sys with kappa = 0.

    N1 = n1 + s22 + s33 + s44 and N2 = n2 + s44.
    """
    space = t.space
    n1 = tensor(space, [None, number(t.n_max1 + 1), None]).matrix
    n2 = tensor(space, [None, None, number(t.n_max2 + 1)]).matrix
    s22 = sigma(space, 2, 2).matrix
    s33 = sigma(space, 3, 3).matrix
    s44 = sigma(space, 4, 4).matrix
    return (
        Operator(space, n1 + s22 + s33 + s44),
        Operator(space, n2 + s44),
    )


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: list[QuantumState]
    populations: np.ndarray  # shape (4, nt): <sigma_jj>
    n1: np.ndarray
    n2: np.ndarray
    coherences: dict[tuple[int, int], np.ndarray]


def simulate(
    p: NSchemeParams,
    t: Truncation,
    rho0: QuantumState,
    t_grid: Sequence[float],
    tol: float = 1e-8,
    coherences: Sequence[tuple[int, int]] = ((1, 2), (1, 3)),
    convention: str = "hermitian",
) -> Trajectory:
    """Full master-equation run with the standard observables extracted."""
    space = t.space
    h = build_hsys(p, t, convention)
    states = evolve_lindblad(h, collapse_operators(p, t), rho0, t_grid, tol)
    pops = np.array(
        [[expectation(s, sigma(space, j, j)).real for s in states] for j in range(1, 5)]
    )
    n1_op = tensor(space, [None, number(t.n_max1 + 1), None])
    n2_op = tensor(space, [None, None, number(t.n_max2 + 1)])
    n1 = np.array([expectation(s, n1_op).real for s in states])
    n2 = np.array([expectation(s, n2_op).real for s in states])
    cohs = {
        (j, k): np.array([expectation(s, sigma(space, j, k)) for s in states])
        for (j, k) in coherences
    }
    return Trajectory(
        times=np.asarray(t_grid, dtype=float),
        states=states,
        populations=pops,
        n1=n1,
        n2=n2,
        coherences=cohs,
    )
