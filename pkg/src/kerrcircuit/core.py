"""Dense operator algebra and Lindblad dynamics on labeled tensor-product spaces.

Unit convention used throughout the package: every energy, coupling and
decoherence rate is stored as (angular frequency)/2pi in GHz, and times are
in ns.  Generators therefore pick up an explicit 2*pi when exponentiated.

Lindblad convention: L[c] rho = 2 c rho c^dag - c^dag c rho - rho c^dag c,
so a single decay channel with rate gamma empties a population at exp(-2*gamma*t)
(times the 2*pi unit factor).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

TWO_PI = 2.0 * np.pi

HERMITICITY_TOL = 1e-12
KET_NORM_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_NEG_TOL = 1e-9


class DimensionMismatchError(ValueError):
    pass


class NonHermitianError(ValueError):
    pass


class NegativeRateError(ValueError):
    pass


class IntegrationError(RuntimeError):
    def __init__(self, message: str, t_fail: float | None = None):
        super().__init__(message)
        self.t_fail = t_fail


class SteadyStateError(RuntimeError):
    def __init__(self, message: str, singular_gap: float | None = None):
        super().__init__(message)
        self.singular_gap = singular_gap


@dataclass(frozen=True)
class HilbertSpace:
    """Composite Hilbert space with ordered factor dimensions."""

    factor_dims: tuple[int, ...]

    def __post_init__(self):
        if not self.factor_dims:
            raise ValueError("need at least one factor")
        if any(d < 1 for d in self.factor_dims):
            raise ValueError(f"factor dims must be >= 1, got {self.factor_dims}")
        object.__setattr__(self, "factor_dims", tuple(int(d) for d in self.factor_dims))

    @property
    def total_dim(self) -> int:
        return prod(self.factor_dims)


@dataclass(frozen=True)
class Operator:
    """Dense operator on a HilbertSpace.  Matrix entries are frequency/2pi in GHz."""

    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.space.total_dim, self.space.total_dim):
            raise DimensionMismatchError(
                f"matrix shape {m.shape} does not match space dim {self.space.total_dim}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def dag(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)

    def is_hermitian(self) -> bool:
        m = self.matrix
        scale = np.abs(m).max() or 1.0
        return np.abs(m - m.conj().T).max() < HERMITICITY_TOL * scale


@dataclass(frozen=True)
class QuantumState:
    """Ket or density matrix on a HilbertSpace."""

    space: HilbertSpace
    vector: np.ndarray | None = None
    density: np.ndarray | None = None

    def __post_init__(self):
        if (self.vector is None) == (self.density is None):
            raise ValueError("exactly one of vector/density must be given")
        d = self.space.total_dim
        if self.vector is not None:
            v = np.asarray(self.vector, dtype=complex).reshape(-1)
            if v.size != d:
                raise DimensionMismatchError(f"ket length {v.size} != {d}")
            if abs(np.linalg.norm(v) - 1.0) > KET_NORM_TOL:
                raise ValueError(f"ket norm {np.linalg.norm(v)} not within {KET_NORM_TOL} of 1")
            v.setflags(write=False)
            object.__setattr__(self, "vector", v)
        else:
            r = np.asarray(self.density, dtype=complex)
            if r.shape != (d, d):
                raise DimensionMismatchError(f"density shape {r.shape} != ({d},{d})")
            if abs(np.trace(r).real - 1.0) > TRACE_TOL or abs(np.trace(r).imag) > TRACE_TOL:
                raise ValueError(f"density trace {np.trace(r)} not within {TRACE_TOL} of 1")
            r.setflags(write=False)
            object.__setattr__(self, "density", r)

    @property
    def is_ket(self) -> bool:
        return self.vector is not None

    def to_density(self) -> np.ndarray:
        if self.vector is not None:
            return np.outer(self.vector, self.vector.conj())
        return self.density


# ---------------------------------------------------------------------------
# elementary operators


def destroy(n: int) -> np.ndarray:
    """Truncated annihilation operator on an n-dimensional Fock space."""
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1).astype(complex)


def number(n: int) -> np.ndarray:
    return np.diag(np.arange(n, dtype=float)).astype(complex)


def matrix_unit(dim: int, j: int, k: int) -> np.ndarray:
    """|j><k| on a dim-dimensional factor (zero-based indices)."""
    m = np.zeros((dim, dim), dtype=complex)
    m[j, k] = 1.0
    return m


def tensor(space: HilbertSpace, factors: Sequence[np.ndarray | Operator | None]) -> Operator:
    """Kronecker product in declared factor order.

    `factors[i]` is a matrix on factor i, or None for the identity there.
    """
    if len(factors) != len(space.factor_dims):
        raise DimensionMismatchError(
            f"{len(factors)} factors supplied for a {len(space.factor_dims)}-factor space"
        )
    out = np.eye(1, dtype=complex)
    for i, (f, d) in enumerate(zip(factors, space.factor_dims)):
        if f is None:
            m = np.eye(d, dtype=complex)
        else:
            m = f.matrix if isinstance(f, Operator) else np.asarray(f, dtype=complex)
            if m.shape != (d, d):
                raise DimensionMismatchError(
                    f"factor {i} has shape {m.shape}, expected ({d},{d})"
                )
        out = np.kron(out, m)
    return Operator(space, out)


def embed(space: HilbertSpace, index: int, matrix: np.ndarray) -> Operator:
    """Single-factor operator embedded with identities elsewhere."""
    factors: list[np.ndarray | None] = [None] * len(space.factor_dims)
    factors[index] = matrix
    return tensor(space, factors)


def fock_ket(space: HilbertSpace, occupations: Sequence[int]) -> QuantumState:
    if len(occupations) != len(space.factor_dims):
        raise DimensionMismatchError("one occupation number per factor required")
    v = np.ones(1, dtype=complex)
    for n, d in zip(occupations, space.factor_dims):
        e = np.zeros(d, dtype=complex)
        e[n] = 1.0
        v = np.kron(v, e)
    return QuantumState(space, vector=v)


def coherent_amplitudes(alpha: complex, n_levels: int) -> np.ndarray:
    """Normalized coherent-state amplitudes in the truncated Fock basis."""
    n = np.arange(n_levels)
    log_fact = np.cumsum(np.log(np.maximum(n, 1)))
    amps = np.exp(-0.5 * abs(alpha) ** 2) * alpha ** n / np.exp(0.5 * log_fact)
    amps = amps.astype(complex)
    return amps / np.linalg.norm(amps)


# ---------------------------------------------------------------------------
# spectral decomposition


def eig_hermitian(op: Operator) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian operator.

    Phase convention: the largest-magnitude component of each eigenvector is
    made real positive (first index wins ties), so results are reproducible.
    """
    if not op.is_hermitian():
        raise NonHermitianError("eig_hermitian requires a Hermitian operator")
    w, v = np.linalg.eigh(0.5 * (op.matrix + op.matrix.conj().T))
    for k in range(v.shape[1]):
        i = int(np.argmax(np.abs(v[:, k])))
        phase = v[i, k] / abs(v[i, k])
        v[:, k] /= phase
    return w, v


# ---------------------------------------------------------------------------
# Lindblad evolution


def _check_collapse(space: HilbertSpace, collapse_ops) -> list[tuple[float, np.ndarray]]:
    out = []
    for rate, c in collapse_ops:
        if rate < 0:
            raise NegativeRateError(f"collapse rate {rate} < 0")
        if rate == 0:
            continue
        cm = c.matrix if isinstance(c, Operator) else np.asarray(c, dtype=complex)
        if cm.shape != (space.total_dim, space.total_dim):
            raise DimensionMismatchError("collapse operator on wrong space")
        out.append((float(rate), cm))
    return out


def evolve_lindblad(
    H: Operator | Callable[[float], Operator | np.ndarray],
    collapse_ops: Sequence[tuple[float, Operator]],
    rho0: QuantumState,
    t_grid: Sequence[float],
    tol: float = 1e-8,
) -> list[QuantumState]:
    """Integrate d rho/dt = i[rho, H] + sum_k gamma_k L[c_k] rho on t_grid (ns).

    H may be a static Operator or a callable t -> Operator/matrix schedule.
    Uses an adaptive embedded Runge-Kutta pair with local error below tol.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0 or np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be non-empty and ascending")
    space = rho0.space
    d = space.total_dim

    if callable(H):
        h_of_t = lambda t: np.asarray(
            H(t).matrix if isinstance(H(t), Operator) else H(t), dtype=complex
        )
        static_h = None
    else:
        if H.space != space:
            raise DimensionMismatchError("Hamiltonian and state live on different spaces")
        static_h = H.matrix
        h_of_t = None

    channels = _check_collapse(space, collapse_ops)
    cs = [c for _, c in channels]
    cdags = [c.conj().T for c in cs]
    cdcs = [cd @ c for cd, c in zip(cdags, cs)]
    rates = [g for g, _ in channels]

    def rhs(t, y):
        rho = y.reshape(d, d)
        h = static_h if static_h is not None else h_of_t(t)
        drho = 1j * (rho @ h - h @ rho)
        for g, c, cd, cdc in zip(rates, cs, cdags, cdcs):
            drho += g * (2.0 * (c @ rho @ cd) - cdc @ rho - rho @ cdc)
        return (TWO_PI * drho).reshape(-1)

    sol = solve_ivp(
        rhs,
        (t_grid[0], t_grid[-1]),
        rho0.to_density().reshape(-1),
        t_eval=t_grid,
        method="DOP853",
        rtol=tol,
        atol=tol,
    )
    if not sol.success:
        t_fail = sol.t[-1] if sol.t.size else t_grid[0]
        raise IntegrationError(f"integrator failed near t = {t_fail} ns: {sol.message}", t_fail)

    states = []
    for k in range(sol.y.shape[1]):
        rho = sol.y[:, k].reshape(d, d)
        rho = 0.5 * (rho + rho.conj().T)
        states.append(QuantumState(space, density=rho / np.trace(rho).real))
    return states


# ---------------------------------------------------------------------------
# Liouvillian and steady state


def liouvillian_matrix(H: Operator, collapse_ops) -> np.ndarray:
    """Matrix of the generator on row-major vectorized density matrices (1/ns)."""
    d = H.space.total_dim
    eye = np.eye(d, dtype=complex)
    h = H.matrix
    L = 1j * (np.kron(eye, h.T) - np.kron(h, eye))
    for g, c in _check_collapse(H.space, collapse_ops):
        cd = c.conj().T
        cdc = cd @ c
        L += g * (2.0 * np.kron(c, cd.T) - np.kron(cdc, eye) - np.kron(eye, cdc.T))
    return TWO_PI * L


def steady_state(H: Operator, collapse_ops) -> QuantumState:
    """Null vector of the vectorized Liouvillian, trace-normalized.

    Uniqueness is gated on the singular-value spectrum: the second-smallest
    singular value must exceed 1e6 times the smallest.
    """
    d = H.space.total_dim
    L = liouvillian_matrix(H, collapse_ops)
    sv = np.linalg.svd(L, compute_uv=False)
    gap = sv[-2] / max(sv[-1], np.finfo(float).tiny)
    if gap < 1e6:
        raise SteadyStateError(
            f"steady state not unique: singular-value gap {gap:.3e} < 1e6", gap
        )
    # solve the null-space problem with the trace constraint appended
    trace_row = np.eye(d, dtype=complex).reshape(-1)
    A = np.vstack([L, trace_row])
    b = np.zeros(d * d + 1, dtype=complex)
    b[-1] = 1.0
    rho, *_ = np.linalg.lstsq(A, b, rcond=None)
    rho = rho.reshape(d, d)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    resid = np.abs(L @ rho.reshape(-1)).max()
    if resid > 1e-9 * max(1.0, np.abs(L).max()):
        raise SteadyStateError(f"steady-state residual {resid:.3e} too large")
    return QuantumState(H.space, density=rho)


# ---------------------------------------------------------------------------
# expectations and metrics


def expectation(state: QuantumState, op: Operator) -> complex:
    if state.space != op.space:
        raise DimensionMismatchError("state and operator on different spaces")
    if state.is_ket:
        return complex(state.vector.conj() @ (op.matrix @ state.vector))
    return complex(np.trace(op.matrix @ state.density))


def purity(state: QuantumState) -> float:
    rho = state.to_density()
    return float(np.trace(rho @ rho).real)


def trace_distance(a: QuantumState, b: QuantumState) -> float:
    diff = a.to_density() - b.to_density()
    w = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    return 0.5 * float(np.abs(w).sum())
