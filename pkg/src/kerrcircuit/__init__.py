"""Cross-Kerr nonlinearity between two cavity modes mediated by a coupled
charge-qubit molecule: level structure, adiabatic elimination, brute-force
cross-checks, and the entangled-cat gate built on the effective interaction.

Units: all energies and rates are (angular frequency)/2pi in GHz; times in ns.
"""

from .core import (
    HilbertSpace,
    IntegrationError,
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
from .dynamics import (
    CatProtocolResult,
    KerrParams,
    cat_protocol,
    coherent_overlap,
    compare_full_vs_effective,
    fidelity,
    kerr_evolve,
    two_mode_coherent,
)
from .elimination import (
    EliminationSingularError,
    MomentExpansion,
    Susceptibilities,
    SweepTable,
    chi_closed_forms,
    conditional_phase_oracle,
    stationary_moments,
    susceptibilities,
    sweep,
)
from .molecule import (
    CouplingFactors,
    LevelStructure,
    MoleculeParams,
    PumpParams,
    build_h0,
    coupling_factors,
    derive_nscheme,
    level_structure,
    operator_in_eigenbasis,
    pump_hamiltonian,
)
from .nscheme import (
    AdiabaticReport,
    EliminationInvalidError,
    NSchemeParams,
    Trajectory,
    Truncation,
    adiabatic_check,
    build_hsys,
    collapse_operators,
    conserved_excitations,
    mode_op,
    sigma,
    simulate,
)

__version__ = "0.1.0"
