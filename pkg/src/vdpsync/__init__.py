"""Steady states and synchronization of the driven quantum van der Pol oscillator."""

from .experiments import (
    DrivePolicy,
    OmegaThError,
    SweepRecord,
    measure,
    omega_th,
    records_to_csv,
    sweep_gamma_ratio,
    sweep_kappa,
    write_csv,
)
from .fock import (
    InvalidStateError,
    adjoint,
    annihilation_operator,
    creation_operator,
    embed,
    fock_state,
    kronecker,
    number_operator,
    unvectorize,
    validate_density_matrix,
    vectorize,
)
from .liouvillian import (
    ModelParams,
    build_hamiltonian,
    build_liouvillian,
    dissipator_superoperator,
)
from .steady_state import (
    ConvergenceError,
    ConvergenceReport,
    IntegrationInstabilityError,
    SingularLiouvillianError,
    SteadyStateResult,
    convergence_check,
    default_time_step,
    evolve,
    steady_state_direct,
    steady_state_evolved,
    trace_distance,
)
from .synchronization import PhaseDistribution, coherence, mean_photon_number, phase_distribution

__version__ = "0.1.0"
