"""qchaos: chaoticity orders and PVM dynamical entropy of two-level unitaries.

A qubit unitary drives a perfect random number generator exactly when its PVM
dynamical entropy is maximal ("chaotic", |tr U| <= sqrt(2)); measuring only
every K-th iteration asks the same of U^K.  This package evaluates the
entropies (closed form and variational), classifies chaoticity at every
order, decides idempotency exactly on rational phases, constructs the studied
families of chaotic and non-idempotent unitaries, and simulates the measured
dynamics reproducibly.
"""

from .phases import (
    EigenphasePair,
    ExactUnitarySpec,
    PHASE_TOL,
    RationalPhase,
    TWO_PI,
    UNITARY_TOL,
    Unitary2,
    circular_distance,
    eigenphases_of,
    make_su2_from_psi,
    mod_2pi,
    power_eigenphases,
    rational_phase_order,
    require_unitary,
    trace_magnitude,
)
from .entropy import (
    EntropyResult,
    OptimizerOptions,
    PvmBasis,
    TransitionMatrix,
    basis_from_angles,
    eta,
    eta_array,
    markov_entropy_rate,
    measurement_probabilities,
    pvm_entropy_optimize,
    qubit_entropy_closed,
    theta_of,
    transition_matrix,
)
from .chaoticity import (
    BOUNDARY_TOL,
    ChaoticityRecord,
    ChaoticityReport,
    IdempotencyCapError,
    IdempotencyResult,
    SQRT2,
    Verdict,
    VerdictLabel,
    chaotic_order_fraction,
    chaoticity_scan,
    exact_theta_fraction,
    first_nonchaotic_order,
    idempotency_order,
    projective_idempotency_order,
    theta_at_order,
    verdict_at_order,
    verdict_of,
)
from .constructions import (
    IRRATIONAL_CERTIFIED,
    PrecisionPolicy,
    PrecisionSelfCheckError,
    QuadraticBuildResult,
    QuadraticRecipe,
    QuadraticSeed,
    RATIONAL,
    TraceSequence,
    UNKNOWN,
    build_chaotic_order,
    build_quadratic_unitary,
    build_rational_unitary,
    classify_phase_rationality,
    quadratic_trace_sequence,
    source_from_json,
    source_to_json,
)
from .simulate import (
    CensusResult,
    EntropyRateExperiment,
    InsufficientDataError,
    NoiseConfig,
    TrajectoryConfig,
    empirical_entropy_rate,
    empirical_transition_matrix,
    entropy_rate_experiment,
    monte_carlo_chaotic_fraction,
    noisy_phase_walk,
    sample_trajectory,
    write_trajectory_outputs,
)
from .rng import stream_generator

__version__ = "0.1.0"
