"""metroq: simulate and verify sequential, classical-parallel and
entangled-parallel phase-estimation strategies at desk scale."""

from .channels import (
    KrausChannel,
    amplitude_damping,
    apply_channel,
    bit_phase_flip,
    dephasing,
    identity_channel,
    is_diag_or_antidiag,
    is_unital,
)
from .equivalence import (
    BranchRecord,
    ConversionCertificate,
    convert_general_n,
    convert_n2,
    counterexample,
    effective_sequential_channel,
    generalized_strategy_certificate,
    noise_conversion_residual,
    noisy_conversion_valid_beyond_n2,
    unaveraged_counterexample_fisher,
    useful_entanglement_check,
)
from .fock import (
    FockVector,
    evolve_single_mode,
    evolve_two_mode,
    n0_equivalence_certificate,
    n0_state,
    noon_equivalence_certificate,
    noon_fringe_zeros,
    noon_state,
    symmetrization_map,
)
from .information import (
    PrecisionBound,
    cfi_binary,
    collective_generator,
    crb,
    frequency_bound_dephasing,
    operating_phase,
    optimal_frequency_bound,
    phase_bound_dephasing,
    qfi_pure,
    time_advantage,
)
from .linalg import (
    ATOL_IDENTITY,
    ATOL_PREDICATE,
    fidelity_up_to_phase,
    kron,
    partial_trace,
    project_subsystem,
    trace_distance,
    unvec,
    vec,
    vec_identity_residual,
)
from .simulate import (
    ExperimentConfig,
    ScalingReport,
    ScalingRow,
    coincidence_probability,
    estimate_phase,
    evolve_parallel_entangled,
    evolve_sequential,
    run_trials,
    scaling_experiment,
)
from .states import (
    Generator,
    StrategyKind,
    StrategySpec,
    classical_corr_state,
    ghz_like,
    ghz_state,
    u_phi,
)

__version__ = "0.1.0"
