"""Quantum and mean-field propagation of light in nonlinear fiber.

The package integrates a master equation in fiber position for reduced
two-mode models (pair generation, frequency translation) and for a general
discretized multimode description with classical pump substitution, and
cross-checks them against an independent mean-field solver.
"""
from .algebra import (
    CompositeSpace,
    DimensionMismatchError,
    ModeSpace,
    NotHermitianError,
    Operator,
    annihilation_op,
    anticommutator,
    coherent_state,
    commutator,
    creation_op,
    dagger,
    embed,
    expectation,
    fock_state,
    hermitian_eigenvalues,
    identity_op,
    number_op,
)
from .config import ConfigError, ScenarioConfig, parse_config, render_config
from .lindblad import (
    DensityMatrix,
    IntegratorConfig,
    InvariantRecord,
    LindbladSystem,
    PropagationAborted,
    Trajectory,
    TrajectoryRecord,
    lindblad_rhs,
    monitor_invariants,
    propagate,
    step_rk4,
    superoperator,
)
from .models import (
    HBAR,
    OMEGA0_DEFAULT,
    BSParams,
    MultimodeParams,
    PhaseMatchReport,
    PumpWave,
    SpFWMParams,
    build_bragg,
    build_multimode,
    build_spfwm,
    phase_match,
    rotating_frame,
)
from .observables import (
    HeraldingMetrics,
    JointNumberTable,
    first_moments,
    heralding_metrics,
    joint_number_distribution,
)
from .semiclassical import (
    MeanFieldConfig,
    SpectralField,
    bs_moment_matrix,
    integrate_mean_field,
    mean_field_rhs,
    pump_depletion,
    reduced_mean_field,
    spfwm_moment_matrix,
)

__version__ = "1.0.0"

__all__ = [
    "BSParams",
    "CompositeSpace",
    "ConfigError",
    "DensityMatrix",
    "DimensionMismatchError",
    "HBAR",
    "HeraldingMetrics",
    "IntegratorConfig",
    "InvariantRecord",
    "JointNumberTable",
    "LindbladSystem",
    "MeanFieldConfig",
    "ModeSpace",
    "MultimodeParams",
    "NotHermitianError",
    "OMEGA0_DEFAULT",
    "Operator",
    "PhaseMatchReport",
    "PropagationAborted",
    "PumpWave",
    "ScenarioConfig",
    "SpFWMParams",
    "SpectralField",
    "Trajectory",
    "TrajectoryRecord",
    "annihilation_op",
    "anticommutator",
    "bs_moment_matrix",
    "build_bragg",
    "build_multimode",
    "build_spfwm",
    "coherent_state",
    "commutator",
    "creation_op",
    "dagger",
    "embed",
    "expectation",
    "first_moments",
    "fock_state",
    "heralding_metrics",
    "hermitian_eigenvalues",
    "identity_op",
    "integrate_mean_field",
    "joint_number_distribution",
    "lindblad_rhs",
    "mean_field_rhs",
    "monitor_invariants",
    "number_op",
    "parse_config",
    "phase_match",
    "propagate",
    "pump_depletion",
    "reduced_mean_field",
    "render_config",
    "rotating_frame",
    "spfwm_moment_matrix",
    "step_rk4",
    "superoperator",
]
