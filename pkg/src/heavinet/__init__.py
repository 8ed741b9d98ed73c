"""Delayed Heaviside firing-rate networks: forward simulation, firing-interval
extraction, and connectivity reconstruction from interval data."""

from .core import (
    ConnectivityMatrix,
    ConstantInput,
    ExternalInput,
    FiringSchedule,
    NetworkConfig,
    PiecewiseConstantInput,
    TabulatedInput,
    connectivity_grid,
    generate_nonsymmetric_connectivity,
    generate_symmetric_connectivity,
)
from .diagnostics import DecayFit, SpectrumDiagnostics, fit_decay, spectrum_diagnostics
from .drive import ClosedFormDrive, build_drive, evaluate_drive
from .errors import (
    AssemblyError,
    ConfigError,
    DivergenceError,
    EmptySystemError,
    EventExplosionError,
    HeavinetError,
    InsufficientDataError,
    NumericalError,
    UnsupportedInputError,
)
from .experiment import (
    ExperimentReport,
    ExperimentSpec,
    NetworkSpec,
    ReplicateResult,
    reproduce_tables,
    run_experiment,
)
from .intervals import (
    IntervalSet,
    interval_intersection,
    interval_symmetric_difference_measure,
    interval_union,
    schedule_distance,
)
from .inversion import (
    InversionReport,
    NeuronSystem,
    SelectionSpec,
    TsvdSolution,
    assemble_all_systems,
    assemble_system,
    choose_kappa_morozov_adjusted,
    choose_kappa_morozov_standard,
    reconstruct_connectivity,
    tsvd_solve,
    verify_inequalities,
)
from .noise import (
    RNG_ALGORITHM,
    NoiseSpec,
    derive_seed,
    perturb_rhs,
    perturb_schedule,
    perturb_schedule_paired,
)
from .simulate import (
    GridTrajectory,
    PiecewiseExpTrajectory,
    check_c_assumption,
    check_c_assumption_sampled,
    estimate_beta_measure,
    euler_firing_schedule,
    extract_firing_schedule,
    simulate_euler,
    simulate_exact,
)

__version__ = "0.1.0"
