"""Minimum-error and unambiguous state discrimination at fixed failure
probability, compared against preparation-noncontextual bounds."""

from .enhancement import (
    GapProfile,
    RegionReport,
    SweepRow,
    gap,
    mixed_non_enhancement_interval,
    mixed_sweep,
    non_enhancement_interval,
    sweep,
)
from .errors import DomainError, UnsupportedConfigurationError
from .noncontextual import (
    FailureSplit,
    MixedSplit,
    NcBoundResult,
    NcRegime,
    equal_prior_switch_point,
    f_candidate,
    max_confidence_nc,
    nc_bound_grid_oracle,
    nc_bound_theorem1,
    nc_bound_theorem2,
    nc_equal_prior_regional,
    nc_minerr,
    nc_mixed_grid_oracle,
    nc_objective_max,
    nc_ud_limit,
    theorem2_breakpoints,
)
from .quantum import (
    DEFAULT_SEARCH,
    PovmOracleResult,
    QuantumResult,
    Regime,
    SearchConfig,
    closed_form_attainable,
    helstrom,
    inner_optimum,
    mixed_quantum_success,
    povm_oracle,
    quantum_success_closed,
    ud_failure_threshold,
)
from .qubit import (
    DiscriminationInstance,
    HermitianOp,
    NoisyInstance,
    Povm3,
    PovmDiagnostics,
    PureStatePair,
    depolarize,
    make_state_pair,
    validate_povm,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
