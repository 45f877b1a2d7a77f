"""Born-rule detection sampling and empirical-cdf convergence measurement.

The pipeline in one breath: describe a screen intensity profile
(:mod:`bornrate.wavefunction`), draw a reproducible detection stream from it
(:mod:`bornrate.sampler`), bin the detections over their sample range
(:mod:`bornrate.binning`), and measure how fast the binned empirical cdf
approaches the reference cdf as the record grows
(:mod:`bornrate.convergence`). ``bornrate.cli`` wraps the pipeline in
``simulate`` / ``analyze`` / ``sweep`` / ``report`` subcommands.
"""

__version__ = "0.1.0"

from .binning import (
    BinnedCounts,
    BinningScheme,
    EmpiricalCdf,
    bin_events,
    bin_index,
    choose_binning,
    empirical_cdf,
    merge_counts,
)
from .convergence import (
    BoundCheck,
    ConvergenceSeries,
    RateFit,
    ReplicaResult,
    SweepCell,
    check_bound,
    checkpoint_schedule,
    convergence_series,
    efficiency_sweep,
    fit_rate,
    run_replica,
    sup_deviation,
)
from .errors import (
    BornrateError,
    DegenerateDataError,
    DegenerateSpecError,
    DomainError,
    EventLogFormatError,
    InsufficientDataError,
    InvalidParameterError,
    InvalidSpecError,
    OuterRegionViolationError,
    QuadratureError,
    TruncationError,
)
from .sampler import (
    DetectionEvent,
    DetectorModel,
    EventLog,
    GoodnessOfFit,
    derive_seed,
    dkw_bound,
    goodness_of_fit,
    read_event_log,
    sample_events,
    write_event_log,
)
from .wavefunction import (
    BornDistribution,
    WavefunctionSpec,
    double_slit,
    gaussian,
    single_slit,
    spec_from_config,
    spec_to_config,
    tabulated,
    tabulated_from_csv,
    validate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
