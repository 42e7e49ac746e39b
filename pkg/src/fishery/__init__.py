"""Deterministic evolutionary fishery simulator.

Core pieces: a seeded population substrate (catch, release, daily asexual
reproduction with gaussian length mutation, length-based pricing, advisory
letters), pure harvest policies, a batch experiment harness with a CLI, and
an HTTP session service for interactive play.
"""

from .core import (
    AdvisoryLetter,
    CapExceededError,
    ConfigurationError,
    DuplicateFishError,
    EconomyParams,
    Fish,
    FisheryError,
    FisheryState,
    NotInPopulationError,
    RegrowthKind,
    RegrowthMode,
    SpeciesSpec,
    SpeciesStats,
    Transition,
    UnknownSpeciesError,
    check_advisories,
    from_canonical_json,
    init_fishery,
    mean_length,
    mutate_length,
    remove_fish,
    render_letter,
    reproduce_daily,
    return_fish,
    sale_price,
    sample_catch,
    species_stats,
    to_canonical_json,
)
from .policies import (
    ABOVE_SPECIES_MEAN,
    Decision,
    FixedThreshold,
    Observation,
    make_policy,
    policy_advisory_compliant,
    policy_greedy_large,
    policy_keep_all,
    policy_random,
)
from .harness import (
    DayRecord,
    ExperimentConfig,
    ExperimentResult,
    run_day,
    run_experiment,
    write_csv,
    write_json_summary,
)

__version__ = "0.1.0"
