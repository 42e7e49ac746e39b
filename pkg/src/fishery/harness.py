"""Config-driven batch experiments.

A run steps seeded simulations through whole days (regrowth, advisories,
casting under a policy, end-of-day selling), records per-day statistics, and
writes CSV time series plus a versioned JSON summary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .core import (
    ConfigurationError,
    EconomyParams,
    FisheryState,
    RegrowthKind,
    RegrowthMode,
    SpeciesSpec,
    SpeciesStats,
    Transition,
    check_advisories,
    init_fishery,
    mean_length,
    remove_fish,
    reproduce_daily,
    sale_price,
    sample_catch,
    spec_from_dict,
    species_stats,
)
from .policies import Decision, Observation, Policy, make_policy

CONFIG_VERSION = 1
SUMMARY_VERSION = 1

# Hard ceilings so a typo'd config cannot request an unbounded run.
MAX_DAYS = 100_000
MAX_CASTS_PER_DAY = 100_000
MAX_SEEDS = 100_000

CSV_HEADER = "day,species,count,mean_len,sd_len,min_len,max_len,kept,released,money,advisory"


@dataclass(frozen=True)
class ExperimentConfig:
    specs: tuple[SpeciesSpec, ...]
    econ: EconomyParams
    regrowth: RegrowthMode
    policy: Mapping
    casts_per_day: int
    days: int
    seeds: tuple[int, ...]
    context: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if not self.specs:
            raise ConfigurationError("config needs at least one species")
        if not self.seeds:
            raise ConfigurationError("config needs at least one seed")
        if len(self.seeds) > MAX_SEEDS:
            raise ConfigurationError(f"too many seeds (max {MAX_SEEDS})")
        if not 0 <= self.casts_per_day <= MAX_CASTS_PER_DAY:
            raise ConfigurationError(f"casts_per_day must be in [0, {MAX_CASTS_PER_DAY}]")
        if not 1 <= self.days <= MAX_DAYS:
            raise ConfigurationError(f"days must be in [1, {MAX_DAYS}]")
        # Fails fast on duplicate ids or per-species invariants.
        init_fishery(list(self.specs), seed=0)
        # And on a malformed policy descriptor.
        make_policy(self.policy, self.specs)


@dataclass(frozen=True)
class SpeciesDay:
    count: int
    mean: float | None
    sd: float | None
    min: float | None
    max: float | None
    kept: int
    released: int
    money: int
    advisory: bool


@dataclass(frozen=True)
class DayRecord:
    day: int
    species: dict[str, SpeciesDay]
    fish_kept: int
    fish_released: int
    money_earned_today: int
    advisories_activated: tuple[str, ...]
    advisories_cleared: tuple[str, ...]


@dataclass
class SeedRun:
    seed: int
    records: list[DayRecord]
    initial_stats: dict[str, SpeciesStats]
    final_stats: dict[str, SpeciesStats]
    total_money: int
    extinct_species: list[str]
    advisories_activated: int
    advisories_cleared: int


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    runs: list[SeedRun]


def run_day(
    state: FisheryState,
    policy: Policy,
    econ: EconomyParams,
    regrowth: RegrowthMode,
    casts_per_day: int,
    context: frozenset[str] = frozenset(),
) -> DayRecord:
    """Advance the state by one full day and report what happened.

    Order: morning regrowth, advisory check, the day's casts (each catch goes
    through the policy; keeps are bounded by the daily limit), then the whole
    inventory is sold and the day counter advances.
    """
    day_number = state.day + 1
    reproduce_daily(state, regrowth)
    transitions = check_advisories(state)
    activated = tuple(sid for sid, t in transitions if t is Transition.ACTIVATED)
    cleared = tuple(sid for sid, t in transitions if t is Transition.CLEARED)

    inventory = []
    kept_today = 0
    kept_by_species = {sid: 0 for sid in state.specs}
    released_by_species = {sid: 0 for sid in state.specs}
    for _ in range(casts_per_day):
        fish = sample_catch(state, context)
        if fish is None:
            continue
        obs = Observation(
            species_id=fish.species_id,
            length=fish.length,
            kept_today=kept_today,
            daily_keep_limit=econ.daily_keep_limit,
            species_mean_length=mean_length(state, fish.species_id),
            advisory_active=state.advisory_active[fish.species_id],
            day=day_number,
        )
        decision = policy(obs, state.rng)
        if decision is Decision.KEEP and kept_today < econ.daily_keep_limit:
            remove_fish(state, fish.fish_id)
            inventory.append(fish)
            kept_today += 1
            kept_by_species[fish.species_id] += 1
        else:
            # The fish was never removed; releasing leaves the water as-is.
            released_by_species[fish.species_id] += 1

    money_by_species = {sid: 0 for sid in state.specs}
    for fish in inventory:
        money_by_species[fish.species_id] += sale_price(fish, state.specs[fish.species_id], econ)
    state.day = day_number

    species_days = {}
    for sid in state.specs:
        st = species_stats(state, sid)
        species_days[sid] = SpeciesDay(
            count=st.count,
            mean=st.mean,
            sd=st.sd,
            min=st.min,
            max=st.max,
            kept=kept_by_species[sid],
            released=released_by_species[sid],
            money=money_by_species[sid],
            advisory=state.advisory_active[sid],
        )
    return DayRecord(
        day=day_number,
        species=species_days,
        fish_kept=kept_today,
        fish_released=sum(released_by_species.values()),
        money_earned_today=sum(money_by_species.values()),
        advisories_activated=activated,
        advisories_cleared=cleared,
    )


def run_seed(config: ExperimentConfig, seed: int) -> SeedRun:
    state = init_fishery(list(config.specs), seed)
    policy = make_policy(config.policy, config.specs)
    initial = {sid: species_stats(state, sid) for sid in state.specs}
    records = []
    for _ in range(config.days):
        records.append(
            run_day(state, policy, config.econ, config.regrowth, config.casts_per_day, config.context)
        )
    final = {sid: species_stats(state, sid) for sid in state.specs}
    return SeedRun(
        seed=seed,
        records=records,
        initial_stats=initial,
        final_stats=final,
        total_money=sum(r.money_earned_today for r in records),
        extinct_species=[sid for sid, st in final.items() if st.count == 0],
        advisories_activated=sum(len(r.advisories_activated) for r in records),
        advisories_cleared=sum(len(r.advisories_cleared) for r in records),
    )


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run every seed sequentially; each seed's trajectory is independent."""
    return ExperimentResult(config, [run_seed(config, seed) for seed in config.seeds])


def mean_length_slope(records: Sequence[DayRecord], species_id: str) -> float:
    """OLS slope of a species' daily mean length, in inches per day."""
    from scipy import stats as sps

    points = [
        (record.day, record.species[species_id].mean)
        for record in records
        if record.species[species_id].mean is not None
    ]
    if len(points) < 2:
        raise ValueError(f"need at least 2 days with living {species_id!r} to fit a slope")
    days, means = zip(*points)
    return float(sps.linregress(days, means).slope)


def trend_test(result: ExperimentResult, species_id: str) -> dict:
    """Per-seed mean-length slopes and a two-sided t-test against zero slope.

    Small p-values mean the runs trend in a common direction; a size-blind
    policy should fail to reject zero.
    """
    from scipy import stats as sps

    slopes = [mean_length_slope(run.records, species_id) for run in result.runs]
    t = sps.ttest_1samp(slopes, 0.0)
    return {
        "slopes": slopes,
        "mean_slope": sum(slopes) / len(slopes),
        "t_stat": float(t.statistic),
        "p_value": float(t.pvalue),
    }


# --- Config file parsing ------------------------------------------------------


def config_from_dict(doc: Mapping) -> ExperimentConfig:
    if doc.get("config_version") != CONFIG_VERSION:
        raise ConfigurationError(
            f"config_version must be {CONFIG_VERSION}, got {doc.get('config_version')!r}"
        )
    try:
        specs = tuple(spec_from_dict(d) for d in doc["specs"])
        econ_doc = doc.get("econ", {})
        econ = EconomyParams(
            price_divisor=econ_doc.get("price_divisor", 8),
            daily_keep_limit=econ_doc.get("daily_keep_limit", 10),
        )
        regrowth_doc = doc.get("regrowth", {})
        regrowth = RegrowthMode(
            kind=RegrowthKind(regrowth_doc.get("mode", "pooled")),
            births_per_day=regrowth_doc.get("births_per_day", 1),
        )
        return ExperimentConfig(
            specs=specs,
            econ=econ,
            regrowth=regrowth,
            policy=doc["policy"],
            casts_per_day=int(doc["casts_per_day"]),
            days=int(doc["days"]),
            seeds=tuple(int(s) for s in doc["seeds"]),
            context=frozenset(doc.get("context", [])),
        )
    except KeyError as exc:
        raise ConfigurationError(f"config is missing required field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"malformed config: {exc}") from exc


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"config file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from exc
    validate_config_schema(doc)
    return config_from_dict(doc)


def validate_config_schema(doc: Mapping) -> None:
    """Check the document against the shipped JSON schema."""
    import jsonschema
    from importlib import resources

    schema = json.loads(
        resources.files("fishery").joinpath("data/config.schema.json").read_text("utf-8")
    )
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        raise ConfigurationError(f"config schema violation: {exc.message}") from exc


# --- Output writers -----------------------------------------------------------


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(records: Sequence[DayRecord], path: str | Path) -> None:
    """One row per (day, species): counts, length stats, harvest, money, advisory.

    Floats use shortest round-trip formatting so an independent reader
    recovers the exact in-memory values. Missing moments (extinct species)
    are empty cells. Lines end with LF.
    """
    lines = [CSV_HEADER]
    for record in records:
        for sid, day in record.species.items():
            lines.append(
                ",".join(
                    [
                        str(record.day),
                        sid,
                        str(day.count),
                        _cell(day.mean),
                        _cell(day.sd),
                        _cell(day.min),
                        _cell(day.max),
                        str(day.kept),
                        str(day.released),
                        str(day.money),
                        _cell(day.advisory),
                    ]
                )
            )
    _write_text(path, "\n".join(lines) + "\n")


def _stats_dict(st: SpeciesStats) -> dict:
    return {"count": st.count, "mean": st.mean, "sd": st.sd, "min": st.min, "max": st.max}


def summary_dict(result: ExperimentResult) -> dict:
    per_seed = []
    for run in result.runs:
        per_seed.append(
            {
                "seed": run.seed,
                "days": len(run.records),
                "initial": {sid: _stats_dict(st) for sid, st in run.initial_stats.items()},
                "final": {sid: _stats_dict(st) for sid, st in run.final_stats.items()},
                "total_money": run.total_money,
                "extinct_species": run.extinct_species,
                "advisories_activated": run.advisories_activated,
                "advisories_cleared": run.advisories_cleared,
            }
        )
    return {
        "summary_version": SUMMARY_VERSION,
        "policy": dict(result.config.policy),
        "days": result.config.days,
        "casts_per_day": result.config.casts_per_day,
        "seeds": list(result.config.seeds),
        "per_seed": per_seed,
    }


def write_json_summary(summary: Mapping, path: str | Path) -> None:
    _write_text(path, json.dumps(summary, indent=2) + "\n")


def write_json_series(records: Sequence[DayRecord], path: str | Path) -> None:
    doc = []
    for record in records:
        doc.append(
            {
                "day": record.day,
                "species": {
                    sid: {
                        "count": d.count, "mean": d.mean, "sd": d.sd, "min": d.min,
                        "max": d.max, "kept": d.kept, "released": d.released,
                        "money": d.money, "advisory": d.advisory,
                    }
                    for sid, d in record.species.items()
                },
                "fish_kept": record.fish_kept,
                "fish_released": record.fish_released,
                "money_earned_today": record.money_earned_today,
                "advisories_activated": list(record.advisories_activated),
                "advisories_cleared": list(record.advisories_cleared),
            }
        )
    _write_text(path, json.dumps(doc, indent=2) + "\n")


def _write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise FisheryIOError(f"cannot write {path}: {exc}") from exc


class FisheryIOError(Exception):
    """Output could not be written; message names the path."""


def write_outputs(result: ExperimentResult, out_dir: str | Path, fmt: str = "csv") -> list[Path]:
    """Write per-seed series plus summary.json into out_dir; returns the paths."""
    out_dir = Path(out_dir)
    written = []
    for run in result.runs:
        if fmt == "csv":
            path = out_dir / f"series_seed{run.seed}.csv"
            write_csv(run.records, path)
        elif fmt == "json":
            path = out_dir / f"series_seed{run.seed}.json"
            write_json_series(run.records, path)
        else:
            raise ConfigurationError(f"unknown output format {fmt!r}")
        written.append(path)
    summary_path = out_dir / "summary.json"
    write_json_summary(summary_dict(result), summary_path)
    written.append(summary_path)
    return written
