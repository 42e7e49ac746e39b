"""Deterministic evolving fish populations.

The substrate is a set of per-species populations of individually tracked
fish plus one seeded PRNG. Randomness is consumed in a fixed, documented
order (initial lengths in species order, one draw per cast, then parent
pick / mutation gate / length step per birth), so an identical seed and
operation sequence always replays the identical trajectory.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

DEFAULT_SENDER = "Demetrius"

LETTER_TEMPLATE = (
    "Dear {player}, I was conducting a field study on {fish} the other day, "
    "and I discovered that the population is in decline. To prevent a fishery "
    "collapse, please release any large {fish} you catch until the population "
    "is stable again. -{sender}"
)

# Fraction of the length range used for the default advisory trigger and the
# clearing hysteresis band. A fresh uniform population (mean near midpoint)
# starts healthy under these defaults.
ADVISORY_THRESHOLD_FRACTION = 0.4
ADVISORY_HYSTERESIS_FRACTION = 0.05


class FisheryError(Exception):
    """Base class for all simulator errors."""


class ConfigurationError(FisheryError):
    """A species spec or run configuration violates its constraints."""


class NotInPopulationError(FisheryError):
    """Referenced fish is not living in any population."""


class DuplicateFishError(FisheryError):
    """Fish with this id is already living in a population."""


class CapExceededError(FisheryError):
    """Adding the fish would push its species over the population cap."""


class UnknownSpeciesError(FisheryError):
    """No species with this id exists in the fishery."""


@dataclass(frozen=True)
class SpeciesSpec:
    """Immutable per-species parameters.

    ``advisory_threshold`` defaults to 40% of the way up the length range;
    ``advisory_hysteresis`` defaults to 5% of the range. Both may be set
    explicitly.
    """

    species_id: str
    name: str
    base_price: int
    min_length: float
    max_length: float
    population_cap: int
    initial_count: int
    mutation_sd: float = 2.0
    mutation_prob: float = 1.0
    availability_tags: frozenset[str] = frozenset()
    advisory_threshold: float | None = None
    advisory_hysteresis: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "availability_tags", frozenset(self.availability_tags))
        if not self.species_id:
            raise ConfigurationError("species_id must be a non-empty token")
        if self.min_length <= 0:
            raise ConfigurationError(f"{self.species_id}: min_length must be > 0")
        if not self.min_length < self.max_length:
            raise ConfigurationError(f"{self.species_id}: min_length must be < max_length")
        if self.base_price < 0 or int(self.base_price) != self.base_price:
            raise ConfigurationError(f"{self.species_id}: base_price must be a non-negative integer")
        if self.population_cap < 1:
            raise ConfigurationError(f"{self.species_id}: population_cap must be >= 1")
        if not 1 <= self.initial_count <= self.population_cap:
            raise ConfigurationError(
                f"{self.species_id}: initial_count must be in [1, population_cap]"
            )
        if self.mutation_sd < 0:
            raise ConfigurationError(f"{self.species_id}: mutation_sd must be >= 0")
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ConfigurationError(f"{self.species_id}: mutation_prob must be in [0, 1]")
        span = self.max_length - self.min_length
        if self.advisory_threshold is None:
            object.__setattr__(
                self, "advisory_threshold", self.min_length + ADVISORY_THRESHOLD_FRACTION * span
            )
        if self.advisory_hysteresis is None:
            object.__setattr__(
                self, "advisory_hysteresis", ADVISORY_HYSTERESIS_FRACTION * span
            )
        if not self.min_length <= self.advisory_threshold <= self.max_length:
            raise ConfigurationError(
                f"{self.species_id}: advisory_threshold must lie within the length bounds"
            )
        if self.advisory_hysteresis < 0:
            raise ConfigurationError(f"{self.species_id}: advisory_hysteresis must be >= 0")


@dataclass(frozen=True)
class Fish:
    """One individual. Length is real-valued; display rounding is a UI concern."""

    fish_id: int
    species_id: str
    length: float


@dataclass(frozen=True)
class EconomyParams:
    price_divisor: float = 8.0
    daily_keep_limit: int = 10

    def __post_init__(self) -> None:
        if self.price_divisor <= 0:
            raise ConfigurationError("price_divisor must be > 0")
        if self.daily_keep_limit < 1:
            raise ConfigurationError("daily_keep_limit must be >= 1")


class RegrowthKind(Enum):
    # One birth per day total, parent drawn from the pooled under-cap species.
    POOLED = "pooled"
    # One birth per under-cap species per day.
    PER_SPECIES = "per_species"
    # Repeat per-species births until every species is at cap or extinct.
    REFILL_TO_CAP = "refill_to_cap"


@dataclass(frozen=True)
class RegrowthMode:
    kind: RegrowthKind = RegrowthKind.POOLED
    births_per_day: int = 1

    def __post_init__(self) -> None:
        if self.births_per_day < 1:
            raise ConfigurationError("births_per_day must be >= 1")


class Transition(Enum):
    ACTIVATED = "activated"
    CLEARED = "cleared"


@dataclass(frozen=True)
class AdvisoryLetter:
    species_id: str
    day: int
    body: str


@dataclass(frozen=True)
class SpeciesStats:
    count: int
    mean: float | None
    sd: float | None
    min: float | None
    max: float | None


@dataclass
class FisheryState:
    """Living populations, advisory flags, the PRNG, and the day counter.

    Single-writer: mutating operations on one state must be serialized by the
    caller. Distinct states are fully independent.
    """

    specs: dict[str, SpeciesSpec]
    populations: dict[str, list[Fish]]
    advisory_active: dict[str, bool]
    rng: np.random.Generator
    day: int = 0
    next_fish_id: int = 1
    # Index fish_id -> species_id for the fish currently in a population.
    living: dict[int, str] = field(default_factory=dict, repr=False)

    def all_fish(self) -> Iterator[Fish]:
        for pop in self.populations.values():
            yield from pop

    def total_count(self) -> int:
        return sum(len(pop) for pop in self.populations.values())


def init_fishery(specs: Sequence[SpeciesSpec], seed: int) -> FisheryState:
    """Create a fishery with per-species initial populations.

    Initial lengths are drawn i.i.d. uniform over each species' length bounds,
    in the given species order, from a generator seeded with ``seed``.
    """
    if not specs:
        raise ConfigurationError("at least one species spec is required")
    ids = [s.species_id for s in specs]
    if len(set(ids)) != len(ids):
        raise ConfigurationError("species_id values must be distinct")
    state = FisheryState(
        specs={s.species_id: s for s in specs},
        populations={s.species_id: [] for s in specs},
        advisory_active={s.species_id: False for s in specs},
        rng=np.random.default_rng(seed),
    )
    for spec in specs:
        lengths = state.rng.uniform(spec.min_length, spec.max_length, spec.initial_count)
        for length in lengths:
            _add_fish(state, spec.species_id, float(length))
    return state


def _add_fish(state: FisheryState, species_id: str, length: float) -> Fish:
    fish = Fish(state.next_fish_id, species_id, length)
    state.next_fish_id += 1
    state.populations[species_id].append(fish)
    state.living[fish.fish_id] = species_id
    return fish


def sample_catch(state: FisheryState, context: frozenset[str] = frozenset()) -> Fish | None:
    """Pick one fish uniformly among all individuals of available species.

    A species is available when its tag set is empty or intersects ``context``.
    Rarity is emergent: each living fish is equally likely, so composition
    drives the odds. Returns None (no bite) when nothing is available; the
    fish is not removed. A no-bite consumes no randomness.
    """
    eligible: list[tuple[str, int]] = []
    total = 0
    for sid, spec in state.specs.items():
        pop = state.populations[sid]
        if pop and (not spec.availability_tags or spec.availability_tags & context):
            eligible.append((sid, len(pop)))
            total += len(pop)
    if total == 0:
        return None
    idx = int(state.rng.integers(total))
    for sid, n in eligible:
        if idx < n:
            return state.populations[sid][idx]
        idx -= n
    raise AssertionError("unreachable: index within total eligible count")


def remove_fish(state: FisheryState, fish_id: int) -> Fish:
    """Take a fish out of its population (caught and not thrown back)."""
    sid = state.living.get(fish_id)
    if sid is None:
        raise NotInPopulationError(f"fish {fish_id} is not in any population")
    pop = state.populations[sid]
    for i, fish in enumerate(pop):
        if fish.fish_id == fish_id:
            del pop[i]
            del state.living[fish_id]
            return fish
    raise AssertionError(f"living index out of sync for fish {fish_id}")


def return_fish(state: FisheryState, fish: Fish) -> None:
    """Throw a caught fish back; it is immediately catchable again."""
    spec = state.specs.get(fish.species_id)
    if spec is None:
        raise UnknownSpeciesError(f"unknown species {fish.species_id!r}")
    if fish.fish_id in state.living:
        raise DuplicateFishError(f"fish {fish.fish_id} is already in the population")
    pop = state.populations[fish.species_id]
    if len(pop) >= spec.population_cap:
        raise CapExceededError(
            f"returning fish {fish.fish_id} would exceed the cap for {fish.species_id}"
        )
    pop.append(fish)
    state.living[fish.fish_id] = fish.species_id


def mutate_length(parent_length: float, spec: SpeciesSpec, rng: np.random.Generator) -> float:
    """Offspring length: parent plus a gated gaussian step, clamped to bounds.

    Consumes one uniform (the mutation gate) and, when the gate passes, one
    normal draw. A child outside the bounds has its length set to the
    exceeded bound.
    """
    child = parent_length
    if rng.uniform() < spec.mutation_prob:
        child = parent_length + rng.normal(0.0, spec.mutation_sd)
    if child > spec.max_length:
        return spec.max_length
    if child < spec.min_length:
        return spec.min_length
    return child


def _spawn(state: FisheryState, parent: Fish) -> Fish:
    spec = state.specs[parent.species_id]
    child_length = mutate_length(parent.length, spec, state.rng)
    return _add_fish(state, parent.species_id, child_length)


def _under_cap_species(state: FisheryState) -> list[str]:
    # Extinction is absorbing: a species with zero fish never gets births.
    return [
        sid
        for sid, spec in state.specs.items()
        if 0 < len(state.populations[sid]) < spec.population_cap
    ]


def reproduce_daily(state: FisheryState, mode: RegrowthMode = RegrowthMode()) -> int:
    """Run the day's asexual births per the regrowth mode. Returns birth count."""
    births = 0
    if mode.kind is RegrowthKind.POOLED:
        for _ in range(mode.births_per_day):
            candidates = _under_cap_species(state)
            total = sum(len(state.populations[sid]) for sid in candidates)
            if total == 0:
                break
            idx = int(state.rng.integers(total))
            for sid in candidates:
                pop = state.populations[sid]
                if idx < len(pop):
                    _spawn(state, pop[idx])
                    births += 1
                    break
                idx -= len(pop)
    elif mode.kind is RegrowthKind.PER_SPECIES:
        for _ in range(mode.births_per_day):
            born_this_pass = 0
            for sid in _under_cap_species(state):
                pop = state.populations[sid]
                parent = pop[int(state.rng.integers(len(pop)))]
                _spawn(state, parent)
                born_this_pass += 1
            if born_this_pass == 0:
                break
            births += born_this_pass
    elif mode.kind is RegrowthKind.REFILL_TO_CAP:
        while True:
            candidates = _under_cap_species(state)
            if not candidates:
                break
            for sid in candidates:
                pop = state.populations[sid]
                parent = pop[int(state.rng.integers(len(pop)))]
                _spawn(state, parent)
                births += 1
    else:
        raise ConfigurationError(f"unknown regrowth kind {mode.kind!r}")
    return births


def sale_price(fish: Fish, spec: SpeciesSpec, econ: EconomyParams = EconomyParams()) -> int:
    """Base price plus the floored length/divisor bonus, in whole money units."""
    return spec.base_price + math.floor(fish.length / econ.price_divisor)


def mean_length(state: FisheryState, species_id: str) -> float | None:
    pop = state.populations.get(species_id)
    if pop is None:
        raise UnknownSpeciesError(f"unknown species {species_id!r}")
    if not pop:
        return None
    return sum(f.length for f in pop) / len(pop)


def check_advisories(state: FisheryState) -> list[tuple[str, Transition]]:
    """Flip advisory flags on threshold crossings; at most one transition each.

    A species activates when its mean length drops strictly below the
    advisory threshold, and clears only once the mean recovers past
    threshold + hysteresis. Empty species produce no transitions.
    """
    transitions: list[tuple[str, Transition]] = []
    for sid, spec in state.specs.items():
        mean = mean_length(state, sid)
        if mean is None:
            continue
        active = state.advisory_active[sid]
        if not active and mean < spec.advisory_threshold:
            state.advisory_active[sid] = True
            transitions.append((sid, Transition.ACTIVATED))
        elif active and mean >= spec.advisory_threshold + spec.advisory_hysteresis:
            state.advisory_active[sid] = False
            transitions.append((sid, Transition.CLEARED))
    return transitions


def render_letter(player_name: str, species_name: str, sender: str = DEFAULT_SENDER) -> str:
    """The scientist's population-decline letter, substituted verbatim."""
    return LETTER_TEMPLATE.format(player=player_name, fish=species_name, sender=sender)


def species_stats(state: FisheryState, species_id: str) -> SpeciesStats:
    """Exact sample statistics of the species' lengths (population sd)."""
    pop = state.populations.get(species_id)
    if pop is None:
        raise UnknownSpeciesError(f"unknown species {species_id!r}")
    n = len(pop)
    if n == 0:
        return SpeciesStats(0, None, None, None, None)
    lengths = [f.length for f in pop]
    mean = sum(lengths) / n
    var = sum((x - mean) ** 2 for x in lengths) / n
    return SpeciesStats(n, mean, math.sqrt(var), min(lengths), max(lengths))


# --- Canonical serialization -------------------------------------------------
#
# Fixed document shape and field order; lengths and spec bounds are printed
# with 6 decimal digits so equal states serialize to equal bytes. Used for
# snapshot tests and session persistence.


def _fmt(x: float) -> str:
    return "%.6f" % x


def _spec_to_json(spec: SpeciesSpec) -> str:
    tags = ", ".join(json.dumps(t) for t in sorted(spec.availability_tags))
    return (
        "{"
        f'"species_id": {json.dumps(spec.species_id)}, '
        f'"name": {json.dumps(spec.name)}, '
        f'"base_price": {spec.base_price}, '
        f'"min_length": {_fmt(spec.min_length)}, '
        f'"max_length": {_fmt(spec.max_length)}, '
        f'"population_cap": {spec.population_cap}, '
        f'"initial_count": {spec.initial_count}, '
        f'"mutation_sd": {_fmt(spec.mutation_sd)}, '
        f'"mutation_prob": {_fmt(spec.mutation_prob)}, '
        f'"availability_tags": [{tags}], '
        f'"advisory_threshold": {_fmt(spec.advisory_threshold)}, '
        f'"advisory_hysteresis": {_fmt(spec.advisory_hysteresis)}'
        "}"
    )


def to_canonical_json(state: FisheryState) -> str:
    species_chunks = []
    for sid in state.specs:
        fish_chunks = ", ".join(
            '{"id": %d, "length": %s}' % (f.fish_id, _fmt(f.length))
            for f in state.populations[sid]
        )
        species_chunks.append(
            '{"spec": %s, "fish": [%s]}' % (_spec_to_json(state.specs[sid]), fish_chunks)
        )
    advisories = ", ".join(
        "%s: %s" % (json.dumps(sid), "true" if state.advisory_active[sid] else "false")
        for sid in state.specs
    )
    rng_state = json.dumps(state.rng.bit_generator.state, sort_keys=True)
    return (
        '{"day": %d, "rng_state": %s, "species": [%s], "advisories": {%s}}'
        % (state.day, rng_state, ", ".join(species_chunks), advisories)
    )


def spec_from_dict(d: dict) -> SpeciesSpec:
    """Build a SpeciesSpec from a plain JSON-style dict (tags may be a list)."""
    if not isinstance(d, dict):
        raise ConfigurationError(f"species spec must be an object, got {type(d).__name__}")
    known = {
        "species_id", "name", "base_price", "min_length", "max_length",
        "population_cap", "initial_count", "mutation_sd", "mutation_prob",
        "availability_tags", "advisory_threshold", "advisory_hysteresis",
    }
    unknown = set(d) - known
    if unknown:
        raise ConfigurationError(f"unknown species fields: {sorted(unknown)}")
    kwargs = dict(d)
    if "availability_tags" in kwargs:
        kwargs["availability_tags"] = frozenset(kwargs["availability_tags"])
    try:
        return SpeciesSpec(**kwargs)
    except TypeError as exc:
        raise ConfigurationError(f"invalid species spec: {exc}") from exc


def from_canonical_json(text: str) -> FisheryState:
    doc = json.loads(text)
    specs = [spec_from_dict(entry["spec"]) for entry in doc["species"]]
    state = FisheryState(
        specs={s.species_id: s for s in specs},
        populations={s.species_id: [] for s in specs},
        advisory_active={sid: bool(v) for sid, v in doc["advisories"].items()},
        rng=np.random.default_rng(0),
        day=int(doc["day"]),
    )
    state.rng.bit_generator.state = doc["rng_state"]
    max_id = 0
    for entry in doc["species"]:
        sid = entry["spec"]["species_id"]
        for item in entry["fish"]:
            fish = Fish(int(item["id"]), sid, float(item["length"]))
            state.populations[sid].append(fish)
            state.living[fish.fish_id] = sid
            max_id = max(max_id, fish.fish_id)
    state.next_fish_id = max_id + 1
    return state
