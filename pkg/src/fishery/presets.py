"""Shipped species presets and the demo experiment scenario."""

from __future__ import annotations

from .core import EconomyParams, RegrowthKind, RegrowthMode, SpeciesSpec
from .harness import CONFIG_VERSION, ExperimentConfig

DEMO_SEEDS = tuple(range(1, 21))


def demo_species() -> SpeciesSpec:
    return SpeciesSpec(
        species_id="carp",
        name="Carp",
        base_price=30,
        min_length=12.0,
        max_length=48.0,
        population_cap=200,
        initial_count=200,
        mutation_sd=2.0,
    )


def demo_config(
    seeds: tuple[int, ...] = DEMO_SEEDS,
    days: int = 100,
    policy: dict | None = None,
) -> ExperimentConfig:
    """The headline scenario: size-greedy keeping against a refilling pond."""
    return ExperimentConfig(
        specs=(demo_species(),),
        econ=EconomyParams(price_divisor=8, daily_keep_limit=10),
        regrowth=RegrowthMode(RegrowthKind.REFILL_TO_CAP),
        policy=policy or {"policy": "greedy_large", "threshold": {"mode": "species_mean"}},
        casts_per_day=30,
        days=days,
        seeds=tuple(seeds),
    )


def demo_config_dict() -> dict:
    """The demo scenario as a plain config document (matches data/demo_config.json)."""
    return {
        "config_version": CONFIG_VERSION,
        "specs": [
            {
                "species_id": "carp",
                "name": "Carp",
                "base_price": 30,
                "min_length": 12.0,
                "max_length": 48.0,
                "population_cap": 200,
                "initial_count": 200,
                "mutation_sd": 2.0,
            }
        ],
        "econ": {"price_divisor": 8, "daily_keep_limit": 10},
        "regrowth": {"mode": "refill_to_cap"},
        "policy": {"policy": "greedy_large", "threshold": {"mode": "species_mean"}},
        "casts_per_day": 30,
        "days": 100,
        "seeds": list(DEMO_SEEDS),
    }


def session_presets() -> dict[str, dict]:
    """Built-in presets for interactive sessions, keyed by preset name.

    Interactive play defaults to refill-to-cap regrowth so a solo player can
    watch decline and recovery within minutes.
    """
    pond = {
        "specs": [demo_species()],
        "econ": EconomyParams(),
        "regrowth": RegrowthMode(RegrowthKind.REFILL_TO_CAP),
        "context": frozenset(),
    }
    lake = {
        "specs": [
            SpeciesSpec(
                species_id="carp",
                name="Carp",
                base_price=30,
                min_length=12.0,
                max_length=48.0,
                population_cap=120,
                initial_count=120,
            ),
            SpeciesSpec(
                species_id="bass",
                name="Largemouth Bass",
                base_price=50,
                min_length=10.0,
                max_length=38.0,
                population_cap=80,
                initial_count=80,
            ),
            SpeciesSpec(
                species_id="trout",
                name="Rainbow Trout",
                base_price=65,
                min_length=8.0,
                max_length=30.0,
                population_cap=60,
                initial_count=60,
            ),
        ],
        "econ": EconomyParams(),
        "regrowth": RegrowthMode(RegrowthKind.REFILL_TO_CAP),
        "context": frozenset(),
    }
    return {"pond": pond, "lake": lake}
