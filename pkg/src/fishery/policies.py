"""Simulated angler strategies as pure per-catch decision rules.

A policy sees one observation (the fish on the line plus what a player could
know) and answers Keep or Release. Policies never mutate anything; the driver
enforces the daily keep limit regardless of what a policy answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Mapping, Sequence

import numpy as np

from .core import ConfigurationError, SpeciesSpec


class Decision(Enum):
    KEEP = "keep"
    RELEASE = "release"


@dataclass(frozen=True)
class Observation:
    species_id: str
    length: float
    kept_today: int
    daily_keep_limit: int
    species_mean_length: float
    advisory_active: bool
    day: int


@dataclass(frozen=True)
class FixedThreshold:
    inches: float


class AboveSpeciesMean:
    """Marker: keep fish at or above the species' current mean length."""


ABOVE_SPECIES_MEAN = AboveSpeciesMean()

# Uniform callable shape used by the drivers; deterministic policies ignore rng.
Policy = Callable[[Observation, np.random.Generator], Decision]


def policy_keep_all(obs: Observation, rng=None) -> Decision:
    """Keep everything until the daily limit binds."""
    if obs.kept_today < obs.daily_keep_limit:
        return Decision.KEEP
    return Decision.RELEASE


def policy_greedy_large(
    obs: Observation, threshold: FixedThreshold | AboveSpeciesMean, rng=None
) -> Decision:
    """Keep fish at or above a threshold, online approximation of keeping the
    day's largest. The threshold is fixed or the species' current mean."""
    if obs.kept_today >= obs.daily_keep_limit:
        return Decision.RELEASE
    cutoff = (
        threshold.inches if isinstance(threshold, FixedThreshold) else obs.species_mean_length
    )
    return Decision.KEEP if obs.length >= cutoff else Decision.RELEASE


def policy_random(obs: Observation, p_keep: float, rng: np.random.Generator) -> Decision:
    """Size-blind control: keep with probability p_keep while under the limit."""
    if not 0.0 <= p_keep <= 1.0:
        raise ConfigurationError("p_keep must be in [0, 1]")
    if obs.kept_today >= obs.daily_keep_limit:
        return Decision.RELEASE
    return Decision.KEEP if rng.uniform() < p_keep else Decision.RELEASE


def policy_advisory_compliant(
    inner: Policy,
    obs: Observation,
    release_above: Mapping[str, float],
    rng: np.random.Generator = None,
) -> Decision:
    """Release large fish of a species under advisory; defer to ``inner`` otherwise.

    "Large" means at or above the species' advisory threshold, supplied in
    ``release_above`` keyed by species id.
    """
    if obs.advisory_active and obs.length >= release_above[obs.species_id]:
        return Decision.RELEASE
    return inner(obs, rng)


def make_policy(descriptor: Mapping, specs: Sequence[SpeciesSpec]) -> Policy:
    """Bind a policy descriptor from an experiment config into a Policy callable.

    Descriptors:
      {"policy": "keep_all"}
      {"policy": "greedy_large", "threshold": {"mode": "fixed", "inches": 25}}
      {"policy": "greedy_large", "threshold": {"mode": "species_mean"}}
      {"policy": "random", "p_keep": 0.5}
      {"policy": "advisory_compliant", "inner": {...}}
    """
    name = descriptor.get("policy")
    if name == "keep_all":
        return policy_keep_all
    if name == "greedy_large":
        spec = descriptor.get("threshold", {"mode": "species_mean"})
        mode = spec.get("mode")
        if mode == "fixed":
            if "inches" not in spec:
                raise ConfigurationError("fixed threshold requires 'inches'")
            threshold = FixedThreshold(float(spec["inches"]))
        elif mode == "species_mean":
            threshold = ABOVE_SPECIES_MEAN
        else:
            raise ConfigurationError(f"unknown threshold mode {mode!r}")
        return lambda obs, rng=None: policy_greedy_large(obs, threshold, rng)
    if name == "random":
        if "p_keep" not in descriptor:
            raise ConfigurationError("random policy requires 'p_keep'")
        p_keep = float(descriptor["p_keep"])
        if not 0.0 <= p_keep <= 1.0:
            raise ConfigurationError("p_keep must be in [0, 1]")
        return lambda obs, rng: policy_random(obs, p_keep, rng)
    if name == "advisory_compliant":
        if "inner" not in descriptor:
            raise ConfigurationError("advisory_compliant requires an 'inner' policy")
        inner = make_policy(descriptor["inner"], specs)
        release_above = {s.species_id: s.advisory_threshold for s in specs}
        return lambda obs, rng=None: policy_advisory_compliant(inner, obs, release_above, rng)
    raise ConfigurationError(f"unknown policy {name!r}")
