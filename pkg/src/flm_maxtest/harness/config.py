"""
Study configuration: a YAML or JSON document whose keys mirror the fields of
`StudyConfig`, with the τ policy as a nested mapping.

```yaml
family: scalar_on_function
variant: sparse
n: 50
r_grid: [0.0, 0.5, 1.0]
replications: 300
bootstrap: 500
significance: 0.05
tau:
  mode: grid
  grid: [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
  inner_b: 250
seed: 0
```
"""

import json
import logging
from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from flm_maxtest.constants import (
    DEFAULT_BOOTSTRAP_REPLICATES,
    DEFAULT_GRID_SIZE,
    DEFAULT_K_TRUNC,
    DEFAULT_Q,
    DEFAULT_R_GRID,
    DEFAULT_REPLICATIONS,
    DEFAULT_SIGNIFICANCE,
    MIN_BOOTSTRAP_REPLICATES,
)
from flm_maxtest.errors import ConfigError, DomainError
from flm_maxtest.simgen.slopes import FAMILIES, VARIANTS
from flm_maxtest.tauselect import TauPolicy
from flm_maxtest.utils import read_structured

logger = logging.getLogger(__name__)

BASES = ("empirical", "fourier")


@dataclass(frozen=True)
class StudyConfig:
    """
    Attributes:
        family: simulation family.
        variant: slope variant of the family.
        n: sample size of every replicate.
        r_grid: signal strengths, one table row each.
        replications: replicates per signal strength (R).
        bootstrap: bootstrap replicates of every test (B).
        significance: level ϱ.
        tau: τ policy, selection is redone on every replicate.
        p1: predictor basis size, defaults to n capped at the rank.
        p2: response basis size, same default.
        seed: master seed of the study.
        basis: `empirical` or `fourier`.
        grid_size: points of the uniform observation grid on [0, 1].
        k_trunc: Fourier terms of the dense slopes.
        q: predictor dimension of the function-on-vector family.
        record_timing: store wall times in the table. Off by default so
        that results files are reproducible byte for byte.
    """

    family: str
    variant: str
    n: int
    r_grid: tuple[float, ...] = DEFAULT_R_GRID
    replications: int = DEFAULT_REPLICATIONS
    bootstrap: int = DEFAULT_BOOTSTRAP_REPLICATES
    significance: float = DEFAULT_SIGNIFICANCE
    tau: TauPolicy = field(default_factory=TauPolicy)
    p1: int | None = None
    p2: int | None = None
    seed: int = 0
    basis: str = "empirical"
    grid_size: int = DEFAULT_GRID_SIZE
    k_trunc: int = DEFAULT_K_TRUNC
    q: int = DEFAULT_Q
    record_timing: bool = False

    def to_dict(self) -> dict:
        return {
            f.name: (
                self.tau.to_dict()
                if f.name == "tau"
                else list(self.r_grid)
                if f.name == "r_grid"
                else getattr(self, f.name)
            )
            for f in fields(self)
        }


def _is_integer(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _check_integer(raw: dict, key: str, minimum: int, violations: list[str]) -> None:
    if key not in raw:
        return
    value = raw[key]
    if not _is_integer(value) or value < minimum:
        violations.append(f"{key}: expected an integer >= {minimum}, got {value!r}")


def _check_choice(raw: dict, key: str, choices: tuple[str, ...], plural: str, violations: list[str]) -> None:
    if key in raw and raw[key] not in choices:
        violations.append(
            f"{key}: unknown {key} {raw[key]!r}; valid {plural}: {', '.join(choices)}"
        )


def _tau_policy(raw, violations: list[str]) -> TauPolicy | None:
    if not isinstance(raw, dict):
        violations.append(f"tau: expected a mapping, got {raw!r}")
        return None
    known = {"mode", "fixed_value", "grid", "inner_b"}
    unknown = sorted(set(raw) - known)
    if unknown:
        violations.append(f"tau: unknown keys {unknown}; valid keys: {sorted(known)}")
        return None
    grid = raw.get("grid")
    if grid is not None and (not isinstance(grid, list) or not all(_is_number(t) for t in grid)):
        violations.append(f"tau.grid: expected a list of numbers, got {grid!r}")
        return None
    if "fixed_value" in raw and not _is_number(raw["fixed_value"]):
        violations.append(f"tau.fixed_value: expected a number, got {raw['fixed_value']!r}")
        return None
    if "inner_b" in raw and not _is_integer(raw["inner_b"]):
        violations.append(f"tau.inner_b: expected an integer, got {raw['inner_b']!r}")
        return None
    if "grid" in raw:
        raw = {**raw, "grid": tuple(raw["grid"])}
    try:
        return TauPolicy(**raw)
    except DomainError as e:
        violations.append(f"tau: {e}")
        return None


def validate_study_config(raw: dict) -> StudyConfig:
    """
    Check a raw configuration mapping against the `StudyConfig` schema.

    Raises:
        ConfigError: listing every violation found.
    """
    if not isinstance(raw, dict):
        raise ConfigError([f"expected a mapping at the top level, got {type(raw).__name__}"])
    violations = []
    known = {f.name for f in fields(StudyConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        violations.append(f"unknown keys {unknown}; valid keys: {sorted(known)}")
    for key in ("family", "variant", "n"):
        if key not in raw:
            violations.append(f"{key}: missing")

    _check_choice(raw, "family", FAMILIES, "families", violations)
    _check_choice(raw, "variant", VARIANTS, "variants", violations)
    _check_choice(raw, "basis", BASES, "bases", violations)
    _check_integer(raw, "n", 3, violations)
    _check_integer(raw, "replications", 1, violations)
    _check_integer(raw, "bootstrap", MIN_BOOTSTRAP_REPLICATES, violations)
    _check_integer(raw, "seed", 0, violations)
    _check_integer(raw, "grid_size", 3, violations)
    _check_integer(raw, "k_trunc", 1, violations)
    _check_integer(raw, "q", 1, violations)
    for key in ("p1", "p2"):
        if raw.get(key) is not None:
            _check_integer(raw, key, 1, violations)

    if "significance" in raw:
        value = raw["significance"]
        if not _is_number(value) or not 0 < value < 1:
            violations.append(f"significance: expected a number in (0, 1), got {value!r}")
    if "r_grid" in raw:
        value = raw["r_grid"]
        if (
            not isinstance(value, list)
            or not value
            or not all(_is_number(r) and r >= 0 for r in value)
        ):
            violations.append(
                f"r_grid: expected a non-empty list of non-negative numbers, got {value!r}"
            )
    if "record_timing" in raw and not isinstance(raw["record_timing"], bool):
        violations.append(f"record_timing: expected a boolean, got {raw['record_timing']!r}")

    tau = _tau_policy(raw["tau"], violations) if "tau" in raw else TauPolicy()

    if violations:
        raise ConfigError(violations)

    values = {k: v for k, v in raw.items() if k != "tau"}
    if "r_grid" in values:
        values["r_grid"] = tuple(float(r) for r in values["r_grid"])
    if "significance" in values:
        values["significance"] = float(values["significance"])
    return StudyConfig(**values, tau=tau)


def read_study_document(path: Path) -> dict:
    """
    Raw content of a study configuration file (JSON when the suffix is
    `.json`, YAML otherwise).

    Raises:
        ConfigError: for unreadable or malformed files.
    """
    try:
        return read_structured(path)
    except OSError as e:
        raise ConfigError([f"{path}: cannot be read ({e.strerror})"])
    except (yaml.YAMLError, json.JSONDecodeError) as e:
        raise ConfigError([f"{path}: malformed document ({e})"])


def load_study_config(path: Path) -> StudyConfig:
    """
    Read and validate a study configuration file.

    Raises:
        ConfigError: for unreadable or malformed files and schema violations.
    """
    config = validate_study_config(read_study_document(path))
    logger.info(f"loaded study configuration from {path}")
    return config
