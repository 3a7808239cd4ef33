"""
Scenario file loading and validation.

Handles YAML scenario parsing with environment variable expansion, named
parameter blocks and energies written with unit suffixes.
"""

import math
import os
import re
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

import yaml

from .errors import ConfigError, DomainError
from .spectrum import EnergyGrid

KINDS = ("single", "qpol", "two_mode", "absorption_linear", "absorption_third")

# Column header of the value column per kind
VALUE_COLUMNS = {
    "single": "S",
    "qpol": "S",
    "two_mode": "S",
    "absorption_linear": "alpha1",
    "absorption_third": "alpha3",
}

ENERGY_FIELDS = {
    "omega", "omega_ex", "omega_ex1", "omega_ex2", "g",
    "gamma_ex", "gamma_ex1", "gamma_ex2", "gamma_ph", "eta",
}
INT_FIELDS = {"n", "n_k", "n1", "n2"}
BOOL_FIELDS = {"normalize"}
CHOICE_FIELDS = {
    "linewidth": ("constant", "branch"),
    "mode": ("eigenvector", "printed"),
    "form": ("consistent", "printed"),
}

_ABSORPTION_FIELDS = (
    {"omega", "omega_ex", "g"},
    {"q", "dipole", "eta", "n_max", "tolerance", "normalize"},
)

# kind -> (required params, optional params)
PARAM_FIELDS: dict[str, tuple[set[str], set[str]]] = {
    "single": (
        {"omega", "omega_ex", "g"},
        {"gamma_ex", "gamma_ph", "alpha_sq", "scale", "q", "n", "linewidth"},
    ),
    "qpol": (
        {"omega", "omega_ex", "g"},
        {"gamma_ex", "gamma_ph", "alpha_sq", "scale", "q", "n", "s", "n_k", "linewidth"},
    ),
    "two_mode": (
        {"omega", "omega_ex1", "omega_ex2", "g"},
        {"gamma_ex1", "gamma_ex2", "gamma_ph", "q1", "q2", "n1", "n2",
         "alpha_sq", "scale", "linewidth", "mode", "form"},
    ),
    "absorption_linear": _ABSORPTION_FIELDS,
    "absorption_third": _ABSORPTION_FIELDS,
}

# Divisor that takes a value in the given unit to eV
UNIT_DIVISORS = {"ev": 1.0, "mev": 1e3, "uev": 1e6, "µev": 1e6, "μev": 1e6}

_ENERGY_PATTERN = re.compile(
    r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(ev|mev|uev|µev|μev)?\s*$",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class ScenarioConfig:
    """One scenario: a model kind, its parameters and the energy grid."""
    kind: str
    params: dict[str, Any]
    grid: EnergyGrid
    name: str = "scenario"
    output: str | None = None
    units: str = "eV"

    @property
    def output_name(self) -> str:
        return self.output or f"{self.name}.csv"

    @property
    def value_column(self) -> str:
        return VALUE_COLUMNS[self.kind]


def expand_env_vars(value: str) -> str:
    """Expand environment variables in a string.

    Supports ${VAR} and ${VAR:-default} syntax.
    """
    pattern = re.compile(r'\$\{([^}:]+)(?::-([^}]*))?\}')

    def replacer(match: re.Match) -> str:
        return os.environ.get(match.group(1), match.group(2) or "")

    return pattern.sub(replacer, value)


def expand_env_vars_recursive(obj: Any) -> Any:
    """Recursively expand environment variables in a data structure."""
    if isinstance(obj, str):
        return expand_env_vars(obj)
    elif isinstance(obj, dict):
        return {k: expand_env_vars_recursive(v) for k, v in obj.items()}
    elif isinstance(obj, list):
        return [expand_env_vars_recursive(item) for item in obj]
    return obj


def resolve_block_reference(value: Any, blocks: dict[str, Any]) -> Any:
    """Resolve block references ($block_name) in values."""
    if isinstance(value, str) and value.startswith("$"):
        block_name = value[1:]
        if block_name in blocks:
            return blocks[block_name]
        raise ConfigError(f"Unknown block: {block_name}")
    return value


def _normalise_unit(units: str) -> str:
    key = str(units).strip().lower()
    if key not in UNIT_DIVISORS:
        raise ConfigError(f"Unknown energy unit: {units!r}")
    return key


def parse_energy(value: Any, units: str = "eV") -> float:
    """
    Parse an energy into eV.

    Strings may carry a suffix ("200ueV", "1574 mev", "1.75eV"); bare numbers
    and unsuffixed strings are taken in `units`.
    """
    default = _normalise_unit(units)
    if isinstance(value, bool):
        raise ConfigError(f"Expected an energy, got {value!r}")
    if isinstance(value, (int, float)):
        number, unit = float(value), default
    elif isinstance(value, str):
        match = _ENERGY_PATTERN.match(value)
        if match is None:
            raise ConfigError(f"Cannot parse energy {value!r}")
        number = float(match.group(1))
        unit = match.group(2).lower() if match.group(2) else default
    else:
        raise ConfigError(f"Expected an energy, got {value!r}")
    if not math.isfinite(number):
        raise ConfigError(f"Energy must be finite, got {value!r}")
    return number / UNIT_DIVISORS[unit]


def _parse_number(value: Any, key: str) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None


def _parse_int(value: Any, key: str) -> int:
    number = _parse_number(value, key)
    if not number.is_integer():
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    return int(number)


def _parse_bool(value: Any, key: str) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.strip().lower() in ("true", "false"):
        return value.strip().lower() == "true"
    raise ConfigError(f"{key}: expected true or false, got {value!r}")


def parse_param(key: str, value: Any, units: str) -> Any:
    """Coerce one parameter to its internal type (energies to eV)."""
    if key in ENERGY_FIELDS:
        return parse_energy(value, units)
    if key in INT_FIELDS:
        return _parse_int(value, key)
    if key in BOOL_FIELDS:
        return _parse_bool(value, key)
    if key in CHOICE_FIELDS:
        if value not in CHOICE_FIELDS[key]:
            raise ConfigError(f"{key}: expected one of {CHOICE_FIELDS[key]}, got {value!r}")
        return value
    if key == "n_max":
        return "auto" if value == "auto" else _parse_int(value, key)
    return _parse_number(value, key)


def parse_grid(data: Any, units: str) -> EnergyGrid:
    """Parse a {start, stop, points} mapping."""
    if not isinstance(data, dict):
        raise ConfigError("grid must be a mapping with start, stop and points")
    missing = {"start", "stop", "points"} - set(data)
    if missing:
        raise ConfigError(f"grid is missing {', '.join(sorted(missing))}")
    try:
        return EnergyGrid(
            start=parse_energy(data["start"], units),
            stop=parse_energy(data["stop"], units),
            points=_parse_int(data["points"], "points"),
        )
    except DomainError as e:
        raise ConfigError(f"invalid grid: {e}") from e


def _resolve_params(raw: Any, blocks: dict[str, Any]) -> dict[str, Any]:
    raw = resolve_block_reference(raw, blocks)
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError("params must be a mapping or a $block reference")

    resolved: dict[str, Any] = {}
    # "use: $block" pulls in a block; explicit keys override it
    if "use" in raw:
        base = resolve_block_reference(raw["use"], blocks)
        if not isinstance(base, dict):
            raise ConfigError("use: must reference a mapping block")
        resolved.update(base)
    for key, value in raw.items():
        if key != "use":
            resolved[key] = resolve_block_reference(value, blocks)
    return resolved


def parse_scenario(data: dict[str, Any], blocks: dict[str, Any] | None = None, index: int = 0) -> ScenarioConfig:
    """Parse one scenario mapping (already env-expanded)."""
    if not isinstance(data, dict):
        raise ConfigError(f"scenario {index} must be a mapping")
    blocks = blocks or {}

    kind = data.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"scenario {index}: kind must be one of {KINDS}, got {kind!r}")
    units = _normalise_unit(data.get("units", "eV"))

    raw_params = _resolve_params(data.get("params"), blocks)
    required, optional = PARAM_FIELDS[kind]
    unknown = set(raw_params) - required - optional
    if unknown:
        raise ConfigError(f"scenario {index}: unknown params for {kind}: {', '.join(sorted(unknown))}")
    missing = required - set(raw_params)
    if missing:
        raise ConfigError(f"scenario {index}: missing params for {kind}: {', '.join(sorted(missing))}")

    params = {key: parse_param(key, value, units) for key, value in raw_params.items()}

    if "grid" not in data:
        raise ConfigError(f"scenario {index}: grid is required")
    grid = parse_grid(resolve_block_reference(data["grid"], blocks), units)

    name = str(data.get("name") or f"{kind}_{index}")
    output = data.get("output")
    return ScenarioConfig(
        kind=kind,
        params=params,
        grid=grid,
        name=name,
        output=str(output) if output is not None else None,
        units="eV",
    )


def _merge_defaults(defaults: dict[str, Any], entry: dict[str, Any]) -> dict[str, Any]:
    merged = dict(defaults)
    for key, value in entry.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = {**merged[key], **value}
        else:
            merged[key] = value
    return merged


def parse_document(raw: Any) -> list[ScenarioConfig]:
    """Parse a loaded document holding one scenario or a `scenarios:` list."""
    if not isinstance(raw, dict):
        raise ConfigError("scenario file must contain a mapping")

    raw = expand_env_vars_recursive(raw)
    blocks = raw.get("blocks", {}) or {}
    if not isinstance(blocks, dict):
        raise ConfigError("blocks must be a mapping")

    if "scenarios" not in raw:
        return [parse_scenario(raw, blocks)]

    entries = raw["scenarios"]
    if not isinstance(entries, list) or not entries:
        raise ConfigError("scenarios must be a nonempty list")
    defaults = raw.get("defaults", {}) or {}
    if isinstance(defaults.get("params"), str):
        defaults = {**defaults, "params": resolve_block_reference(defaults["params"], blocks)}

    configs = []
    for index, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ConfigError(f"scenario {index} must be a mapping")
        if isinstance(entry.get("params"), str):
            entry = {**entry, "params": resolve_block_reference(entry["params"], blocks)}
        configs.append(parse_scenario(_merge_defaults(defaults, entry), blocks, index))

    names = [c.output_name for c in configs]
    if len(set(names)) != len(names):
        raise ConfigError("scenarios write to the same output file")
    return configs


def load_scenarios(path: Path) -> list[ScenarioConfig]:
    """Load scenarios from a YAML (or JSON) file."""
    try:
        with open(path) as f:
            raw = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"Malformed config file {path}: {e}") from e
    return parse_document(raw)


def serialize_scenario(config: ScenarioConfig) -> dict[str, Any]:
    """Plain mapping that parse_scenario turns back into an equal config."""
    data: dict[str, Any] = {
        "name": config.name,
        "kind": config.kind,
        "units": "eV",
        "params": dict(config.params),
        "grid": asdict(config.grid),
    }
    if config.output is not None:
        data["output"] = config.output
    return data


def dump_scenarios(configs: list[ScenarioConfig]) -> str:
    """YAML text for a `scenarios:` document."""
    return yaml.safe_dump(
        {"scenarios": [serialize_scenario(c) for c in configs]},
        sort_keys=False,
        allow_unicode=True,
    )
