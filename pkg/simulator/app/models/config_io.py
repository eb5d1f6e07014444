"""
YAML loading and dumping for run configurations and sweep specs.
"""

import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type, TypeVar

import yaml
from pydantic import BaseModel, ValidationError

from .run_models import RunConfig, SweepSpec

ModelT = TypeVar("ModelT", bound=BaseModel)

_BOOL_TAG = "tag:yaml.org,2002:bool"


class ConfigLoader(yaml.SafeLoader):
    """SafeLoader with YAML 1.2 booleans: only true/false, so `off`, `on`, `yes` and `no` stay strings."""


ConfigLoader.yaml_implicit_resolvers = {
    first: [(tag, regexp) for tag, regexp in resolvers if tag != _BOOL_TAG]
    for first, resolvers in yaml.SafeLoader.yaml_implicit_resolvers.items()
}
ConfigLoader.add_implicit_resolver(_BOOL_TAG, re.compile(r"^(?:true|True|TRUE|false|False|FALSE)$"), list("tTfF"))


class ConfigError(ValueError):
    """Invalid configuration, with the offending field paths."""

    def __init__(self, problems: List[Tuple[str, str]], source: Optional[str] = None):
        self.problems = problems
        self.source = source
        where = f" in {source}" if source else ""
        details = "; ".join(f"{path}: {message}" for path, message in problems)
        super().__init__(f"Invalid configuration{where}: {details}")


def _field_path(loc: Tuple[Any, ...]) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


def validate_model(model: Type[ModelT], data: Dict[str, Any], source: Optional[str] = None) -> ModelT:
    """Validate a mapping, turning pydantic errors into ConfigError."""
    try:
        return model.model_validate(data)
    except ValidationError as e:
        problems = [(_field_path(err["loc"]), err["msg"]) for err in e.errors()]
        raise ConfigError(problems, source) from e


def load_yaml(path: Path) -> Dict[str, Any]:
    """Read a YAML mapping; an empty file is an empty mapping."""
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as fh:
            data = yaml.load(fh, Loader=ConfigLoader)
    except FileNotFoundError as e:
        raise ConfigError([("<file>", f"not found: {path}")], str(path)) from e
    except yaml.YAMLError as e:
        raise ConfigError([("<file>", f"not valid YAML: {e}")], str(path)) from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError([("<root>", "top level must be a mapping")], str(path))
    return data


def dump_yaml(data: Dict[str, Any]) -> str:
    """Deterministic YAML text."""
    return yaml.safe_dump(data, sort_keys=True, default_flow_style=False)


def _merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_run_config(path: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Load a RunConfig from a config file or a run_meta.yaml.

    Args:
        path: YAML file; a run_meta file is recognised by its `config` key
        overrides: nested mapping applied on top of the file contents

    Returns:
        Validated run configuration
    """
    data: Dict[str, Any] = {}
    source = None
    if path is not None:
        source = str(path)
        data = load_yaml(path)
        if "config" in data and isinstance(data["config"], dict):
            data = data["config"]
    if overrides:
        data = _merge(data, overrides)
    return validate_model(RunConfig, data, source)


def load_sweep_spec(path: Path, overrides: Optional[Dict[str, Any]] = None) -> SweepSpec:
    """Load a SweepSpec from YAML."""
    data = load_yaml(path)
    if overrides:
        data = _merge(data, overrides)
    return validate_model(SweepSpec, data, str(path))
