"""Experiment files.

Flat `key = value` files hold one `[experiment]` or several `[experiment <name>]`
sections; keys under `[DEFAULT]` apply to every section. YAML files hold a list
of mappings, or `experiments:` plus optional shared `defaults:`. A list of
merge counts (`merge_ops = 100, 150, 300`) expands into one experiment each.
Relative paths are taken relative to the file.
"""
import configparser
import logging
from pathlib import Path
from typing import Any, Mapping, Optional

import yaml
from pydantic import ValidationError

from pipeline.models.experiment import ExperimentConfig
from utils.config import Settings, get_settings
from utils.errors import InputError, ParseError, UsageError

logger = logging.getLogger(__name__)

PATH_FIELDS = ("source_path", "target_path", "out_dir", "rules_path")
YAML_SUFFIXES = {".yml", ".yaml"}


def _merge_counts(value: Any) -> list[Optional[int]]:
    if value is None or value == "":
        return [None]
    if isinstance(value, (list, tuple)):
        items = list(value)
    elif isinstance(value, str):
        items = [part.strip() for part in value.split(",") if part.strip()]
    else:
        items = [value]
    try:
        return [int(item) for item in items] or [None]
    except (TypeError, ValueError):
        raise UsageError(f"merge_ops must be an integer or a list of integers, got {value!r}")


def experiments_from_values(values: Mapping[str, Any], label: str = "", base_dir: Path = Path("."),
                            overrides: Optional[Mapping[str, Any]] = None,
                            settings: Optional[Settings] = None,
                            origin: str = "command line") -> list[ExperimentConfig]:
    """Build the experiments one section describes; several merge counts give several experiments."""
    settings = settings or get_settings()
    fields = {key.replace("-", "_"): value for key, value in values.items()}
    unknown = sorted(set(fields) - set(ExperimentConfig.model_fields))
    if unknown:
        raise UsageError(f"{origin}: unknown experiment keys: {', '.join(unknown)}")

    for field in PATH_FIELDS:
        if fields.get(field):
            path = Path(fields[field])
            fields[field] = path if path.is_absolute() else base_dir / path
    fields.update({key: value for key, value in (overrides or {}).items() if value is not None})

    merge_counts = _merge_counts(fields.pop("merge_ops", None))
    explicit = fields.pop("name", None) or label
    strategy = str(fields.get("strategy", "experiment"))

    defaults = {"vocab_limit": settings.vocab_limit, "seed": settings.seed,
                "dev_count": settings.dev_count, "test_count": settings.test_count}
    configs = []
    for merges in merge_counts:
        if explicit:
            name = explicit if len(merge_counts) == 1 else f"{explicit}-{merges}"
        else:
            name = strategy if merges is None else f"{strategy}-{merges}"
        try:
            configs.append(ExperimentConfig.model_validate({**defaults, **fields, "name": name, "merge_ops": merges}))
        except ValidationError as e:
            error = e.errors()[0]
            where = ".".join(str(p) for p in error["loc"]) or "experiment"
            raise UsageError(f"{origin}: experiment '{name}': invalid {where}: {error['msg']}")
    return configs


def _read_ini(path: Path) -> list[tuple[str, dict]]:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as f:
            parser.read_file(f, source=str(path))
    except configparser.Error as e:
        raise ParseError(path, getattr(e, "lineno", 1), e.message.splitlines()[0])

    sections = []
    for section in parser.sections():
        head, _, label = section.partition(" ")
        if head != "experiment":
            logger.warning(f"{path}: ignoring section [{section}]")
            continue
        sections.append((label.strip(), dict(parser[section])))
    return sections


def _read_yaml(path: Path) -> list[tuple[str, dict]]:
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ParseError(path, mark.line + 1 if mark else 1, str(getattr(e, "problem", e)))

    shared: dict = {}
    if isinstance(data, dict):
        shared = data.get("defaults") or {}
        data = data.get("experiments")
    if not isinstance(data, list) or not isinstance(shared, dict):
        raise ParseError(path, 1, "expected a list of experiments or an 'experiments:' list")

    sections = []
    for position, entry in enumerate(data, start=1):
        if not isinstance(entry, dict):
            raise ParseError(path, 1, f"experiment #{position} is not a mapping")
        sections.append(("", {**shared, **entry}))
    return sections


def load_experiments(path: Path, overrides: Optional[Mapping[str, Any]] = None,
                     settings: Optional[Settings] = None) -> list[ExperimentConfig]:
    """Read every experiment in a config file; `overrides` (CLI flags) win over file values."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"Experiment file not found: {path}")

    sections = _read_yaml(path) if path.suffix.lower() in YAML_SUFFIXES else _read_ini(path)
    configs = []
    for label, values in sections:
        configs += experiments_from_values(values, label=label, base_dir=path.parent,
                                           overrides=overrides, settings=settings, origin=str(path))
    if not configs:
        raise UsageError(f"{path}: no [experiment] sections found")

    names = [config.name for config in configs]
    duplicates = sorted({name for name in names if names.count(name) > 1})
    if duplicates:
        raise UsageError(f"{path}: duplicate experiment names: {', '.join(duplicates)}")
    logger.info(f"Loaded {len(configs)} experiments from {path}")
    return configs
