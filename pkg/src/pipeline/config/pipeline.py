import logging
import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import yaml

from clients.kegg_api.config import KeggAPIConfig
from core.config.services import EnrichmentConfig, ProfileConfig, RenderConfig
from core.config.system import CacheConfig
from core.models.pathways import PathwayId
from core.models.profiles import TimeSeriesDesign
from utils.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

CONFIG_FILE_ENV = "PATHMAP_CONFIG_FILE"

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class RunMode(str, Enum):
    MULTI = "multi"
    TIMESERIES = "timeseries"


# Flat keys shared by the YAML config file and the CLI long options
KNOWN_KEYS = frozenset(
    {
        "expr",
        "ko_map",
        "candidates",
        "go",
        "org",
        "out",
        "cache",
        "offline",
        "refresh",
        "mode",
        "timepoints",
        "replicate",
        "alpha",
        "expressed_threshold",
        "bins",
        "fc_threshold",
        "pseudocount",
        "replicate_test",
        "test_alpha",
        "agg",
        "palette",
        "pathway",
        "report_bundle",
        "workers",
        "log_level",
    }
)


@dataclass
class RunConfig:
    """Everything one ``pathmap run`` needs."""

    expr: Path
    ko_map: Path
    out_dir: Path
    candidates: Path | None = None
    go: Path | None = None
    org_code: str = "ko"
    mode: RunMode = RunMode.MULTI
    timepoints: tuple[str, ...] = ()
    replicates: dict[str, str] = field(default_factory=dict)
    pathways: tuple[PathwayId, ...] = ()
    report_bundle: bool = False
    workers: int = 4
    log_level: str = "INFO"
    cache: CacheConfig = field(default_factory=CacheConfig)
    kegg_api: KeggAPIConfig = field(default_factory=KeggAPIConfig)
    enrichment: EnrichmentConfig = field(default_factory=EnrichmentConfig)
    profile: ProfileConfig = field(default_factory=ProfileConfig)
    render: RenderConfig = field(default_factory=RenderConfig)

    def __post_init__(self):
        """Validate cross-field constraints."""
        if isinstance(self.mode, str):
            try:
                self.mode = RunMode(self.mode)
            except ValueError as e:
                raise ConfigurationError(
                    f"must be one of {[m.value for m in RunMode]}", "mode"
                ) from e

        if self.mode is RunMode.TIMESERIES and not self.timepoints:
            raise ConfigurationError("time-series mode requires --timepoints", "timepoints")

        if self.workers < 1:
            raise ConfigurationError("must be at least 1", "workers")

        if self.log_level.upper() not in LOG_LEVELS:
            raise ConfigurationError(f"must be one of {list(LOG_LEVELS)}", "log_level")
        self.log_level = self.log_level.upper()

    @property
    def design(self) -> TimeSeriesDesign | None:
        """Time-series design, present only in time-series mode."""
        if self.mode is not RunMode.TIMESERIES:
            return None
        return TimeSeriesDesign(time_points=self.timepoints, replicates=dict(self.replicates))

    @classmethod
    def load(
        cls,
        cli_overrides: Mapping[str, Any],
        config_file: Path | None = None,
    ) -> "RunConfig":
        """
        Merge defaults, an optional YAML config file and CLI flags (highest wins).

        Args:
            cli_overrides: Flat key/value pairs from the command line; None values
                mean "not given" and do not override.
            config_file: Flat YAML mapping; defaults to ``$PATHMAP_CONFIG_FILE``.

        Raises:
            ConfigurationError: Unknown key, unreadable file or invalid value
        """
        if config_file is None and os.getenv(CONFIG_FILE_ENV):
            config_file = Path(os.environ[CONFIG_FILE_ENV])

        values: dict[str, Any] = {}
        if config_file is not None:
            values.update(cls._read_config_file(config_file))
        values.update({k: v for k, v in cli_overrides.items() if v is not None})
        return cls.from_flat(values)

    @classmethod
    def from_flat(cls, values: Mapping[str, Any]) -> "RunConfig":
        """Build from flat keys named after the CLI long options."""
        unknown = sorted(set(values) - KNOWN_KEYS)
        if unknown:
            raise ConfigurationError(f"unknown keys {unknown}", unknown[0])

        for required in ("expr", "ko_map", "out"):
            if not values.get(required):
                raise ConfigurationError("is required", required)

        try:
            cache = CacheConfig(
                **_pick(values, cache_dir="cache", offline="offline", refresh="refresh")
            )
        except ValueError as e:
            raise ConfigurationError(str(e), "cache") from e

        sections: dict[str, Any] = {"cache": cache}
        builders = {
            "enrichment": (
                EnrichmentConfig,
                {"alpha": "alpha", "expressed_threshold": "expressed_threshold"},
            ),
            "profile": (
                ProfileConfig,
                {
                    "fc_threshold": "fc_threshold",
                    "pseudocount": "pseudocount",
                    "replicate_test": "replicate_test",
                    "test_alpha": "test_alpha",
                },
            ),
            "render": (
                RenderConfig,
                {"n_bins": "bins", "palette": "palette", "aggregation": "agg"},
            ),
        }
        for name, (config_cls, keys) in builders.items():
            try:
                sections[name] = config_cls(**_pick(values, **keys))
            except (TypeError, ValueError) as e:
                raise ConfigurationError(str(e), name) from e

        try:
            pathways = tuple(PathwayId.parse(p) for p in _as_list(values.get("pathway")))
        except ValueError as e:
            raise ConfigurationError(str(e), "pathway") from e

        try:
            workers = int(values.get("workers", 4))
        except (TypeError, ValueError) as e:
            raise ConfigurationError(
                f"must be an integer, got {values['workers']!r}", "workers"
            ) from e

        return cls(
            expr=Path(values["expr"]),
            ko_map=Path(values["ko_map"]),
            out_dir=Path(values["out"]),
            candidates=_optional_path(values.get("candidates")),
            go=_optional_path(values.get("go")),
            org_code=str(values.get("org", "ko")),
            mode=values.get("mode", RunMode.MULTI),
            timepoints=tuple(_as_list(values.get("timepoints"))),
            replicates=_parse_replicates(values.get("replicate")),
            pathways=pathways,
            report_bundle=bool(values.get("report_bundle", False)),
            workers=workers,
            log_level=str(values.get("log_level", "INFO")),
            **sections,
        )

    @staticmethod
    def _read_config_file(path: Path) -> dict[str, Any]:
        if not path.is_file():
            raise ConfigurationError(f"config file not found: {path}", "config")
        try:
            with open(path, encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"invalid YAML in {path}: {e}", "config") from e

        if not isinstance(data, dict):
            raise ConfigurationError(f"{path} must hold a flat key: value mapping", "config")
        logger.debug(f"Loaded {len(data)} settings from {path}")
        return {str(k).replace("-", "_"): v for k, v in data.items()}


def _pick(values: Mapping[str, Any], **mapping: str) -> dict[str, Any]:
    """Constructor kwargs for the flat keys that are present."""
    return {arg: values[key] for arg, key in mapping.items() if key in values}


def _optional_path(value: Any) -> Path | None:
    return Path(value) if value else None


def _as_list(value: Any) -> list[str]:
    """Accept a YAML list, a comma-separated string, or repeated CLI values."""
    if value is None:
        return []
    if isinstance(value, str):
        return [v.strip() for v in value.split(",") if v.strip()]
    items: list[str] = []
    for item in value:
        items.extend(_as_list(item))
    return items


def _parse_replicates(value: Any) -> dict[str, str]:
    """``COL=TP`` strings (or a YAML mapping) -> column -> time point."""
    if not value:
        return {}
    if isinstance(value, Mapping):
        return {str(k): str(v) for k, v in value.items()}
    replicates: dict[str, str] = {}
    for item in _as_list(value):
        column, sep, time_point = item.partition("=")
        if not sep or not column or not time_point:
            raise ConfigurationError(f"expected COL=TIMEPOINT, got '{item}'", "replicate")
        replicates[column.strip()] = time_point.strip()
    return replicates
