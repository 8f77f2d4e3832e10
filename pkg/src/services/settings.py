"""
Settings management services

Builds the effective CliConfig from, in increasing priority:

1. bundled defaults (templates/app_config.json)
2. the user's settings.json
3. the AKZETA_CACHE environment variable
4. command-line flags

Both JSON files use the same nested sections (numerics, verification,
cache, output); keys starting with '_comment' are ignored.
"""

import logging
import os
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from ..core.interfaces import ConfigError
from .user_config import (
    CACHE_ENV_VAR, get_bundled_resource_path, get_default_cache_path, load_json_config, load_settings
)

logger = logging.getLogger(__name__)

APP_CONFIG = 'templates/app_config.json'

# section.key in the JSON files -> CliConfig field
FIELD_MAP = {
    ('numerics', 'precision_bits'): 'precision_bits',
    ('numerics', 'guard_bits'): 'guard_bits',
    ('numerics', 'step_budget'): 'step_budget',
    ('numerics', 'z_cap'): 'z_cap',
    ('numerics', 'mzv_method'): 'mzv_method',
    ('verification', 'tolerance_level1'): 'tolerance_level1',
    ('verification', 'tolerance_level2'): 'tolerance_level2',
    ('verification', 'z_grid'): 'z_grid',
    ('verification', 'jobs'): 'jobs',
    ('cache', 'enabled'): 'use_cache',
    ('cache', 'path'): 'cache_path',
    ('output', 'format'): 'output_format',
}


@dataclass
class CliConfig:
    """Effective configuration for one CLI run"""
    precision_bits: int = 128
    tolerance_level1: float = 1e-20
    tolerance_level2: float = 1e-10
    z_grid: Tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9)
    cache_path: Optional[str] = None
    use_cache: bool = True
    output_format: str = 'text'
    step_budget: int = 200000
    z_cap: float = 0.95
    guard_bits: int = 32
    mzv_method: str = 'holder'
    jobs: int = 1
    sources: Tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['z_grid'] = list(self.z_grid)
        data['sources'] = list(self.sources)
        return data


def _apply_sections(config: CliConfig, data: Dict[str, Any], source: str) -> CliConfig:
    """Overlay the recognised keys of a nested settings dictionary."""
    updates: Dict[str, Any] = {}
    for section, values in data.items():
        if section.startswith('_comment') or not isinstance(values, dict):
            continue
        for key, value in values.items():
            if key.startswith('_comment'):
                continue
            name = FIELD_MAP.get((section, key))
            if name is None:
                logger.warning(f"Ignoring unknown setting {section}.{key} in {source}")
                continue
            updates[name] = value
    if not updates:
        return config
    if 'z_grid' in updates:
        try:
            updates['z_grid'] = tuple(float(z) for z in updates['z_grid'])
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid z_grid in {source}: {e}") from e
    return replace(config, sources=config.sources + (source,), **updates)


def load_config(overrides: Optional[Dict[str, Any]] = None,
                bundled_path: Optional[Path] = None,
                user_path: Optional[Path] = None) -> CliConfig:
    """
    Resolve the effective configuration.

    Args:
        overrides: CliConfig fields set on the command line (None values are skipped)
        bundled_path: Bundled defaults file (defaults to templates/app_config.json)
        user_path: User settings file (defaults to settings.json in the config directory)

    Returns:
        CliConfig with `sources` listing what contributed

    Raises:
        ConfigError: if a settings file holds a malformed value
    """
    config = CliConfig()
    bundled_path = bundled_path or get_bundled_resource_path(APP_CONFIG)
    config = _apply_sections(config, load_json_config(bundled_path, {}), str(bundled_path))
    user_data = load_json_config(user_path, {}) if user_path else load_settings()
    config = _apply_sections(config, user_data, str(user_path or 'settings.json'))

    if os.environ.get(CACHE_ENV_VAR):
        config = replace(config, cache_path=str(get_default_cache_path()),
                         sources=config.sources + (CACHE_ENV_VAR,))
    elif config.cache_path is None:
        config = replace(config, cache_path=str(get_default_cache_path()))

    if overrides:
        values = {k: v for k, v in overrides.items() if v is not None}
        unknown = set(values) - set(CliConfig.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"Unknown configuration field(s): {', '.join(sorted(unknown))}")
        if 'z_grid' in values:
            values['z_grid'] = tuple(values['z_grid'])
        if values:
            config = replace(config, sources=config.sources + ('command line',), **values)

    logger.debug(f"Effective configuration: {config.to_dict()}")
    return config
