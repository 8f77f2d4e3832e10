"""
Configuration validation services

Checks a resolved CliConfig before any service is built, so that bad
settings are reported together instead of failing deep inside a run.
"""

from typing import Any, List, Tuple

from ..core.interfaces import SettingsValidator
from .settings import CliConfig


class ConfigValidator(SettingsValidator):
    """Validator for CliConfig"""

    MIN_PRECISION = 64
    Z_MIN = 0.05
    Z_MAX = 0.95
    VALID_FORMATS = {'text', 'json'}
    VALID_MZV_METHODS = {'holder', 'direct'}

    def validate(self, config: CliConfig) -> Tuple[bool, List[str]]:
        """
        Validate a configuration

        Args:
            config: Configuration to validate

        Returns:
            Tuple of (is_valid, error_messages)
        """
        errors = []
        errors.extend(self._validate_int('precision_bits', config.precision_bits, self.MIN_PRECISION))
        errors.extend(self._validate_int('guard_bits', config.guard_bits, 0))
        errors.extend(self._validate_int('step_budget', config.step_budget, 1))
        errors.extend(self._validate_int('jobs', config.jobs, 1))
        errors.extend(self._validate_tolerance('tolerance_level1', config.tolerance_level1))
        errors.extend(self._validate_tolerance('tolerance_level2', config.tolerance_level2))
        errors.extend(self._validate_z_grid(config.z_grid))
        errors.extend(self._validate_z_cap(config.z_cap))

        if config.output_format not in self.VALID_FORMATS:
            errors.append(f"output_format must be one of: {', '.join(sorted(self.VALID_FORMATS))}")
        if config.mzv_method not in self.VALID_MZV_METHODS:
            errors.append(f"mzv_method must be one of: {', '.join(sorted(self.VALID_MZV_METHODS))}")
        if config.use_cache and not config.cache_path:
            errors.append("cache_path is required when the cache is enabled")

        return len(errors) == 0, errors

    def _validate_int(self, name: str, value: Any, minimum: int) -> List[str]:
        if isinstance(value, bool) or not isinstance(value, int):
            return [f"{name} must be an integer"]
        if value < minimum:
            return [f"{name} must be >= {minimum}, got {value}"]
        return []

    def _validate_tolerance(self, name: str, value: Any) -> List[str]:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            return [f"{name} must be a number"]
        if value <= 0:
            return [f"{name} must be positive"]
        return []

    def _validate_z_grid(self, z_grid: Any) -> List[str]:
        errors = []
        if not z_grid:
            return ["z_grid cannot be empty"]
        for z in z_grid:
            if not isinstance(z, (int, float)) or not self.Z_MIN <= z <= self.Z_MAX:
                errors.append(f"z value {z} is outside [{self.Z_MIN}, {self.Z_MAX}]")
        return errors

    def _validate_z_cap(self, z_cap: Any) -> List[str]:
        if not isinstance(z_cap, (int, float)) or not 0 < z_cap < 1:
            return [f"z_cap must lie in (0, 1), got {z_cap}"]
        return []
