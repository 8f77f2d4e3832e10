"""
Service factory for dependency injection

This factory creates and wires together the constant cache, the
evaluator and the verifier from a CliConfig.
"""

import logging
from typing import Optional

from ..core.interfaces import ConfigError, ConstantCache
from .constant_cache import FileConstantCache, NullConstantCache
from .numerics import Evaluator
from .settings import CliConfig
from .suites import Verifier
from .validation import ConfigValidator

logger = logging.getLogger(__name__)


class ServiceFactory:
    """
    Factory for creating and configuring application services

    This implements a simple dependency injection pattern to manage
    service creation and dependencies.
    """

    def __init__(self):
        """Initialize the service factory"""
        self._services = {}
        self._config: Optional[CliConfig] = None
        self._initialized = False

    def create_services(self, config: Optional[CliConfig] = None) -> None:
        """
        Create and configure all application services

        Args:
            config: Effective configuration (built-in defaults when omitted)

        Raises:
            ConfigError: if the configuration does not validate
        """
        config = config or CliConfig(use_cache=False)
        is_valid, errors = ConfigValidator().validate(config)
        if not is_valid:
            raise ConfigError("; ".join(errors))

        if config.use_cache and config.mzv_method == 'holder':
            cache: ConstantCache = FileConstantCache(config.cache_path)
        else:
            cache = NullConstantCache()
        self._services['constant_cache'] = cache

        self._services['evaluator'] = Evaluator(
            precision=config.precision_bits,
            guard_bits=config.guard_bits,
            step_budget=config.step_budget,
            cache=cache,
            mzv_method=config.mzv_method,
            z_cap=config.z_cap,
        )
        self._services['verifier'] = Verifier(
            self._services['evaluator'],
            z_grid=config.z_grid,
            tolerance_level1=config.tolerance_level1,
            tolerance_level2=config.tolerance_level2,
            jobs=config.jobs,
            cache_path=config.cache_path if isinstance(cache, FileConstantCache) else None,
        )
        self._config = config
        self._initialized = True
        logger.debug(f"Services created (precision {config.precision_bits}, cache {type(cache).__name__})")

    def get_constant_cache(self) -> ConstantCache:
        """Get the constant cache service"""
        self._ensure_initialized()
        return self._services['constant_cache']

    def get_evaluator(self) -> Evaluator:
        """Get the evaluator service"""
        self._ensure_initialized()
        return self._services['evaluator']

    def get_verifier(self) -> Verifier:
        """Get the verifier service"""
        self._ensure_initialized()
        return self._services['verifier']

    def get_config(self) -> CliConfig:
        self._ensure_initialized()
        return self._config

    def shutdown(self) -> None:
        """Write pending cache entries"""
        if self._initialized:
            self._services['constant_cache'].flush()

    def _ensure_initialized(self) -> None:
        """Ensure services are initialized"""
        if not self._initialized:
            self.create_services()


# Global service factory instance
_service_factory: Optional[ServiceFactory] = None


def get_service_factory() -> ServiceFactory:
    """
    Get the global service factory instance

    Returns:
        ServiceFactory instance
    """
    global _service_factory
    if _service_factory is None:
        _service_factory = ServiceFactory()
    return _service_factory


def initialize_services(config: Optional[CliConfig] = None) -> ServiceFactory:
    """
    Initialize global services

    Args:
        config: Effective configuration
    """
    factory = get_service_factory()
    factory.create_services(config)
    return factory
