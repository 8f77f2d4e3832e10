"""
Core interfaces and protocols for AKZeta

This module defines the contracts shared by the numerical services, the
persistent constant cache and the configuration layer, together with the
exception hierarchy every service raises from.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Protocol


class StatusCallback(Protocol):
    """Protocol for status update callbacks"""
    def __call__(self, message: str) -> None:
        """Report status message"""
        ...


class ConstantCache(ABC):
    """Abstract base class for persistent storage of computed constants"""

    @abstractmethod
    def get(self, key: Any, precision: int) -> Optional[Any]:
        """
        Look up a constant

        Args:
            key: ConstKind identifying the constant
            precision: Requested precision in bits

        Returns:
            A RealBall stored at precision >= `precision`, or None on a miss
        """
        pass

    @abstractmethod
    def put(self, key: Any, value: Any) -> None:
        """Store a RealBall for `key` (kept only if it improves on the stored one)"""
        pass

    @abstractmethod
    def flush(self) -> None:
        """Write pending entries to the backing store"""
        pass

    @abstractmethod
    def clear(self) -> None:
        """Drop every entry, in memory and on disk"""
        pass

    @abstractmethod
    def stats(self) -> Dict[str, Any]:
        """Summary counters (entries, hits, misses, path)"""
        pass


class SettingsValidator(ABC):
    """Abstract base class for configuration validation"""

    @abstractmethod
    def validate(self, config: Any) -> tuple[bool, List[str]]:
        """
        Validate a configuration object

        Args:
            config: Configuration to validate

        Returns:
            Tuple of (is_valid, error_messages)
        """
        pass


# Custom exceptions
class AKZetaError(Exception):
    """Base class for all domain errors"""
    pass


class ParseError(AKZetaError, ValueError):
    """Raised when index, word or poset text cannot be parsed"""
    pass


class EmptyIndex(AKZetaError):
    """Raised when an operation needs a non-empty index"""
    pass


class DepthMismatch(AKZetaError):
    """Raised when two indices must have equal depth and do not"""
    pass


class NotAdmissible(AKZetaError):
    """Raised when an admissible index or 2-poset is required"""
    pass


class NotSemiAdmissible(AKZetaError):
    """Raised when a semi-admissible 2-poset is required"""
    pass


class NotInH1(AKZetaError):
    """Raised when a word does not start with e1"""
    pass


class NotInH0(AKZetaError):
    """Raised when a word is not of the form e1 ... e0"""
    pass


class RangeError(AKZetaError):
    """Raised when block slice bounds are out of range"""
    pass


class DomainError(AKZetaError):
    """Raised when an argument lies outside the domain of a function"""
    pass


class InvalidPoset(AKZetaError):
    """Raised when cover relations do not define a partial order"""
    pass


class TooLarge(AKZetaError):
    """Raised when an input exceeds what an oracle can handle"""
    pass


class PrecisionUnreachable(AKZetaError):
    """Raised when a series would need more terms than the step budget"""
    pass


class CacheCorrupt(AKZetaError):
    """Raised when the cache file header or a record checksum is invalid"""
    pass


class ConfigError(AKZetaError):
    """Raised when settings cannot be loaded or fail validation"""
    pass
