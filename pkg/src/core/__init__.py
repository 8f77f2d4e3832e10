"""
Core module initialization
"""

# Make core interfaces available at package level
from .interfaces import (
    StatusCallback,
    ConstantCache,
    SettingsValidator,
    AKZetaError,
    ParseError,
    EmptyIndex,
    DepthMismatch,
    NotAdmissible,
    NotSemiAdmissible,
    NotInH1,
    NotInH0,
    RangeError,
    DomainError,
    InvalidPoset,
    TooLarge,
    PrecisionUnreachable,
    CacheCorrupt,
    ConfigError
)
