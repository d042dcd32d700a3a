"""
ecid - Biometric-Seeded Elliptic Curve Identification
Core Package Initialization
"""

__version__ = "1.0.0"
__description__ = "EC identification with biometric-seeded secrets and deterministic extractors"

from core.errors import (
    EcidError, FieldError, CurveError, EncodingError, ExtractorError,
    ProtocolError, WireError, ConfigError,
)

__all__ = [
    'EcidError', 'FieldError', 'CurveError', 'EncodingError', 'ExtractorError',
    'ProtocolError', 'WireError', 'ConfigError',
]
