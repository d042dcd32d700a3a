"""
Error Hierarchy
Stable error codes shared by the library, the wire protocol and the CLI
"""

from typing import Any, Dict, Optional


class EcidError(Exception):
    """Base error carrying a stable code and optional structured details."""

    default_code = "ecid.error"

    def __init__(self, message: str, code: Optional[str] = None,
                 details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.code = code or self.default_code
        self.details = details or {}

    def __str__(self) -> str:
        return f"[{self.code}] {super().__str__()}"


class FieldError(EcidError):
    default_code = "field.error"


class CurveError(EcidError):
    default_code = "curve.error"


class EncodingError(EcidError):
    default_code = "encoding.error"


class ExtractorError(EcidError):
    default_code = "extractor.error"


class ProtocolError(EcidError):
    default_code = "protocol.error"


class WireError(EcidError):
    default_code = "wire.error"


class ConfigError(EcidError):
    default_code = "config.invalid"
