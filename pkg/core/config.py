"""
Settings
Defaults from data/ecid.json with ECID_* environment overrides
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

from core.errors import ConfigError

logger = logging.getLogger(__name__)

ROOT = Path(__file__).resolve().parents[1]
DEFAULT_CONFIG = ROOT / "data" / "ecid.json"

_ENV_OVERRIDES = {
    "ECID_REGISTRY": ("registry_path", str),
    "ECID_CURVE": ("default_curve", str),
    "ECID_T": ("challenge_bits", int),
    "ECID_K": ("extractor_k", int),
    "ECID_TIMEOUT": ("step_timeout", float),
    "ECID_SEED": ("entropy_seed", int),
    "ECID_LOG_LEVEL": ("log_level", str),
}


@dataclass(frozen=True)
class EcidSettings:
    """Runtime settings shared by the CLI, the verifier service and the prover client.

    Args:
        registry_path: curve registry file
        default_curve: curve used when a command names none
        challenge_bits: t; None takes the curve's default
        extractor_k: k; None takes the curve's default
        step_timeout: seconds allowed per protocol step
        max_biometric_bytes: upper bound on a biometric capture
        entropy_seed: seeds the entropy source for reproducible test runs only
        strict: on-curve checks at every decode and group operation
        log_level: root log level name
    """
    registry_path: str = str(ROOT / "data" / "curves.json")
    default_curve: str = "toy17"
    challenge_bits: Optional[int] = None
    extractor_k: Optional[int] = None
    step_timeout: float = 10.0
    max_biometric_bytes: int = 4096
    entropy_seed: Optional[int] = None
    strict: bool = True
    log_level: str = "WARNING"

    def validate(self) -> "EcidSettings":
        if self.challenge_bits is not None and self.challenge_bits < 1:
            raise ConfigError(f"challenge_bits must be positive, got {self.challenge_bits}")
        if self.extractor_k is not None and self.extractor_k < 1:
            raise ConfigError(f"extractor_k must be positive, got {self.extractor_k}")
        if self.step_timeout <= 0:
            raise ConfigError(f"step_timeout must be positive, got {self.step_timeout}")
        if self.max_biometric_bytes < 1:
            raise ConfigError("max_biometric_bytes must be positive")
        if self.log_level.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ConfigError(f"unknown log level {self.log_level!r}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _read_file(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}", "config.missing")
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}")
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    known = {f.name for f in fields(EcidSettings)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown settings in {path}: {', '.join(sorted(unknown))}")
    return raw


def load_settings(path: Optional[str] = None) -> EcidSettings:
    """Settings from ``path``, else ``ECID_CONFIG``, else data/ecid.json; then env overrides."""
    explicit = path or os.environ.get("ECID_CONFIG")
    config_path = Path(explicit) if explicit else DEFAULT_CONFIG
    values: Dict[str, Any] = {}
    if explicit or config_path.exists():
        values = _read_file(config_path)
    registry = values.get("registry_path")
    if registry and not Path(registry).is_absolute():
        values["registry_path"] = str((config_path.parent / registry).resolve())

    for var, (name, kind) in _ENV_OVERRIDES.items():
        raw = os.environ.get(var)
        if raw is None or raw == "":
            continue
        try:
            values[name] = kind(raw)
        except ValueError:
            raise ConfigError(f"{var}={raw!r} is not a valid {kind.__name__}")

    try:
        settings = replace(EcidSettings(), **values)
    except TypeError as e:
        raise ConfigError(f"invalid settings: {e}")
    if settings.entropy_seed is not None:
        logger.warning("entropy seed is set; sessions are reproducible and not secure")
    return settings.validate()
