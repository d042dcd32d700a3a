"""
Curve Registry
Loads named curve parameter sets from the declarative registry file
"""

import json
import logging
import threading
from pathlib import Path
from typing import Any, Dict, List, Optional

import sympy

from core.errors import ConfigError, CurveError
from core.fields import element_from_json, load_field, parse_int
from .group_law import is_on_curve, scalar_mul, validate_curve
from .model import CurveParams, Model, Point

logger = logging.getLogger(__name__)

DEFAULT_REGISTRY = Path(__file__).resolve().parents[2] / "data" / "curves.json"


class CurveRegistry:
    """Named curves from ``curves.json``, parsed and validated on first use."""

    def __init__(self, path: Optional[Path] = None):
        self.path = Path(path) if path else DEFAULT_REGISTRY
        try:
            with open(self.path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"curve registry not found: {self.path}", "config.missing")
        except json.JSONDecodeError as e:
            raise ConfigError(f"curve registry {self.path} is not valid JSON: {e}")
        self._fields_raw: Dict[str, Any] = raw.get("fields", {})
        self._curves_raw: Dict[str, Any] = raw.get("curves", {})
        self._fields: Dict[str, Any] = {}
        self._curves: Dict[str, CurveParams] = {}
        self._lock = threading.Lock()

    def names(self) -> List[str]:
        return sorted(self._curves_raw)

    def field(self, name: str):
        if name not in self._fields:
            if name not in self._fields_raw:
                raise ConfigError(f"unknown field parameter set {name!r}")
            self._fields[name] = load_field(self._fields_raw[name])
        return self._fields[name]

    def get(self, name: str) -> CurveParams:
        with self._lock:
            if name not in self._curves:
                if name not in self._curves_raw:
                    raise CurveError(
                        f"unknown curve {name!r}; known: {', '.join(self.names())}", "curve.unknown")
                try:
                    self._curves[name] = self._build(name, self._curves_raw[name])
                except KeyError as e:
                    raise ConfigError(f"curve {name!r} is missing key {e}")
                except (TypeError, ValueError) as e:
                    raise ConfigError(f"curve {name!r} has malformed parameters: {e}")
            return self._curves[name]

    def _build(self, name: str, entry: Dict[str, Any]) -> CurveParams:
        model_name = entry["model"]
        try:
            model = Model(model_name)
        except ValueError:
            raise CurveError(f"curve {name!r}: unsupported model {model_name!r}",
                             "curve.unsupported_model")
        field = self.field(entry["field"])

        def element(key):
            return element_from_json(field, entry[key]) if key in entry else None

        base_point = None
        if "base_point" in entry:
            bx, by = entry["base_point"]
            base_point = Point(element_from_json(field, bx), element_from_json(field, by))

        policy = entry.get("extractor_policy", "enforce")
        if policy not in ("enforce", "warn"):
            raise ConfigError(f"curve {name!r}: extractor_policy must be 'enforce' or 'warn'")

        params = CurveParams(
            name=name,
            model=model,
            field=field,
            a=element("a"),
            b=element("b"),
            d=element("d"),
            order_hint=parse_int(entry["order"]) if "order" in entry else None,
            base_point=base_point,
            base_order=parse_int(entry["base_order"]) if "base_order" in entry else None,
            elligator_s=element("elligator_s"),
            default_t=parse_int(entry.get("t", 3)),
            default_k=parse_int(entry.get("k", 1)),
            extractor_e=parse_int(entry.get("extractor_e", 64)),
            extractor_policy=policy,
        )
        self._check(params)
        logger.info("loaded curve %s (%s over %r)", name, model.value, field)
        return params

    @staticmethod
    def _check(params: CurveParams) -> None:
        validate_curve(params)
        if params.base_point is None:
            return
        P, l = params.base_point, params.base_order
        if not is_on_curve(P, params):
            raise CurveError(f"{params.name}: base point is not on the curve", "curve.off_curve")
        if l is None or not sympy.isprime(l):
            raise CurveError(f"{params.name}: base point order must be a known prime", "curve.order_not_found")
        if not params.is_identity(scalar_mul(l, P, params.fast())):
            raise CurveError(f"{params.name}: l*P is not the identity", "curve.order_not_found")
        if params.order_hint is not None and params.order_hint % l:
            raise CurveError(f"{params.name}: l does not divide N", "curve.order_not_found")


_registries: Dict[Path, CurveRegistry] = {}
_registries_lock = threading.Lock()


def default_registry(path: Optional[Path] = None) -> CurveRegistry:
    """Shared registry per registry file, so each curve is validated once per process."""
    key = Path(path).resolve() if path else DEFAULT_REGISTRY
    with _registries_lock:
        if key not in _registries:
            _registries[key] = CurveRegistry(key)
        return _registries[key]


def load_curve(name: str, path: Optional[Path] = None, strict: bool = True) -> CurveParams:
    """Registry curve; ``strict=False`` gives the fast variant without per-operation checks."""
    curve = default_registry(path).get(name)
    return curve if strict else curve.fast()
