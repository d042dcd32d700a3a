"""
Finite Field Arithmetic
Prime, binary and extension fields behind one element interface
"""

from typing import Any, Dict, Union

from core.errors import ConfigError
from .prime import FieldElement, PrimeField, fp_arith, fp_sqrt, fp_cbrt, quad_char
from .binary import BinaryField, Gf2mElement, gf2m_arith
from .extension import ExtensionField, ExtFieldElement, fpn_ops, fpn_coords

Field = Union[PrimeField, BinaryField, ExtensionField]
Element = Union[FieldElement, Gf2mElement, ExtFieldElement]


def parse_int(value: Any) -> int:
    """Registry integers may be JSON numbers or decimal/hex strings."""
    if isinstance(value, bool):
        raise ConfigError(f"expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 0)
        except ValueError:
            pass
    raise ConfigError(f"expected an integer, got {value!r}")


def load_field(entry: Dict[str, Any]) -> Field:
    """Build a field from a declarative parameter set.

    Args:
        entry: ``{"type": "prime", "p": ...}``, ``{"type": "binary", "reduction": ...}``
            or ``{"type": "extension", "p": ..., "poly": [f_0, ..., 1]}``

    Returns:
        The field object; primality and irreducibility are checked on construction.
    """
    kind = entry.get("type")
    if kind == "prime":
        return PrimeField(parse_int(entry["p"]))
    if kind == "binary":
        return BinaryField(parse_int(entry["reduction"]))
    if kind == "extension":
        return ExtensionField(parse_int(entry["p"]), tuple(parse_int(c) for c in entry["poly"]))
    raise ConfigError(f"unknown field type {kind!r}", "config.invalid")


def element_from_json(field: Field, value: Any) -> Element:
    """Field elements in the registry: an integer (bit pattern for binary fields) or a coordinate list."""
    if isinstance(field, ExtensionField):
        if isinstance(value, list):
            return field([parse_int(c) for c in value])
        return field(parse_int(value))
    return field(parse_int(value))


__all__ = [
    'FieldElement', 'PrimeField', 'fp_arith', 'fp_sqrt', 'fp_cbrt', 'quad_char',
    'BinaryField', 'Gf2mElement', 'gf2m_arith',
    'ExtensionField', 'ExtFieldElement', 'fpn_ops', 'fpn_coords',
    'Field', 'Element', 'parse_int', 'load_field', 'element_from_json',
]
