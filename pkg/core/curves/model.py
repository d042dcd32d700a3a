"""
Curve Parameter Model
Curve models, parameter sets and affine points with an explicit identity marker
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from core.fields import Element, Field


class Model(str, Enum):
    WEIERSTRASS_PRIME = "weierstrass_prime"
    WEIERSTRASS_BINARY = "weierstrass_binary"
    # y^2 + cy = x^3 + ax + b; parsed so it can be refused by name
    WEIERSTRASS_BINARY_SUPERSINGULAR = "weierstrass_binary_supersingular"
    EDWARDS = "edwards"


@dataclass(frozen=True)
class Point:
    """Affine point, or the point at infinity when ``infinity`` is set.

    Edwards curves never use the infinity marker: their neutral element is
    the affine point (0, 1).
    """
    x: Optional[Element] = None
    y: Optional[Element] = None
    infinity: bool = False

    @classmethod
    def at_infinity(cls) -> "Point":
        return cls(None, None, True)

    def __repr__(self) -> str:
        if self.infinity:
            return "Point(O)"
        return f"Point({_short(self.x)}, {_short(self.y)})"


def _short(e) -> str:
    if hasattr(e, "value"):
        return str(e.value)
    if hasattr(e, "bits"):
        return hex(e.bits)
    return str(getattr(e, "coeffs", e))


@dataclass(frozen=True)
class CurveParams:
    """A named curve with its field, coefficients and optional base point data.

    Args:
        name: registry name
        model: one of the three supported curve models
        field: the coefficient field
        a, b: Weierstrass coefficients (y^2 = x^3 + ax + b, or y^2 + xy = x^3 + ax^2 + b)
        d: Edwards coefficient (x^2 + y^2 = 1 + dx^2y^2)
        order_hint: group order N when known
        base_point: working base point P
        base_order: order l of P
        elligator_s: Elligator parameter for Edwards curves
        default_t: challenge security parameter for this curve
        default_k: extractor output length for this curve
        extractor_e: extractor security exponent (distance at most 2^-e)
        extractor_policy: "enforce" or "warn" for the extractor parameter bound
        strict: check points are on the curve at every operation
    """
    name: str
    model: Model
    field: Field
    a: Optional[Element] = None
    b: Optional[Element] = None
    d: Optional[Element] = None
    order_hint: Optional[int] = None
    base_point: Optional[Point] = None
    base_order: Optional[int] = None
    elligator_s: Optional[Element] = None
    default_t: int = 3
    default_k: int = 1
    extractor_e: int = 64
    extractor_policy: str = "enforce"
    strict: bool = True

    def identity(self) -> Point:
        if self.model == Model.EDWARDS:
            return Point(self.field.zero(), self.field.one())
        return Point.at_infinity()

    def is_identity(self, P: Point) -> bool:
        if self.model == Model.EDWARDS:
            return not P.infinity and P.x.is_zero() and P.y == self.field.one()
        return P.infinity

    def point(self, x, y) -> Point:
        """Affine point from raw coordinates (ints, bit patterns or coordinate lists)."""
        return Point(self.field(x), self.field(y))

    def fast(self) -> "CurveParams":
        """Same curve with per-operation on-curve checks disabled."""
        return replace(self, strict=False)

    @property
    def scalar_bytes(self) -> int:
        return ((self.base_order or 1).bit_length() + 7) // 8
