"""
Deterministic Randomness Extractors
L_k (low bits of a coordinate over F_p) and D_k (base-field coordinates over F_{p^n})
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from core.curves import CurveParams, Model, Point
from core.errors import ExtractorError
from core.fields import ExtensionField, ExtFieldElement, FieldElement, PrimeField

logger = logging.getLogger(__name__)

LK = "lk"
DK = "dk"


@dataclass(frozen=True)
class ExtractorParams:
    """Extractor sizes.

    Args:
        kind: "lk" or "dk"
        k: output length (bits for L_k, F_p coordinates for D_k)
        e: security exponent, target distance 2^-e
        n: bit length of p (L_k) or extension degree (D_k)
        order_bits: bit length of the subgroup order (l for L_k, t for D_k)
        m: bit length of p (D_k only)
    """
    kind: str
    k: int
    e: int
    n: int
    order_bits: int
    m: Optional[int] = None

    def output_bytes(self, p: Optional[int] = None) -> int:
        if self.kind == LK:
            return (self.k + 7) // 8
        return self.k * ((p.bit_length() + 7) // 8)


def _coordinate(P: Point, curve: Optional[CurveParams]):
    """Negation-invariant coordinate: x on Weierstrass models, y on Edwards."""
    if P.infinity or (curve is not None and curve.is_identity(P)):
        raise ExtractorError("cannot extract from the identity point", "extractor.identity")
    if curve is not None and curve.model == Model.EDWARDS:
        return P.y
    return P.x


def extract_lk(P: Point, k: int, curve: Optional[CurveParams] = None) -> str:
    """lsb_k of the canonical representative, as a k-character bit string (most significant first)."""
    coord = _coordinate(P, curve)
    if not isinstance(coord, FieldElement):
        raise ExtractorError("L_k needs a curve over a prime field", "extractor.unsupported")
    if k < 0 or k > coord.field.bit_length:
        raise ExtractorError(f"k = {k} exceeds the {coord.field.bit_length}-bit field",
                             "extractor.k_too_large")
    if k == 0:
        return ""
    return format(coord.value & ((1 << k) - 1), f"0{k}b")


def extract_dk(P: Point, k: int, curve: Optional[CurveParams] = None) -> Tuple[FieldElement, ...]:
    """The first k F_p-coordinates (x_1, ..., x_k) of the coordinate in the fixed basis."""
    coord = _coordinate(P, curve)
    if not isinstance(coord, ExtFieldElement):
        raise ExtractorError("D_k needs a curve over an extension field", "extractor.unsupported")
    n = coord.field.n
    if k < 1 or k >= n:
        raise ExtractorError(f"D_k needs 0 < k < n = {n}, got k = {k}", "extractor.k_too_large")
    return coord.coords()[:k]


def lk_to_bytes(bits: str) -> bytes:
    if not bits:
        return b""
    return int(bits, 2).to_bytes((len(bits) + 7) // 8, "big")


def dk_to_bytes(coords: Sequence[FieldElement]) -> bytes:
    return b"".join(c.field.to_bytes(c) for c in coords)


def extractor_for_curve(curve: CurveParams, k: Optional[int] = None,
                        e: Optional[int] = None) -> ExtractorParams:
    """L_k over prime fields, D_k over extension fields, sized from the curve."""
    k = curve.default_k if k is None else k
    e = curve.extractor_e if e is None else e
    order_bits = (curve.base_order or curve.order_hint or 1).bit_length()
    field = curve.field
    if isinstance(field, PrimeField):
        return ExtractorParams(LK, k, e, field.p.bit_length(), order_bits)
    if isinstance(field, ExtensionField):
        return ExtractorParams(DK, k, e, field.n, order_bits, field.p.bit_length())
    raise ExtractorError(f"{curve.name}: no extractor for {field!r}", "extractor.unsupported")


def extract_bytes(P: Point, curve: CurveParams, params: ExtractorParams) -> bytes:
    """Ext_k(P) in canonical byte form, as compared by the protocol."""
    if params.kind == LK:
        return lk_to_bytes(extract_lk(P, params.k, curve))
    return dk_to_bytes(extract_dk(P, params.k, curve))


def max_admissible_k(params: ExtractorParams) -> int:
    """Largest k the parameter inequality admits (negative when none)."""
    if params.kind == LK:
        # k <= 2l - (n + 2e + log2(n) + 6), log2 taken exactly
        slack = 2 * params.order_bits - params.n - 2 * params.e - 6
        return slack - (params.n - 1).bit_length()
    budget = 2 * params.order_bits - 2 * params.e - params.n * params.m - 4
    return min(budget // params.m, params.n - 1)


def validate_extractor_params(params: ExtractorParams) -> int:
    """Check the extractor inequality; returns the maximal admissible k.

    Raises ExtractorError carrying both sides of the violated inequality.
    """
    if min(params.n, params.order_bits, params.e) <= 0 or params.k < 0:
        raise ExtractorError("extractor sizes must be positive", "extractor.bound_violated")
    best = max_admissible_k(params)
    if params.kind == LK:
        rhs = (f"2*{params.order_bits} - ({params.n} + 2*{params.e} + log2({params.n}) + 6)")
    elif params.kind == DK:
        if params.m is None or params.m <= 0:
            raise ExtractorError("D_k needs the bit length m of p", "extractor.bound_violated")
        rhs = (f"(2*{params.order_bits} - 2*{params.e} - {params.n}*{params.m} - 4)/{params.m}"
               f" and k < {params.n}")
    else:
        raise ExtractorError(f"unknown extractor kind {params.kind!r}", "extractor.unsupported")
    if params.k > best:
        raise ExtractorError(
            f"{params.kind.upper()} with k = {params.k} violates k <= {rhs}; max k = {best}",
            "extractor.bound_violated",
            {"lhs": params.k, "rhs": rhs, "max_k": best})
    return best


def check_for_curve(curve: CurveParams, params: ExtractorParams) -> bool:
    """Apply the curve's bound policy; False means the bound failed under "warn"."""
    try:
        validate_extractor_params(params)
        return True
    except ExtractorError as e:
        if curve.extractor_policy == "warn":
            logger.warning("%s: extractor bound not met (%s); continuing under warn policy",
                           curve.name, e)
            return False
        raise
