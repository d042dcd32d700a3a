"""
Icart Encoding
Deterministic map from F_q into short Weierstrass curves over F_q with q = 2 mod 3
"""

from core.curves import CurveParams, Model, Point
from core.errors import EncodingError
from core.fields import FieldElement, PrimeField, fp_cbrt


def supports_icart(params: CurveParams) -> bool:
    field = params.field
    return (params.model == Model.WEIERSTRASS_PRIME
            and isinstance(field, PrimeField)
            and field.p >= 5 and field.p % 3 == 2)


def icart_encode(u: FieldElement, params: CurveParams) -> Point:
    """f(u) = (x, ux + v) with v = (3a - u^4)/(6u) and
    x = (v^2 - b - u^6/27)^(1/3) + u^2/3; f(0) is the point at infinity.
    """
    if not supports_icart(params):
        raise EncodingError(
            f"{params.name}: Icart needs a prime-field Weierstrass curve with q = 2 mod 3",
            "encoding.unsupported")
    if u.is_zero():
        return Point.at_infinity()
    a, b = params.a, params.b
    u2 = u * u
    u4 = u2 * u2
    v = (3 * a - u4) / (6 * u)
    x = fp_cbrt(v * v - b - u4 * u2 / 27) + u2 / 3
    return Point(x, u * x + v)
