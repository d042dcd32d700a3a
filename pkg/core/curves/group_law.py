"""
Elliptic Curve Group Law
Affine addition, scalar multiplication and brute-force order oracles for the three curve models
"""

import logging
from collections import defaultdict
from typing import Dict, List

import sympy

from core.errors import CurveError
from core.fields import BinaryField, PrimeField
from .model import CurveParams, Model, Point

logger = logging.getLogger(__name__)

COUNT_LIMIT = 1 << 20
ENUMERATE_LIMIT = 1 << 16


def _is_square(e) -> bool:
    """Zero or a nonzero square, for odd-characteristic fields."""
    if e.is_zero():
        return True
    return e ** ((e.field.order - 1) // 2) == e.field.one()


def validate_curve(params: CurveParams) -> None:
    """Raise CurveError naming the violated condition if the curve is singular or malformed."""
    field = params.field
    for label in ("a", "b", "d"):
        coeff = getattr(params, label)
        if coeff is not None and coeff.field != field:
            raise CurveError(f"coefficient {label} is not in {field}", "curve.singular")

    if params.model == Model.WEIERSTRASS_PRIME:
        if isinstance(field, BinaryField) or field.characteristic == 3:
            raise CurveError("short Weierstrass form needs characteristic other than 2 and 3",
                             "curve.unsupported_model")
        a, b = params.a, params.b
        if (4 * a ** 3 + 27 * b ** 2).is_zero():
            raise CurveError("discriminant 4a^3 + 27b^2 is zero", "curve.singular")
    elif params.model == Model.WEIERSTRASS_BINARY:
        if not isinstance(field, BinaryField):
            raise CurveError("binary model needs a binary field", "curve.unsupported_model")
        if params.b.is_zero():
            raise CurveError("b = 0 makes y^2 + xy = x^3 + ax^2 + b singular", "curve.singular")
    elif params.model == Model.EDWARDS:
        if not isinstance(field, PrimeField):
            raise CurveError("Edwards curves are supported over prime fields only",
                             "curve.unsupported_model")
        d = params.d
        if d.is_zero() or d == field.one():
            raise CurveError("Edwards coefficient d must not be 0 or 1", "curve.singular")
        if _is_square(d):
            raise CurveError("Edwards coefficient d must be a non-square", "curve.singular")
    elif params.model == Model.WEIERSTRASS_BINARY_SUPERSINGULAR:
        raise CurveError("supersingular characteristic-2 curves have no group law here",
                         "curve.unsupported_model")
    else:
        raise CurveError(f"unsupported model {params.model!r}", "curve.unsupported_model")


def is_on_curve(P: Point, params: CurveParams) -> bool:
    if P.infinity:
        return params.model != Model.EDWARDS
    if P.x.field != params.field or P.y.field != params.field:
        return False
    x, y = P.x, P.y
    if params.model == Model.WEIERSTRASS_PRIME:
        return y * y == x ** 3 + params.a * x + params.b
    if params.model == Model.WEIERSTRASS_BINARY:
        return y * y + x * y == x ** 3 + params.a * x * x + params.b
    x2, y2 = x * x, y * y
    return x2 + y2 == 1 + params.d * x2 * y2


def _check(P: Point, params: CurveParams) -> None:
    if params.strict and not is_on_curve(P, params):
        raise CurveError(f"{P} is not on {params.name}", "curve.off_curve")


def point_neg(P: Point, params: CurveParams) -> Point:
    if P.infinity:
        return P
    if params.model == Model.WEIERSTRASS_PRIME:
        return Point(P.x, -P.y)
    if params.model == Model.WEIERSTRASS_BINARY:
        return Point(P.x, P.x + P.y)
    return Point(-P.x, P.y)


def _add_prime(P: Point, Q: Point, params: CurveParams) -> Point:
    if P.infinity:
        return Q
    if Q.infinity:
        return P
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if (y1 + y2).is_zero():
            return Point.at_infinity()
        lam = (3 * x1 * x1 + params.a) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    return Point(x3, lam * (x1 - x3) - y1)


def _add_binary(P: Point, Q: Point, params: CurveParams) -> Point:
    if P.infinity:
        return Q
    if Q.infinity:
        return P
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        # -P = (x, x + y)
        if y2 == x1 + y1:
            return Point.at_infinity()
        lam = x1 + y1 / x1
        x3 = lam * lam + lam + params.a
    else:
        lam = (y1 + y2) / (x1 + x2)
        x3 = lam * lam + lam + x1 + x2 + params.a
    return Point(x3, (x2 + x3) * lam + x3 + y2)


def _add_edwards(P: Point, Q: Point, params: CurveParams) -> Point:
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    t = params.d * x1 * x2 * y1 * y2
    return Point((x1 * y2 + y1 * x2) / (1 + t), (y1 * y2 - x1 * x2) / (1 - t))


_ADDERS = {
    Model.WEIERSTRASS_PRIME: _add_prime,
    Model.WEIERSTRASS_BINARY: _add_binary,
    Model.EDWARDS: _add_edwards,
}


def point_add(P: Point, Q: Point, params: CurveParams) -> Point:
    """Group sum P + Q; inputs are checked on-curve in strict mode."""
    _check(P, params)
    _check(Q, params)
    return _ADDERS[params.model](P, Q, params)


def scalar_mul(k: int, P: Point, params: CurveParams) -> Point:
    """kP by double-and-add over the bits of k, most significant first.

    Negative k multiplies -P.
    """
    _check(P, params)
    if k < 0:
        return scalar_mul(-k, point_neg(P, params), params)
    add = _ADDERS[params.model]
    Q = params.identity()
    for bit in bin(k)[2:]:
        Q = add(Q, Q, params)
        if bit == "1":
            Q = add(Q, P, params)
    return Q


def point_sub(P: Point, Q: Point, params: CurveParams) -> Point:
    return point_add(P, point_neg(Q, params), params)


def naive_point_count(params: CurveParams) -> int:
    """#E(F_q) by enumerating one coordinate and counting solutions of the other."""
    field = params.field
    if field.order > COUNT_LIMIT:
        raise CurveError(
            f"{params.name}: field of size {field.order} is too large to count by brute force; "
            f"supply order_hint in the registry", "curve.too_large")
    one = field.one()
    if params.model == Model.WEIERSTRASS_PRIME:
        count = 1
        for x in field.elements():
            rhs = x ** 3 + params.a * x + params.b
            count += 1 if rhs.is_zero() else (2 if _is_square(rhs) else 0)
        return count
    if params.model == Model.WEIERSTRASS_BINARY:
        # x = 0 has the single solution y = sqrt(b)
        count = 2
        for x in field.elements():
            if x.is_zero():
                continue
            rhs = x ** 3 + params.a * x * x + params.b
            # y = xz turns the equation into z^2 + z = rhs / x^2
            if (rhs / (x * x)).trace() == 0:
                count += 2
        return count
    count = 0
    for y in field.elements():
        x2 = (one - y * y) / (one - params.d * y * y)
        count += 1 if x2.is_zero() else (2 if _is_square(x2) else 0)
    return count


def enumerate_points(params: CurveParams) -> List[Point]:
    """Every point of E(F_q), identity first."""
    field = params.field
    if field.order > ENUMERATE_LIMIT:
        raise CurveError(f"{params.name}: field of size {field.order} is too large to enumerate",
                         "curve.too_large")
    one = field.one()
    squares: Dict = defaultdict(list)
    for r in field.elements():
        squares[r * r].append(r)

    points = [params.identity()]
    if params.model == Model.WEIERSTRASS_PRIME:
        for x in field.elements():
            for y in squares.get(x ** 3 + params.a * x + params.b, []):
                points.append(Point(x, y))
    elif params.model == Model.WEIERSTRASS_BINARY:
        artin: Dict = defaultdict(list)
        for z in field.elements():
            artin[z * z + z].append(z)
        for x in field.elements():
            if x.is_zero():
                points.extend(Point(x, y) for y in squares.get(params.b, []))
                continue
            rhs = x ** 3 + params.a * x * x + params.b
            points.extend(Point(x, x * z) for z in artin.get(rhs / (x * x), []))
    else:
        for y in field.elements():
            for x in squares.get((one - y * y) / (one - params.d * y * y), []):
                if params.is_identity(Point(x, y)):
                    continue
                points.append(Point(x, y))
    return points


def point_order(P: Point, params: CurveParams) -> int:
    """Least l > 0 with lP = identity, found by stripping prime factors of N."""
    _check(P, params)
    if params.is_identity(P):
        return 1
    N = params.order_hint or naive_point_count(params)
    fast = params.fast()
    if not params.is_identity(scalar_mul(N, P, fast)):
        raise CurveError(f"{P} is not annihilated by N = {N}; parameter set is corrupt",
                         "curve.order_not_found")
    order = N
    for prime in sympy.factorint(N):
        while order % prime == 0 and params.is_identity(scalar_mul(order // prime, P, fast)):
            order //= prime
    return order


def subgroup(P: Point, params: CurveParams) -> List[Point]:
    """The cyclic subgroup <P> as [0P, 1P, ..., (l-1)P]."""
    l = point_order(P, params)
    if l > ENUMERATE_LIMIT:
        raise CurveError(f"subgroup of order {l} is too large to enumerate", "curve.too_large")
    fast = params.fast()
    members = [params.identity()]
    for _ in range(l - 1):
        members.append(point_add(members[-1], P, fast))
    return members
