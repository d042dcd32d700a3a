"""
Elliptic Curve Groups
Weierstrass (prime and binary) and Edwards group laws with a named curve registry
"""

from .model import CurveParams, Model, Point
from .group_law import (
    validate_curve, is_on_curve, point_neg, point_add, point_sub, scalar_mul,
    naive_point_count, enumerate_points, point_order, subgroup,
)
from .registry import CurveRegistry, default_registry, load_curve

__all__ = [
    'CurveParams', 'Model', 'Point',
    'validate_curve', 'is_on_curve', 'point_neg', 'point_add', 'point_sub', 'scalar_mul',
    'naive_point_count', 'enumerate_points', 'point_order', 'subgroup',
    'CurveRegistry', 'default_registry', 'load_curve',
]
