"""
Statistical Distance Oracle
Exact output distribution of an extractor over an enumerated subgroup, checked against the lemma bounds
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Hashable, Iterable, List, Optional, Tuple

from core.curves import CurveParams, Point
from core.errors import ExtractorError
from .extractor import DK, LK, ExtractorParams, extract_dk, extract_lk

ORACLE_LIMIT = 1 << 16


@dataclass
class OracleResult:
    """Exact extractor statistics over a subgroup G (identity excluded from sampling)."""
    params: ExtractorParams
    group_order: int
    samples: int
    range_size: int
    histogram: Counter
    delta: Fraction
    collision: Fraction
    bounds: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def holds(self) -> bool:
        return all(b["holds"] for b in self.bounds.values())


def distribution_distance(outputs: Iterable[Hashable], range_size: int) -> Tuple[Fraction, Fraction, Counter]:
    """Statistical distance to uniform on ``range_size`` values, and collision probability."""
    histogram = Counter(outputs)
    total = sum(histogram.values())
    if total == 0:
        raise ExtractorError("no samples", "extractor.too_large")
    uniform = Fraction(1, range_size)
    observed = sum(abs(Fraction(c, total) - uniform) for c in histogram.values())
    unobserved = (range_size - len(histogram)) * uniform
    delta = (observed + unobserved) / 2
    collision = sum(Fraction(c, total) ** 2 for c in histogram.values())
    return delta, collision, histogram


def _lk_bound(params: ExtractorParams, delta: Fraction) -> Dict[str, Any]:
    # delta <= 2^((k + n + log2 n)/2 + 3 - l)  <=>  delta^2 <= n * 2^(k + n + 6 - 2l)
    exponent = params.k + params.n + 6 - 2 * params.order_bits
    bound_sq = Fraction(params.n) * Fraction(2) ** exponent
    return {"bound_squared": bound_sq, "vacuous": bound_sq >= 1, "holds": delta ** 2 <= bound_sq}


def _dk_bounds(params: ExtractorParams, p: int, group_order: int,
               delta: Fraction, collision: Fraction) -> Dict[str, Dict[str, Any]]:
    q = p ** params.n
    G2 = group_order ** 2
    floor = Fraction(1, p ** params.k)
    # Col <= 1/p^k + 4 sqrt(q)/|G|^2, squared to stay in exact arithmetic
    excess = collision - floor
    col_holds = excess <= 0 or (excess * G2 / 4) ** 2 <= q
    col_vacuous = 16 * q >= ((1 - floor) * G2) ** 2
    # delta <= 2 sqrt(p^(n+k))/|G|
    spread = p ** (params.n + params.k)
    delta_holds = (delta * group_order / 2) ** 2 <= spread
    delta_vacuous = 4 * spread >= G2
    return {
        "collision": {"vacuous": col_vacuous, "holds": col_holds},
        "distance": {"vacuous": delta_vacuous, "holds": delta_holds},
    }


def stat_distance_oracle(subgroup: List[Point], extractor: ExtractorParams,
                         curve: CurveParams) -> OracleResult:
    """Exact distance and collision probability of the extractor over the subgroup.

    Args:
        subgroup: every element of G, identity included
        extractor: L_k or D_k sizes
        curve: the curve the points live on

    Returns:
        OracleResult with exact rationals and the lemma bound checks
    """
    if len(subgroup) > ORACLE_LIMIT:
        raise ExtractorError(f"subgroup of {len(subgroup)} points is too large for the oracle",
                             "extractor.too_large")
    points = [P for P in subgroup if not curve.is_identity(P)]
    if extractor.kind == LK:
        outputs = [extract_lk(P, extractor.k, curve) for P in points]
        range_size = 1 << extractor.k
    elif extractor.kind == DK:
        outputs = [tuple(c.value for c in extract_dk(P, extractor.k, curve)) for P in points]
        range_size = curve.field.p ** extractor.k
    else:
        raise ExtractorError(f"unknown extractor kind {extractor.kind!r}", "extractor.unsupported")

    delta, collision, histogram = distribution_distance(outputs, range_size)
    if extractor.kind == LK:
        bounds = {"distance": _lk_bound(extractor, delta)}
    else:
        bounds = _dk_bounds(extractor, curve.field.p, len(subgroup), delta, collision)
    return OracleResult(extractor, len(subgroup), len(points), range_size, histogram,
                        delta, collision, bounds)


def oracle_report(result: OracleResult, curve_name: Optional[str] = None) -> Dict[str, Any]:
    """Diagnostics dict with exact rationals rendered as fraction strings."""
    def render(value):
        if isinstance(value, Fraction):
            return f"{value.numerator}/{value.denominator}"
        return value

    return {
        "curve": curve_name,
        "extractor": result.params.kind,
        "k": result.params.k,
        "group_order": result.group_order,
        "samples": result.samples,
        "range_size": result.range_size,
        "delta": render(result.delta),
        "collision": render(result.collision),
        "histogram": {str(key): count for key, count in sorted(result.histogram.items())},
        "bounds": {name: {k: render(v) for k, v in b.items()} for name, b in result.bounds.items()},
    }
