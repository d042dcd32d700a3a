"""
Impersonation Monte Carlo
Empirical acceptance rate of an adversary without a, and challenge uniformity statistics
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from core.curves import CurveParams, enumerate_points, point_order, scalar_mul
from core.extractors import extract_bytes
from .protocol import EnrollmentRecord, challenge_range, verifier_check

logger = logging.getLogger(__name__)

# numpy draws stay in int64; bincount needs one slot per challenge
MAX_DRAW = int(np.iinfo(np.int64).max)
MAX_CHALLENGE_BITS = 24


@dataclass
class ImpersonationStats:
    trials: int
    accepted: int
    rate: float
    expected_rate: float
    sigma: float

    @property
    def within_bound(self) -> bool:
        """Observed rate at most the counted rate plus three standard deviations."""
        return self.rate <= self.expected_rate + 3 * self.sigma


def count_extraction_preimages(rec: EnrollmentRecord, curve: CurveParams,
                               subgroup_only: bool = True) -> int:
    """|Ext^-1(s)|: non-identity points W (in <P> by default) with Ext_k(W) = s."""
    count = 0
    l = curve.base_order
    for W in enumerate_points(curve):
        if curve.is_identity(W):
            continue
        if subgroup_only and l % point_order(W, curve) != 0:
            continue
        if extract_bytes(W, curve, rec.extractor) == rec.s:
            count += 1
    return count


def run_impersonation_trials(rec: EnrollmentRecord, curve: CurveParams, trials: int,
                             seed: Optional[int] = None) -> ImpersonationStats:
    """Adversary sends D = uP and a random y; the verifier draws e as usual."""
    l = curve.base_order
    low, high = challenge_range(rec.t)
    if l > MAX_DRAW or high >= MAX_DRAW:
        raise ValueError(f"{curve.name}: impersonation trials need l and 2^(t-1) below 2^63")
    rng = np.random.default_rng(seed)
    u = rng.integers(0, l, size=trials)
    y = rng.integers(0, l, size=trials)
    e = rng.integers(low, high + 1, size=trials)
    fast = curve.fast()
    accepted = np.fromiter(
        (verifier_check(rec, scalar_mul(int(ui), rec.P, fast), int(ei), int(yi), curve)
         for ui, yi, ei in zip(u, y, e)),
        dtype=bool, count=trials)
    expected = count_extraction_preimages(rec, curve) / l
    sigma = float(np.sqrt(expected * (1 - expected) / trials))
    stats = ImpersonationStats(trials, int(accepted.sum()), float(accepted.mean()), expected, sigma)
    logger.info("impersonation: %d/%d accepted (expected rate %.4f)", stats.accepted, trials, expected)
    return stats


def challenge_chi_square(samples: Sequence[int], t: int) -> Tuple[float, int]:
    """Pearson chi-square of challenges against uniform on {1, ..., 2^(t-1)}; returns (chi2, dof)."""
    low, high = challenge_range(t)
    if t > MAX_CHALLENGE_BITS:
        raise ValueError(f"chi-square needs t <= {MAX_CHALLENGE_BITS}, got t = {t}")
    values = np.asarray(samples, dtype=np.int64)
    if values.size == 0 or values.min() < low or values.max() > high:
        raise ValueError("challenge samples outside the challenge set")
    bins = high - low + 1
    counts = np.bincount(values - low, minlength=bins)
    expected = values.size / bins
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    return chi2, bins - 1
