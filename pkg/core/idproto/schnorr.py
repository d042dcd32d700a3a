"""
EC-Schnorr Identification
Baseline commit / challenge / response run: X = rP, y = r - sc mod l, check X = yP + cZ
"""

import logging
from dataclasses import dataclass
from typing import Optional

from core.curves import CurveParams, Point, point_add, scalar_mul
from core.errors import ProtocolError
from .entropy import Entropy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SchnorrKeypair:
    s: int
    Z: Point

    @classmethod
    def generate(cls, curve: CurveParams, entropy: Entropy) -> "SchnorrKeypair":
        s = entropy.randrange(1, curve.base_order)
        return cls(s, scalar_mul(s, curve.base_point, curve))

    @classmethod
    def from_private(cls, s: int, curve: CurveParams) -> "SchnorrKeypair":
        if not 1 <= s < curve.base_order:
            raise ProtocolError("private scalar out of range", "protocol.record_invalid")
        return cls(s, scalar_mul(s, curve.base_point, curve))


@dataclass
class Transcript:
    """One identification run; D is X and e is c for Schnorr runs."""
    D: Point
    e: int
    y: int
    verdict: Optional[bool] = None
    session_id: Optional[bytes] = None


def schnorr_verify(X: Point, c: int, y: int, Z: Point, curve: CurveParams) -> bool:
    P = curve.base_point
    return X == point_add(scalar_mul(y, P, curve), scalar_mul(c, Z, curve), curve)


def schnorr_run(keypair: SchnorrKeypair, curve: CurveParams, entropy: Entropy,
                t: Optional[int] = None, r: Optional[int] = None,
                c: Optional[int] = None) -> Transcript:
    """Honest prover and verifier exchange; ``r`` and ``c`` may be pinned for tests."""
    l, P = curve.base_order, curve.base_point
    t = curve.default_t if t is None else t
    if r is None:
        r = entropy.randrange(1, l)
    X = scalar_mul(r, P, curve)
    if c is None:
        c = entropy.randbelow(1 << t)
    elif not 0 <= c < (1 << t):
        raise ProtocolError(f"challenge {c} outside Z_2^{t}", "protocol.challenge_range")
    y = (r - keypair.s * c) % l
    verdict = schnorr_verify(X, c, y, keypair.Z, curve)
    logger.debug("schnorr run on %s: verdict=%s", curve.name, verdict)
    return Transcript(X, c, y, verdict)
