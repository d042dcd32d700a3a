"""
Entropy Sources
OS randomness for real runs, seeded randomness for reproducible test runs
"""

import logging
import random
import secrets
from typing import Optional

logger = logging.getLogger(__name__)


class Entropy:
    """Uniform integers and bytes from ``secrets`` or, in test mode, a seeded ``random.Random``."""

    def __init__(self, rng: Optional[random.Random] = None):
        self._rng = rng

    @classmethod
    def system(cls) -> "Entropy":
        return cls(None)

    @classmethod
    def seeded(cls, seed: int) -> "Entropy":
        """Deterministic stream. Test use only: never for real enrollments."""
        logger.warning("using seeded entropy (seed=%d); not for production", seed)
        return cls(random.Random(seed))

    @classmethod
    def from_settings(cls, settings) -> "Entropy":
        seed = getattr(settings, "entropy_seed", None)
        return cls.seeded(seed) if seed is not None else cls.system()

    @property
    def deterministic(self) -> bool:
        return self._rng is not None

    def randbelow(self, n: int) -> int:
        if self._rng is None:
            return secrets.randbelow(n)
        return self._rng.randrange(n)

    def randrange(self, low: int, high: int) -> int:
        """Uniform in [low, high)."""
        return low + self.randbelow(high - low)

    def token_bytes(self, n: int) -> bytes:
        if self._rng is None:
            return secrets.token_bytes(n)
        return self._rng.getrandbits(8 * n).to_bytes(n, "big") if n else b""
