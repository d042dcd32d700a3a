"""
Elligator Decoding
Injective map from bit-strings onto Edwards curves x^2 + y^2 = 1 + dx^2y^2 over F_q with q = 3 mod 4
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

from core.curves import CurveParams, Model, Point
from core.errors import EncodingError
from core.fields import FieldElement, PrimeField, quad_char

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ElligatorParams:
    """Constants derived from s: c = 2/s^2, r = c + 1/c, d = -(c+1)^2/(c-1)^2."""
    s: FieldElement
    c: FieldElement
    r: FieldElement
    d: FieldElement

    @property
    def field(self) -> PrimeField:
        return self.s.field

    @property
    def q(self) -> int:
        return self.s.modulus

    @property
    def domain_bits(self) -> int:
        """b = floor(log2 q)."""
        return self.q.bit_length() - 1


def elligator_setup(s: FieldElement) -> ElligatorParams:
    q = s.modulus
    if q % 4 != 3:
        raise EncodingError(f"Elligator needs q = 3 mod 4, got q = {q}", "encoding.bad_params")
    if s.is_zero():
        raise EncodingError("Elligator parameter s must be nonzero", "encoding.bad_params")
    s2 = s * s
    if ((s2 - 2) * (s2 + 2)).is_zero():
        raise EncodingError(f"s = {s.value} gives (s^2 - 2)(s^2 + 2) = 0", "encoding.bad_params")
    c = 2 / s2
    if (c * (c - 1) * (c + 1)).is_zero():
        raise EncodingError("derived c has c(c-1)(c+1) = 0", "encoding.bad_params")
    r = c + 1 / c
    if r.is_zero():
        raise EncodingError("derived r = c + 1/c is zero", "encoding.bad_params")
    d = -((c + 1) ** 2) / ((c - 1) ** 2)
    if quad_char(d) != -1:
        raise EncodingError(f"derived d = {d.value} is a square; parameters are inconsistent",
                            "encoding.bad_params")
    return ElligatorParams(s=s, c=c, r=r, d=d)


def elligator_params_for(params: CurveParams) -> ElligatorParams:
    """Elligator constants for a registry curve; the derived d must be the curve's d."""
    if params.model != Model.EDWARDS or params.elligator_s is None:
        raise EncodingError(f"{params.name}: no Elligator parameter configured", "encoding.unsupported")
    ep = elligator_setup(params.elligator_s)
    if ep.d != params.d:
        raise EncodingError(f"{params.name}: elligator_s yields d = {ep.d.value}, curve has {params.d.value}",
                            "encoding.bad_params")
    return ep


def elligator_phi(t: FieldElement, ep: ElligatorParams) -> Point:
    """phi(t); total on F_q with phi(1) = phi(-1) = (0, 1)."""
    field = ep.field
    neutral = Point(field.zero(), field.one())
    if (t - 1).is_zero() or (t + 1).is_zero():
        return neutral
    u = (1 - t) / (1 + t)
    u3 = u ** 3
    v = u3 * u * u + (ep.r * ep.r - 2) * u3 + u
    chi_v = quad_char(v)
    X = u * chi_v
    Y = (v * chi_v) ** ((ep.q + 1) // 4) * chi_v * quad_char(u * u + 1 / (ep.c * ep.c))
    one_plus_X_sq = (1 + X) ** 2
    denominator = ep.r * X + one_plus_X_sq
    if Y.is_zero() or denominator.is_zero():
        logger.debug("elligator_phi degenerate at t=%d", t.value)
        return neutral
    x = (ep.c - 1) * ep.s * X * (1 + X) / Y
    y = (ep.r * X - one_plus_X_sq) / denominator
    return Point(x, y)


def bits_to_sigma(tau: Union[str, Sequence[int]]) -> int:
    """sigma(tau) = sum tau_i 2^i; tau_0 is the least significant bit."""
    return sum((1 << i) for i, bit in enumerate(tau) if int(bit))


def sigma_to_bits(sigma: int, b: int) -> Tuple[int, ...]:
    return tuple((sigma >> i) & 1 for i in range(b))


def elligator_iota(tau: Union[str, Sequence[int]], ep: ElligatorParams) -> Point:
    """iota(tau) = phi(sigma(tau)) for tau in S, the b-bit strings with sigma(tau) <= (q-1)/2."""
    if len(tau) != ep.domain_bits:
        raise EncodingError(f"tau must have {ep.domain_bits} bits, got {len(tau)}", "encoding.domain")
    sigma = bits_to_sigma(tau)
    if sigma > (ep.q - 1) // 2:
        raise EncodingError(f"sigma(tau) = {sigma} exceeds (q-1)/2 = {(ep.q - 1) // 2}",
                            "encoding.domain")
    return elligator_phi(ep.field(sigma), ep)
