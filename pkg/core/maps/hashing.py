"""
Biometric Hash-to-Point
Digest an opaque biometric bit-string and encode it onto the curve with Icart or Elligator
"""

import logging
from dataclasses import dataclass, field
from typing import Union

from Crypto.Hash import SHAKE256

from core.curves import CurveParams, Model, Point
from core.errors import EncodingError
from .elligator import elligator_iota, elligator_params_for, sigma_to_bits
from .icart import icart_encode, supports_icart

logger = logging.getLogger(__name__)

HASH_DOMAIN = b"ecid:hash-to-point:v1"
DEFAULT_MAX_BIOMETRIC = 4096


@dataclass(frozen=True)
class BiometricString:
    """Opaque biometric capture (fingerprint, retina, voice ... combined upstream)."""
    data: bytes
    max_length: int = field(default=DEFAULT_MAX_BIOMETRIC, compare=False)

    def __post_init__(self):
        if not isinstance(self.data, (bytes, bytearray)):
            raise EncodingError("biometric data must be bytes", "encoding.biometric")
        if not self.data:
            raise EncodingError("biometric string is empty", "encoding.biometric")
        if len(self.data) > self.max_length:
            raise EncodingError(
                f"biometric string is {len(self.data)} bytes, limit is {self.max_length}",
                "encoding.biometric")


def encoding_name(params: CurveParams) -> str:
    """'icart' or 'elligator' for curves that support hashing, else raises."""
    if supports_icart(params):
        return "icart"
    if (params.model == Model.EDWARDS and params.elligator_s is not None
            and params.field.order % 4 == 3):
        return "elligator"
    raise EncodingError(
        f"{params.name}: no hash-to-curve encoding for {params.model.value} over "
        f"{params.field!r}", "encoding.unsupported")


def _digest(data: bytes, width: int) -> int:
    # double-width output keeps the reduction bias below 2^-(8 * width)
    return int.from_bytes(SHAKE256.new(HASH_DOMAIN + data).read(2 * width), "big")


def hash_to_point(b: Union[BiometricString, bytes], params: CurveParams) -> Point:
    """h(b): SHAKE-256 digest reduced into the encoding's domain, then encoded."""
    if not isinstance(b, BiometricString):
        b = BiometricString(bytes(b))
    method = encoding_name(params)
    q = params.field.order
    D = _digest(bytes(b.data), params.field.byte_width)
    if method == "icart":
        u = 1 + D % (q - 1)
        point = icart_encode(params.field(u), params)
    else:
        ep = elligator_params_for(params)
        bits = ep.domain_bits
        sigma = (D % (1 << bits)) % ((q + 1) // 2)
        point = elligator_iota(sigma_to_bits(sigma, bits), ep)
    if params.is_identity(point):
        raise EncodingError("biometric string encodes to the identity; capture again",
                            "encoding.identity")
    logger.debug("hashed %d-byte biometric onto %s via %s", len(b.data), params.name, method)
    return point
