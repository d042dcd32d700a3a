"""
Enrollment Confidentiality
EC-ElGamal for the biometric point B with s sealed by AES-GCM under a key extracted from the shared point
"""

import logging
from dataclasses import dataclass
from typing import Tuple

from Crypto.Cipher import AES
from Crypto.Hash import SHAKE256

from core.curves import CurveParams, Point, is_on_curve, point_add, point_sub, scalar_mul
from core.errors import ProtocolError
from core.extractors import extract_bytes, extractor_for_curve
from .entropy import Entropy
from .schnorr import SchnorrKeypair

logger = logging.getLogger(__name__)

SEAL_DOMAIN = b"ecid:enroll-seal:v1"
KEY_BYTES = 32
NONCE_BYTES = 12
TAG_BYTES = 16


@dataclass(frozen=True)
class EnrollmentCiphertext:
    """(R, M) = (kP, B + kZ_v), s under AES-GCM with R and M as associated data."""
    R: Point
    M: Point
    sealed_s: bytes
    tag: bytes


def generate_verifier_keypair(curve: CurveParams, entropy: Entropy) -> SchnorrKeypair:
    return SchnorrKeypair.generate(curve, entropy)


def _coordinates(P: Point, curve: CurveParams) -> bytes:
    if P.infinity:
        return b"\x00"
    return curve.field.to_bytes(P.x) + curve.field.to_bytes(P.y)


def _cipher(shared: Point, R: Point, M: Point, curve: CurveParams):
    """AES-GCM keyed by SHAKE-256 over Ext_k(kZ_v); the nonce is bound to R."""
    extracted = extract_bytes(shared, curve, extractor_for_curve(curve))
    key = SHAKE256.new(SEAL_DOMAIN + b"key" + extracted).read(KEY_BYTES)
    nonce = SHAKE256.new(SEAL_DOMAIN + b"nonce" + _coordinates(R, curve)).read(NONCE_BYTES)
    cipher = AES.new(key, AES.MODE_GCM, nonce=nonce, mac_len=TAG_BYTES)
    cipher.update(_coordinates(R, curve) + _coordinates(M, curve))
    return cipher


def encrypt_point_for_enrollment(B: Point, s: bytes, verifier_pub: Point, curve: CurveParams,
                                 entropy: Entropy) -> EnrollmentCiphertext:
    if not is_on_curve(verifier_pub, curve) or curve.is_identity(verifier_pub):
        raise ProtocolError("verifier public key is not a valid curve point", "protocol.invalid_point")
    k = entropy.randrange(1, curve.base_order)
    R = scalar_mul(k, curve.base_point, curve)
    shared = scalar_mul(k, verifier_pub, curve)
    M = point_add(B, shared, curve)
    sealed, tag = _cipher(shared, R, M, curve).encrypt_and_digest(s)
    return EnrollmentCiphertext(R, M, sealed, tag)


def decrypt_point_for_enrollment(ct: EnrollmentCiphertext, verifier: SchnorrKeypair,
                                 curve: CurveParams) -> Tuple[Point, bytes]:
    """Recover (B, s); a wrong key or a modified ciphertext fails the tag check."""
    for label, point in (("R", ct.R), ("M", ct.M)):
        if not is_on_curve(point, curve):
            raise ProtocolError(f"ciphertext point {label} is not on the curve",
                                "protocol.record_invalid")
    shared = scalar_mul(verifier.s, ct.R, curve)
    if curve.is_identity(shared):
        raise ProtocolError("degenerate ciphertext", "protocol.record_invalid")
    try:
        s = _cipher(shared, ct.R, ct.M, curve).decrypt_and_verify(ct.sealed_s, ct.tag)
    except ValueError:
        logger.warning("enrollment ciphertext failed authentication")
        raise ProtocolError("enrollment ciphertext failed authentication", "protocol.record_invalid")
    return point_sub(ct.M, shared, curve), s
