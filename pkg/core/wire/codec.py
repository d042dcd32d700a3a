"""
Byte Codec
Fixed-width encodings for points, scalars, challenges, enrollment records and packages
"""

import logging
import struct
from typing import Callable, Optional, Tuple

from core.curves import CurveParams, Point, is_on_curve, load_curve
from core.errors import FieldError, ProtocolError, WireError
from core.extractors import DK, LK, ExtractorParams
from core.idproto import (
    EnrollmentCiphertext, EnrollmentRecord, Entropy, SchnorrKeypair,
    decrypt_point_for_enrollment, encrypt_point_for_enrollment, validate_record,
)

logger = logging.getLogger(__name__)

TAG_IDENTITY = 0x00
TAG_AFFINE = 0x04

RECORD_MAGIC = b"ECR1"
PACKAGE_MAGIC = b"ECP1"
MODE_PLAINTEXT = 0x00
MODE_ELGAMAL = 0x01

_KIND_CODES = {LK: 1, DK: 2}
_CODE_KINDS = {v: k for k, v in _KIND_CODES.items()}
_EXTRACTOR = struct.Struct("!BHHHHH")  # kind, k, e, n, order_bits, m

CurveResolver = Callable[[str], CurveParams]


def encode_point(P: Point, curve: CurveParams) -> bytes:
    """0x00 for the identity, else 0x04 || x || y at the field's byte width."""
    if curve.is_identity(P):
        return bytes([TAG_IDENTITY])
    field = curve.field
    return bytes([TAG_AFFINE]) + field.to_bytes(P.x) + field.to_bytes(P.y)


def decode_point(data: bytes, curve: CurveParams, strict: Optional[bool] = None) -> Point:
    strict = curve.strict if strict is None else strict
    if not data:
        raise WireError("empty point encoding", "wire.bad_width")
    tag = data[0]
    if tag == TAG_IDENTITY:
        if len(data) != 1:
            raise WireError("identity encoding carries trailing bytes", "wire.bad_width")
        return curve.identity()
    if tag != TAG_AFFINE:
        raise WireError(f"unknown point tag {tag:#04x}", "wire.bad_tag")
    width = curve.field.byte_width
    if len(data) != 1 + 2 * width:
        raise WireError(f"point encoding is {len(data)} bytes, expected {1 + 2 * width}",
                        "wire.bad_width")
    try:
        x = curve.field.from_bytes(data[1:1 + width])
        y = curve.field.from_bytes(data[1 + width:])
    except FieldError as e:
        raise WireError(f"non-canonical coordinate: {e}", "wire.non_canonical")
    P = Point(x, y)
    if curve.is_identity(P):
        raise WireError("identity must use the 0x00 tag", "wire.non_canonical")
    if strict and not is_on_curve(P, curve):
        raise WireError(f"decoded point is not on {curve.name}", "wire.off_curve")
    return P


def encode_scalar(value: int, curve: CurveParams) -> bytes:
    width = curve.scalar_bytes
    if not 0 <= value < (1 << (8 * width)):
        raise WireError(f"scalar does not fit in {width} bytes", "wire.bad_width")
    return value.to_bytes(width, "big")


def decode_scalar(data: bytes, curve: CurveParams) -> int:
    """Fixed-width integer; range against l is the verifier's call, not the codec's."""
    if len(data) != curve.scalar_bytes:
        raise WireError(f"scalar is {len(data)} bytes, expected {curve.scalar_bytes}", "wire.bad_width")
    return int.from_bytes(data, "big")


def challenge_bytes(t: int) -> int:
    return (t + 7) // 8


def encode_challenge(e: int, t: int) -> bytes:
    width = challenge_bytes(t)
    if not 0 <= e < (1 << (8 * width)):
        raise WireError(f"challenge does not fit in {width} bytes", "wire.bad_width")
    return e.to_bytes(width, "big")


def decode_challenge(data: bytes, t: int) -> int:
    if len(data) != challenge_bytes(t):
        raise WireError(f"challenge is {len(data)} bytes, expected {challenge_bytes(t)}",
                        "wire.bad_width")
    return int.from_bytes(data, "big")


class ByteWriter:
    def __init__(self):
        self._parts = []

    def raw(self, data: bytes) -> "ByteWriter":
        self._parts.append(bytes(data))
        return self

    def u8(self, value: int) -> "ByteWriter":
        return self.raw(struct.pack("!B", value))

    def u16(self, value: int) -> "ByteWriter":
        return self.raw(struct.pack("!H", value))

    def blob(self, data: bytes) -> "ByteWriter":
        if len(data) > 0xFFFF:
            raise WireError("field longer than 65535 bytes", "wire.oversize")
        return self.u16(len(data)).raw(data)

    def text(self, value: str) -> "ByteWriter":
        return self.blob(value.encode("utf-8"))

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class ByteReader:
    def __init__(self, data: bytes):
        self._data = bytes(data)
        self._pos = 0

    def take(self, n: int) -> bytes:
        if self._pos + n > len(self._data):
            raise WireError("body ends early", "wire.truncated")
        chunk = self._data[self._pos:self._pos + n]
        self._pos += n
        return chunk

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack("!H", self.take(2))[0]

    def blob(self) -> bytes:
        return self.take(self.u16())

    def text(self) -> str:
        try:
            return self.blob().decode("utf-8")
        except UnicodeDecodeError:
            raise WireError("text field is not UTF-8", "wire.bad_body")

    def rest(self) -> bytes:
        chunk = self._data[self._pos:]
        self._pos = len(self._data)
        return chunk

    def done(self) -> None:
        if self._pos != len(self._data):
            raise WireError(f"{len(self._data) - self._pos} trailing bytes", "wire.bad_body")


def _write_header(w: ByteWriter, rec: EnrollmentRecord) -> None:
    ext = rec.extractor
    w.text(rec.curve).text(rec.claimant).u16(rec.t)
    w.raw(_EXTRACTOR.pack(_KIND_CODES[ext.kind], ext.k, ext.e, ext.n, ext.order_bits, ext.m or 0))


def _read_header(r: ByteReader, resolve: CurveResolver) -> Tuple[CurveParams, str, int, ExtractorParams]:
    curve = resolve(r.text())
    claimant = r.text()
    t = r.u16()
    kind, k, e, n, order_bits, m = _EXTRACTOR.unpack(r.take(_EXTRACTOR.size))
    if kind not in _CODE_KINDS:
        raise WireError(f"unknown extractor kind {kind}", "wire.bad_body")
    extractor = ExtractorParams(_CODE_KINDS[kind], k, e, n, order_bits, m or None)
    return curve, claimant, t, extractor


def encode_record(rec: EnrollmentRecord, curve: CurveParams) -> bytes:
    w = ByteWriter().raw(RECORD_MAGIC)
    _write_header(w, rec)
    for P in (rec.B, rec.P, rec.C):
        w.blob(encode_point(P, curve))
    return w.blob(rec.s).getvalue()


def decode_record(data: bytes, resolve: CurveResolver = load_curve) -> EnrollmentRecord:
    r = ByteReader(data)
    if r.take(4) != RECORD_MAGIC:
        raise WireError("not an enrollment record", "wire.bad_body")
    curve, claimant, t, extractor = _read_header(r, resolve)
    B, P, C = (decode_point(r.blob(), curve) for _ in range(3))
    s = r.blob()
    r.done()
    return EnrollmentRecord(B=B, s=s, P=P, C=C, curve=curve.name, extractor=extractor,
                            t=t, claimant=claimant)


def encode_enrollment_package(rec: EnrollmentRecord, curve: CurveParams,
                              verifier_pub: Optional[Point] = None,
                              entropy: Optional[Entropy] = None) -> bytes:
    """Record for the verifier with (B, s) ElGamal-encrypted.

    Without a verifier key the package is written in plaintext mode, which
    is only meant for trusted channels in tests.
    """
    w = ByteWriter().raw(PACKAGE_MAGIC)
    if verifier_pub is None:
        logger.warning("writing enrollment package in plaintext mode (insecure)")
        w.u8(MODE_PLAINTEXT)
        _write_header(w, rec)
        w.blob(encode_point(rec.P, curve)).blob(encode_point(rec.C, curve))
        w.blob(encode_point(rec.B, curve)).blob(rec.s)
        return w.getvalue()
    ct = encrypt_point_for_enrollment(rec.B, rec.s, verifier_pub, curve, entropy or Entropy.system())
    w.u8(MODE_ELGAMAL)
    _write_header(w, rec)
    w.blob(encode_point(rec.P, curve)).blob(encode_point(rec.C, curve))
    w.blob(encode_point(ct.R, curve)).blob(encode_point(ct.M, curve))
    w.blob(ct.sealed_s).blob(ct.tag)
    return w.getvalue()


def decode_enrollment_package(data: bytes, verifier: Optional[SchnorrKeypair],
                              resolve: CurveResolver = load_curve) -> EnrollmentRecord:
    """Open and validate a package; any tampering surfaces as protocol.record_invalid."""
    r = ByteReader(data)
    if r.take(4) != PACKAGE_MAGIC:
        raise WireError("not an enrollment package", "wire.bad_body")
    mode = r.u8()
    curve, claimant, t, extractor = _read_header(r, resolve)
    P = decode_point(r.blob(), curve)
    C = decode_point(r.blob(), curve)
    if mode == MODE_PLAINTEXT:
        B = decode_point(r.blob(), curve)
        s = r.blob()
    elif mode == MODE_ELGAMAL:
        if verifier is None:
            raise ProtocolError("encrypted package needs the verifier key", "protocol.record_invalid")
        R = decode_point(r.blob(), curve)
        M = decode_point(r.blob(), curve)
        ct = EnrollmentCiphertext(R, M, r.blob(), r.blob())
        B, s = decrypt_point_for_enrollment(ct, verifier, curve)
    else:
        raise WireError(f"unknown package mode {mode}", "wire.bad_body")
    r.done()
    rec = EnrollmentRecord(B=B, s=s, P=P, C=C, curve=curve.name, extractor=extractor,
                           t=t, claimant=claimant)
    validate_record(rec, curve)
    return rec
