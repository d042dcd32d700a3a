"""
Message Framing
Length-prefixed frames with a kind byte and a 16-byte session id
"""

import logging
import struct
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, List, Optional, Tuple

from core.errors import WireError
from .codec import ByteReader, ByteWriter

logger = logging.getLogger(__name__)

SESSION_ID_BYTES = 16
MAX_FRAME = 64 * 1024
HEADER = struct.Struct("!IB16s")  # length, kind, session id
LENGTH = struct.Struct("!I")
MIN_LENGTH = HEADER.size - LENGTH.size


class MessageKind(IntEnum):
    ENROLL = 0x01
    COMMIT = 0x02
    CHALLENGE = 0x03
    RESPONSE = 0x04
    RESULT = 0x05
    ERROR = 0x06


# 2-byte codes carried in ERROR bodies
ERROR_CODES = {
    "protocol.order": 0x0001,
    "protocol.invalid_point": 0x0002,
    "protocol.challenge_range": 0x0003,
    "protocol.timeout": 0x0004,
    "protocol.record_invalid": 0x0005,
    "protocol.unknown_claimant": 0x0006,
    "protocol.session_mismatch": 0x0007,
    "protocol.aborted": 0x0008,
    "wire.bad_tag": 0x0101,
    "wire.bad_width": 0x0102,
    "wire.off_curve": 0x0103,
    "wire.non_canonical": 0x0104,
    "wire.truncated": 0x0105,
    "wire.oversize": 0x0106,
    "wire.unknown_kind": 0x0107,
    "wire.bad_body": 0x0108,
    "internal": 0xFFFF,
}
ERROR_NAMES = {v: k for k, v in ERROR_CODES.items()}
ERROR_CODE = struct.Struct("!H")
MAX_ERROR_TEXT = 1024

RESULT_REJECT = 0x00
RESULT_ACCEPT = 0x01


@dataclass(frozen=True)
class WireMessage:
    kind: MessageKind
    session_id: bytes
    body: bytes = b""


def frame(msg: WireMessage) -> bytes:
    if len(msg.session_id) != SESSION_ID_BYTES:
        raise WireError(f"session id must be {SESSION_ID_BYTES} bytes", "wire.bad_body")
    length = MIN_LENGTH + len(msg.body)
    if LENGTH.size + length > MAX_FRAME:
        raise WireError(f"frame of {LENGTH.size + length} bytes exceeds {MAX_FRAME}", "wire.oversize")
    return HEADER.pack(length, int(msg.kind), msg.session_id) + msg.body


def deframe(data: bytes) -> WireMessage:
    """Decode exactly one complete frame."""
    decoder = FrameDecoder()
    decoder.feed(data)
    msg = decoder.next_message()
    if decoder.errors:
        raise decoder.errors[0]
    if msg is None:
        raise WireError("frame ends early", "wire.truncated")
    if decoder.pending:
        raise WireError(f"{decoder.pending} bytes after the frame", "wire.bad_body")
    return msg


class FrameDecoder:
    """Incremental deframer; partial reads resume on the next feed.

    A frame with an unknown kind is skipped and its error recorded in
    ``errors``; decoding continues at the next frame boundary. An oversize
    or undersize length cannot be resynchronized and raises.
    """

    def __init__(self, max_frame: int = MAX_FRAME):
        self.max_frame = max_frame
        self.errors: List[WireError] = []
        self._buffer = bytearray()

    @property
    def pending(self) -> int:
        return len(self._buffer)

    def feed(self, data: bytes) -> None:
        self._buffer.extend(data)

    def _pop_frame(self) -> Optional[Tuple[int, bytes, bytes]]:
        if len(self._buffer) < LENGTH.size:
            return None
        (length,) = LENGTH.unpack_from(self._buffer)
        if LENGTH.size + length > self.max_frame:
            self._buffer.clear()
            raise WireError(f"declared frame length {length} exceeds {self.max_frame}", "wire.oversize")
        if length < MIN_LENGTH:
            self._buffer.clear()
            raise WireError(f"declared frame length {length} below header size", "wire.bad_body")
        if len(self._buffer) < LENGTH.size + length:
            return None
        _, kind, session_id = HEADER.unpack_from(self._buffer)
        body = bytes(self._buffer[HEADER.size:LENGTH.size + length])
        del self._buffer[:LENGTH.size + length]
        return kind, session_id, body

    def next_message(self) -> Optional[WireMessage]:
        """Next complete message, or None until more bytes arrive."""
        while True:
            popped = self._pop_frame()
            if popped is None:
                return None
            kind, session_id, body = popped
            try:
                return WireMessage(MessageKind(kind), session_id, body)
            except ValueError:
                error = WireError(f"unknown message kind {kind:#04x}", "wire.unknown_kind",
                                  {"session_id": session_id.hex()})
                self.errors.append(error)
                logger.warning("skipped frame: %s", error)

    def __iter__(self) -> Iterator[WireMessage]:
        while True:
            msg = self.next_message()
            if msg is None:
                return
            yield msg

    def finish(self) -> None:
        """Call at end of stream; leftover bytes mean a cut-off frame."""
        if self._buffer:
            leftover = len(self._buffer)
            self._buffer.clear()
            raise WireError(f"stream closed with {leftover} bytes of a partial frame", "wire.truncated")


def encode_claimant_body(claimant: str, payload: bytes) -> bytes:
    """ENROLL and COMMIT bodies: claimant id then the payload."""
    return ByteWriter().text(claimant).raw(payload).getvalue()


def decode_claimant_body(body: bytes) -> Tuple[str, bytes]:
    r = ByteReader(body)
    claimant = r.text()
    return claimant, r.rest()


def encode_result(accepted: bool) -> bytes:
    return bytes([RESULT_ACCEPT if accepted else RESULT_REJECT])


def decode_result(body: bytes) -> bool:
    if len(body) != 1 or body[0] not in (RESULT_ACCEPT, RESULT_REJECT):
        raise WireError("malformed RESULT body", "wire.bad_body")
    return body[0] == RESULT_ACCEPT


def encode_error(code: str, message: str = "") -> bytes:
    """Codes outside the table go out as ``internal``; text is cut on a character boundary."""
    number = ERROR_CODES.get(code, ERROR_CODES["internal"])
    text = message.encode("utf-8")
    if len(text) > MAX_ERROR_TEXT:
        text = text[:MAX_ERROR_TEXT].decode("utf-8", errors="ignore").encode("utf-8")
    return ERROR_CODE.pack(number) + text


def decode_error(body: bytes) -> Tuple[str, str]:
    if len(body) < ERROR_CODE.size:
        raise WireError("ERROR body shorter than its code", "wire.bad_body")
    (number,) = ERROR_CODE.unpack_from(body)
    if number not in ERROR_NAMES:
        raise WireError(f"unknown error code {number:#06x}", "wire.bad_body")
    text = body[ERROR_CODE.size:]
    if len(text) > MAX_ERROR_TEXT:
        raise WireError(f"error text of {len(text)} bytes exceeds {MAX_ERROR_TEXT}", "wire.bad_body")
    try:
        return ERROR_NAMES[number], text.decode("utf-8")
    except UnicodeDecodeError:
        raise WireError("error text is not valid UTF-8", "wire.bad_body")
