"""
Identification Sessions
Drives the prover and verifier state machines over a framed byte transport
"""

import logging
import queue
import socket
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

from core.curves import CurveParams
from core.errors import EcidError, ProtocolError, WireError
from core.idproto import (
    EnrollmentRecord, Entropy, ProverSecret, ProverSession, SessionState, Transcript,
    VerifierSession,
)
from .codec import (
    decode_challenge, decode_point, decode_scalar, encode_challenge, encode_point, encode_scalar,
)
from .framing import (
    SESSION_ID_BYTES, FrameDecoder, MessageKind, WireMessage, decode_claimant_body,
    decode_error, decode_result, encode_claimant_body, encode_error, encode_result, frame,
)

logger = logging.getLogger(__name__)

DEFAULT_STEP_TIMEOUT = 10.0

RecordLookup = Callable[[str], Optional[Tuple[EnrollmentRecord, CurveParams]]]


class SocketTransport:
    """Connected stream socket."""

    def __init__(self, sock: socket.socket):
        self.sock = sock

    def send(self, data: bytes) -> None:
        self.sock.sendall(data)

    def recv(self, timeout: float) -> bytes:
        self.sock.settimeout(timeout)
        try:
            return self.sock.recv(65536)
        except socket.timeout:
            raise ProtocolError(f"no data within {timeout:.1f}s", "protocol.timeout")

    def close(self) -> None:
        try:
            self.sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self.sock.close()


class PipeTransport:
    """One end of an in-memory duplex pipe; an empty chunk marks end of stream."""

    def __init__(self, inbox: "queue.Queue[bytes]", outbox: "queue.Queue[bytes]"):
        self._inbox = inbox
        self._outbox = outbox
        self._closed = False

    def send(self, data: bytes) -> None:
        if self._closed:
            raise ProtocolError("pipe is closed", "protocol.aborted")
        if data:
            self._outbox.put(bytes(data))

    def recv(self, timeout: float) -> bytes:
        try:
            return self._inbox.get(timeout=timeout)
        except queue.Empty:
            raise ProtocolError(f"no data within {timeout:.1f}s", "protocol.timeout")

    def close(self) -> None:
        if not self._closed:
            self._closed = True
            self._outbox.put(b"")


def pipe_pair() -> Tuple[PipeTransport, PipeTransport]:
    a_to_b, b_to_a = queue.Queue(), queue.Queue()
    return PipeTransport(b_to_a, a_to_b), PipeTransport(a_to_b, b_to_a)


class MessageChannel:
    """Whole messages over a transport, with a deadline per receive."""

    def __init__(self, transport, timeout: float = DEFAULT_STEP_TIMEOUT):
        self.transport = transport
        self.timeout = timeout
        self.decoder = FrameDecoder()
        self.error_sent = False

    def send(self, kind: MessageKind, session_id: bytes, body: bytes = b"") -> None:
        self.transport.send(frame(WireMessage(kind, session_id, body)))

    def send_error(self, session_id: bytes, err: EcidError) -> None:
        if self.error_sent:
            return
        self.error_sent = True
        try:
            self.send(MessageKind.ERROR, session_id, encode_error(err.code, str(err)))
        except (EcidError, OSError) as e:
            logger.debug("could not report error to peer: %s", e)

    def receive(self) -> WireMessage:
        deadline = time.monotonic() + self.timeout
        while True:
            msg = self.decoder.next_message()
            if msg is not None:
                return msg
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise ProtocolError(f"step timed out after {self.timeout:.1f}s", "protocol.timeout")
            data = self.transport.recv(remaining)
            if not data:
                self.decoder.finish()
                raise ProtocolError("peer closed the connection", "protocol.aborted")
            self.decoder.feed(data)


@dataclass
class SessionOutcome:
    """Verdict plus the transcript for audit; verdict is None when the session aborted."""
    verdict: Optional[bool]
    transcript: Optional[Transcript]
    session_id: bytes
    claimant: str = ""
    error_code: Optional[str] = None


@dataclass
class SessionConfig:
    entropy: Entropy
    timeout: float = DEFAULT_STEP_TIMEOUT
    # prover side
    record: Optional[EnrollmentRecord] = None
    secret: Optional[ProverSecret] = None
    curve: Optional[CurveParams] = None
    session_id: Optional[bytes] = None
    # verifier side
    lookup: Optional[RecordLookup] = None
    first_message: Optional[WireMessage] = field(default=None, repr=False)


def _channel(transport, timeout: float) -> MessageChannel:
    """Reuse a channel a dispatcher already read from, so no buffered bytes are lost."""
    if isinstance(transport, MessageChannel):
        return transport
    return MessageChannel(transport, timeout)


def _remote_error(msg: WireMessage) -> ProtocolError:
    code, text = decode_error(msg.body)
    return ProtocolError(f"peer reported {code}: {text}", code, {"remote": True})


def _expect(msg: WireMessage, session_id: bytes, kind: MessageKind) -> WireMessage:
    if msg.kind == MessageKind.ERROR:
        raise _remote_error(msg)
    if msg.session_id != session_id:
        raise ProtocolError("frame carries a foreign session id", "protocol.session_mismatch")
    if msg.kind != kind:
        raise ProtocolError(f"expected {kind.name}, got {msg.kind.name}", "protocol.order")
    return msg


def run_prover_session(transport, record: EnrollmentRecord, secret: ProverSecret,
                       curve: CurveParams, entropy: Entropy,
                       timeout: float = DEFAULT_STEP_TIMEOUT,
                       session_id: Optional[bytes] = None) -> SessionOutcome:
    """COMMIT, then answer the CHALLENGE, then read the RESULT."""
    sid = session_id or entropy.token_bytes(SESSION_ID_BYTES)
    channel = _channel(transport, timeout)
    session = ProverSession(secret, record, curve, entropy)
    try:
        D = session.commit()
        channel.send(MessageKind.COMMIT, sid,
                     encode_claimant_body(record.claimant, encode_point(D, curve)))
        msg = _expect(channel.receive(), sid, MessageKind.CHALLENGE)
        e = decode_challenge(msg.body, record.t)
        y = session.respond(e)
        channel.send(MessageKind.RESPONSE, sid, encode_scalar(y, curve))
        msg = _expect(channel.receive(), sid, MessageKind.RESULT)
        verdict = decode_result(msg.body)
    except EcidError as err:
        if session.state != SessionState.DONE:
            session.abort()
        if not err.details.get("remote"):
            channel.send_error(sid, err)
        logger.warning("prover session %s aborted: %s", sid.hex(), err)
        raise
    logger.info("prover session %s: %s", sid.hex(), "accept" if verdict else "reject")
    return SessionOutcome(verdict, Transcript(D, e, y, verdict, sid), sid, record.claimant)


def run_verifier_session(transport, lookup: RecordLookup, entropy: Entropy,
                         timeout: float = DEFAULT_STEP_TIMEOUT,
                         first: Optional[WireMessage] = None) -> SessionOutcome:
    """Serve one identification; ``first`` is a COMMIT already read by a dispatcher."""
    channel = _channel(transport, timeout)
    sid = first.session_id if first is not None else b"\x00" * SESSION_ID_BYTES
    claimant = ""
    session: Optional[VerifierSession] = None
    try:
        msg = first or channel.receive()
        sid = msg.session_id
        if msg.kind != MessageKind.COMMIT:
            raise ProtocolError(f"expected COMMIT, got {msg.kind.name}", "protocol.order")
        claimant, payload = decode_claimant_body(msg.body)
        found = lookup(claimant)
        if found is None:
            raise ProtocolError(f"no enrollment for {claimant!r}", "protocol.unknown_claimant")
        record, curve = found
        session = VerifierSession(record, curve, entropy, sid)

        try:
            D = decode_point(payload, curve, strict=True)
        except WireError as err:
            channel.send_error(sid, err)
            logger.warning("session %s: malformed commitment (%s)", sid.hex(), err.code)
            return SessionOutcome(False, session.reject(), sid, claimant, err.code)
        session.receive_commit(D)
        e = session.challenge()
        channel.send(MessageKind.CHALLENGE, sid, encode_challenge(e, record.t))

        msg = channel.receive()
        if msg.kind == MessageKind.ERROR:
            raise _remote_error(msg)
        if msg.session_id != sid:
            logger.warning("session %s: frame from foreign session %s", sid.hex(), msg.session_id.hex())
            channel.send(MessageKind.RESULT, sid, encode_result(False))
            return SessionOutcome(False, session.reject(), sid, claimant, "protocol.session_mismatch")
        if msg.kind != MessageKind.RESPONSE:
            raise ProtocolError(f"expected RESPONSE, got {msg.kind.name}", "protocol.order")
        try:
            y = decode_scalar(msg.body, curve)
        except WireError as err:
            channel.send_error(sid, err)
            return SessionOutcome(False, session.reject(), sid, claimant, err.code)
        verdict = session.receive_response(y)
        channel.send(MessageKind.RESULT, sid, encode_result(verdict))
        return SessionOutcome(verdict, session.transcript, sid, claimant)
    except EcidError as err:
        if session is not None:
            session.reject()
        if not err.details.get("remote"):
            channel.send_error(sid, err)
        logger.warning("verifier session %s aborted: %s", sid.hex(), err)
        raise


def run_identification_session(role: str, transport, config: SessionConfig) -> SessionOutcome:
    if role == "prover":
        if config.record is None or config.secret is None or config.curve is None:
            raise ProtocolError("prover session needs record, secret and curve", "protocol.order")
        return run_prover_session(transport, config.record, config.secret, config.curve,
                                  config.entropy, config.timeout, config.session_id)
    if role == "verifier":
        if config.lookup is None:
            raise ProtocolError("verifier session needs a record lookup", "protocol.order")
        return run_verifier_session(transport, config.lookup, config.entropy, config.timeout,
                                    config.first_message)
    raise ValueError(f"unknown role {role!r}")
