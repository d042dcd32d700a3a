"""
Prover Client
Single-session claimant: submits enrollment packages and runs identification
"""

import logging
import socket
from typing import Optional

from core.curves import CurveParams
from core.errors import ProtocolError
from core.idproto import EnrollmentRecord, Entropy, ProverSecret
from core.wire import (
    SESSION_ID_BYTES, MessageChannel, MessageKind, SessionOutcome, SocketTransport,
    decode_error, decode_result, encode_claimant_body, run_prover_session,
)
from .verifier_service import parse_address

logger = logging.getLogger(__name__)


class ProverClient:
    """One connection per call; nothing is kept between sessions."""

    def __init__(self, address: str, entropy: Optional[Entropy] = None, step_timeout: float = 10.0):
        self.address = parse_address(address)
        self.entropy = entropy or Entropy.system()
        self.step_timeout = step_timeout

    def _connect(self) -> SocketTransport:
        try:
            sock = socket.create_connection(self.address, timeout=self.step_timeout)
        except OSError as e:
            raise ProtocolError(f"cannot reach verifier at {self.address[0]}:{self.address[1]}: {e}",
                                "protocol.aborted")
        return SocketTransport(sock)

    def submit_enrollment(self, claimant: str, package: bytes) -> bool:
        transport = self._connect()
        try:
            channel = MessageChannel(transport, self.step_timeout)
            sid = self.entropy.token_bytes(SESSION_ID_BYTES)
            channel.send(MessageKind.ENROLL, sid, encode_claimant_body(claimant, package))
            reply = channel.receive()
            if reply.kind == MessageKind.ERROR:
                code, text = decode_error(reply.body)
                raise ProtocolError(f"verifier refused enrollment: {text}", code)
            if reply.kind != MessageKind.RESULT or reply.session_id != sid:
                raise ProtocolError("unexpected reply to ENROLL", "protocol.order")
            return decode_result(reply.body)
        finally:
            transport.close()

    def identify(self, record: EnrollmentRecord, secret: ProverSecret,
                 curve: CurveParams) -> SessionOutcome:
        transport = self._connect()
        try:
            return run_prover_session(transport, record, secret, curve, self.entropy,
                                      self.step_timeout)
        finally:
            transport.close()
