"""
Verifier Service
Threaded TCP verifier: accepts enrollment packages and serves identification sessions
"""

import json
import logging
import socketserver
import threading
import time
from pathlib import Path
from typing import Optional, Tuple

from core.curves import load_curve
from core.errors import ConfigError, EcidError, ProtocolError
from core.idproto import Entropy, SchnorrKeypair
from core.wire import (
    EnrollmentStore, MessageChannel, MessageKind, SessionOutcome, SocketTransport,
    decode_claimant_body, decode_enrollment_package, encode_point, encode_result,
    run_verifier_session,
)

logger = logging.getLogger(__name__)

TRANSCRIPT_LOG = "transcripts.jsonl"


def parse_address(address: str) -> Tuple[str, int]:
    """``host:port`` (host may be empty for all interfaces)."""
    host, sep, port = address.rpartition(":")
    if not sep or not port.isdigit():
        raise ConfigError(f"address must look like host:port, got {address!r}")
    return host or "0.0.0.0", int(port)


class _Handler(socketserver.BaseRequestHandler):
    def handle(self):
        self.server.service.handle_connection(SocketTransport(self.request), self.client_address)


class _Server(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True


class VerifierService:
    """Verifier side of the system; one session per connection."""

    def __init__(self, records_dir, verifier_key: SchnorrKeypair, verifier_curve: str,
                 entropy: Optional[Entropy] = None, step_timeout: float = 10.0,
                 registry_path: Optional[str] = None, strict: bool = True):
        """
        Initialize the verifier service

        Args:
            records_dir: directory of the enrollment store and transcript log
            verifier_key: ElGamal keypair that opens enrollment packages
            verifier_curve: curve the verifier key lives on
            entropy: challenge source (system entropy by default)
            step_timeout: seconds allowed per protocol step
            registry_path: curve registry file
            strict: on-curve checks at every decode and group operation
        """
        self.registry_path = registry_path
        self.strict = strict
        self.store = EnrollmentStore(records_dir, self.resolve)
        self.verifier_key = verifier_key
        self.verifier_curve = verifier_curve
        self.entropy = entropy or Entropy.system()
        self.step_timeout = step_timeout
        self.transcript_path = Path(records_dir) / TRANSCRIPT_LOG
        self._log_lock = threading.Lock()
        self.server: Optional[_Server] = None
        self.thread: Optional[threading.Thread] = None
        self.sessions_served = 0

    def resolve(self, name: str):
        return load_curve(name, self.registry_path, self.strict)

    def ingest_package(self, data: bytes, claimant: Optional[str] = None) -> str:
        """Open an enrollment package and store its record; returns the claimant id."""
        curve = self.resolve(self.verifier_curve)
        record = decode_enrollment_package(data, self.verifier_key, self.resolve)
        if record.curve != curve.name:
            raise ProtocolError(f"package is for {record.curve}, verifier key is on {curve.name}",
                                "protocol.record_invalid")
        if claimant is not None and claimant != record.claimant:
            raise ProtocolError("ENROLL claimant differs from the package", "protocol.record_invalid")
        self.store.put(record, curve)
        return record.claimant

    def _log_transcript(self, outcome: SessionOutcome) -> None:
        t = outcome.transcript
        if t is None:
            return
        record = self.store.get(outcome.claimant)
        entry = {
            "time": time.time(),
            "session_id": outcome.session_id.hex(),
            "claimant": outcome.claimant,
            "D": encode_point(t.D, self.resolve(record.curve)).hex() if record else None,
            "e": t.e,
            "y": t.y,
            "verdict": t.verdict,
            "error": outcome.error_code,
        }
        with self._log_lock:
            with open(self.transcript_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry) + "\n")

    def handle_connection(self, transport, peer=None) -> Optional[SessionOutcome]:
        """Dispatch on the first frame: ENROLL stores a package, COMMIT starts a session."""
        channel = MessageChannel(transport, self.step_timeout)
        try:
            first = channel.receive()
            if first.kind == MessageKind.ENROLL:
                claimant, package = decode_claimant_body(first.body)
                try:
                    self.ingest_package(package, claimant)
                except EcidError as e:
                    channel.send_error(first.session_id, e)
                    logger.warning("enrollment from %s refused: %s", peer, e)
                    return None
                channel.send(MessageKind.RESULT, first.session_id, encode_result(True))
                return None
            outcome = run_verifier_session(channel, self.store.lookup, self.entropy,
                                           self.step_timeout, first)
            self.sessions_served += 1
            self._log_transcript(outcome)
            return outcome
        except EcidError as e:
            logger.warning("connection from %s ended: %s", peer, e)
            return None
        finally:
            transport.close()

    def start(self, address: str) -> Tuple[str, int]:
        """Bind and serve on a daemon thread; returns the bound address."""
        self.server = _Server(parse_address(address), _Handler)
        self.server.service = self
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()
        bound = self.server.server_address[:2]
        logger.info("verifier listening on %s:%d", *bound)
        return bound

    def serve_forever(self, address: str) -> None:
        self.start(address)
        try:
            while self.thread.is_alive():
                self.thread.join(0.5)
        finally:
            self.stop()

    def stop(self) -> None:
        if self.server is not None:
            self.server.shutdown()
            self.server.server_close()
            self.server = None
