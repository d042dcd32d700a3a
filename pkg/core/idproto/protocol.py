"""
Biometric-Seeded Identification Protocol
Enrollment and the three-move commit D = rP - aB, challenge e, response y = r - ea mod l
"""

import hmac
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

from core.curves import (
    CurveParams, Point, is_on_curve, point_add, point_sub, scalar_mul,
)
from core.errors import ProtocolError
from core.extractors import (
    ExtractorParams, check_for_curve, extract_bytes, extractor_for_curve,
)
from core.maps import BiometricString, hash_to_point
from .entropy import Entropy
from .schnorr import Transcript

logger = logging.getLogger(__name__)

MAX_ALPHA_DRAWS = 64


@dataclass(frozen=True)
class EnrollmentRecord:
    """What the verifier stores for one claimant: B, s = Ext_k(aB), P and C = aP + B."""
    B: Point
    s: bytes
    P: Point
    C: Point
    curve: str
    extractor: ExtractorParams
    t: int
    claimant: str = ""


@dataclass
class ProverSecret:
    alpha: int
    session_r: Optional[int] = None

    def __repr__(self) -> str:
        return f"ProverSecret(alpha=<hidden>, in_session={self.session_r is not None})"


def _require_curve(rec: EnrollmentRecord, curve: CurveParams) -> None:
    if rec.curve != curve.name:
        raise ProtocolError(f"record is for {rec.curve}, not {curve.name}", "protocol.record_invalid")


def challenge_range(t: int) -> Tuple[int, int]:
    """Inclusive bounds of the challenge set {1, ..., 2^(t-1)}."""
    return 1, 1 << (t - 1)


def validate_record(rec: EnrollmentRecord, curve: CurveParams) -> None:
    """Check every record invariant that does not need the prover's secret."""
    _require_curve(rec, curve)
    for label, point in (("B", rec.B), ("C", rec.C), ("P", rec.P)):
        if not is_on_curve(point, curve):
            raise ProtocolError(f"record point {label} is not on {curve.name}", "protocol.record_invalid")
    if curve.is_identity(rec.B):
        raise ProtocolError("record point B is the identity", "protocol.record_invalid")
    if rec.P != curve.base_point:
        raise ProtocolError("record base point differs from the curve's", "protocol.record_invalid")
    expected = rec.extractor.output_bytes(curve.field.characteristic)
    if len(rec.s) != expected:
        raise ProtocolError(f"record secret is {len(rec.s)} bytes, extractor yields {expected}",
                            "protocol.record_invalid")
    if rec.t < 1:
        raise ProtocolError("challenge parameter t must be positive", "protocol.record_invalid")


def enroll(b: Union[BiometricString, bytes], curve: CurveParams, entropy: Entropy,
           extractor: Optional[ExtractorParams] = None, t: Optional[int] = None,
           claimant: str = "") -> Tuple[EnrollmentRecord, ProverSecret]:
    """Setup: B = h(b), random a, s = Ext_k(aB), C = aP + B."""
    if curve.base_point is None or curve.base_order is None:
        raise ProtocolError(f"{curve.name} has no base point", "protocol.record_invalid")
    extractor = extractor or extractor_for_curve(curve)
    check_for_curve(curve, extractor)
    t = curve.default_t if t is None else t
    l, P = curve.base_order, curve.base_point

    B = hash_to_point(b, curve)
    for _ in range(MAX_ALPHA_DRAWS):
        alpha = entropy.randrange(1, l)
        W = scalar_mul(alpha, B, curve)
        if not curve.is_identity(W):
            break
        logger.debug("alpha*B hit the identity; drawing again")
    else:
        raise ProtocolError("could not draw alpha with alpha*B != O", "protocol.record_invalid")

    s = extract_bytes(W, curve, extractor)
    C = point_add(scalar_mul(alpha, P, curve), B, curve)
    record = EnrollmentRecord(B=B, s=s, P=P, C=C, curve=curve.name, extractor=extractor,
                              t=t, claimant=claimant)
    logger.info("enrolled claimant %r on %s", claimant, curve.name)
    return record, ProverSecret(alpha)


def prover_commit(sec: ProverSecret, rec: EnrollmentRecord, curve: CurveParams,
                  entropy: Entropy, r: Optional[int] = None) -> Point:
    """Step 1: D = rP - aB with fresh r kept in the secret until the response."""
    _require_curve(rec, curve)
    if sec.session_r is not None:
        raise ProtocolError("a commitment is already in flight", "protocol.session_reuse")
    l = curve.base_order
    r = entropy.randrange(1, l) if r is None else r
    if not 1 <= r < l:
        raise ProtocolError("commitment scalar out of range", "protocol.order")
    sec.session_r = r
    return point_sub(scalar_mul(r, rec.P, curve), scalar_mul(sec.alpha, rec.B, curve), curve)


def verifier_challenge(t: int, entropy: Entropy) -> int:
    """Step 2: e uniform in {1, ..., 2^(t-1)}."""
    if t < 1:
        raise ProtocolError("t must be positive", "protocol.challenge_range")
    low, high = challenge_range(t)
    return entropy.randrange(low, high + 1)


def prover_respond(sec: ProverSecret, rec: EnrollmentRecord, curve: CurveParams, e: int) -> int:
    """Step 3: y = r - ea mod l; r is erased."""
    if sec.session_r is None:
        raise ProtocolError("no commitment in flight", "protocol.order")
    low, high = challenge_range(rec.t)
    if not low <= e <= high:
        raise ProtocolError(f"challenge {e} outside [{low}, {high}]", "protocol.challenge_range")
    r, sec.session_r = sec.session_r, None
    return (r - e * sec.alpha) % curve.base_order


def verifier_check(rec: EnrollmentRecord, D: Point, e: int, y: int, curve: CurveParams) -> bool:
    """Step 4: accept iff W = yP - D - e(B - C) is not O and Ext_k(W) = s."""
    _require_curve(rec, curve)
    if not is_on_curve(D, curve):
        raise ProtocolError("commitment D is not on the curve", "protocol.invalid_point")
    low, high = challenge_range(rec.t)
    if not low <= e <= high:
        raise ProtocolError(f"challenge {e} outside [{low}, {high}]", "protocol.challenge_range")
    if not 0 <= y < curve.base_order:
        return False
    B_minus_C = point_sub(rec.B, rec.C, curve)
    W = point_sub(point_sub(scalar_mul(y, rec.P, curve), D, curve),
                  scalar_mul(e, B_minus_C, curve), curve)
    if curve.is_identity(W):
        return False
    return hmac.compare_digest(extract_bytes(W, curve, rec.extractor), rec.s)


def replay_transcript(rec: EnrollmentRecord, transcript: Transcript, curve: CurveParams) -> bool:
    """Offline re-check of a logged transcript."""
    return verifier_check(rec, transcript.D, transcript.e, transcript.y, curve)


def extract_alpha_from_transcripts(T1: Transcript, T2: Transcript, l: int) -> int:
    """a = (y1 - y2) / (e2 - e1) mod l from two accepting runs sharing D."""
    if not (T1.verdict and T2.verdict):
        raise ProtocolError("both transcripts must be accepting", "protocol.transcripts")
    if T1.D != T2.D:
        raise ProtocolError("transcripts come from different commitments", "protocol.transcripts")
    if (T1.e - T2.e) % l == 0:
        raise ProtocolError("transcripts share the same challenge", "protocol.transcripts")
    return (T1.y - T2.y) * pow(T2.e - T1.e, -1, l) % l


class SessionState(Enum):
    IDLE = "idle"
    COMMITTED = "committed"
    CHALLENGED = "challenged"
    DONE = "done"


class ProverSession:
    """Claimant side of one identification; single use."""

    def __init__(self, secret: ProverSecret, record: EnrollmentRecord, curve: CurveParams,
                 entropy: Entropy):
        self.secret = secret
        self.record = record
        self.curve = curve
        self.entropy = entropy
        self.state = SessionState.IDLE
        self.D: Optional[Point] = None

    def commit(self) -> Point:
        if self.state != SessionState.IDLE:
            raise ProtocolError(f"commit in state {self.state.value}", "protocol.order")
        self.D = prover_commit(self.secret, self.record, self.curve, self.entropy)
        self.state = SessionState.COMMITTED
        return self.D

    def respond(self, e: int) -> int:
        if self.state != SessionState.COMMITTED:
            raise ProtocolError(f"response in state {self.state.value}", "protocol.order")
        try:
            y = prover_respond(self.secret, self.record, self.curve, e)
        except ProtocolError:
            self.abort()
            raise
        self.state = SessionState.DONE
        return y

    def abort(self) -> None:
        self.secret.session_r = None
        self.state = SessionState.DONE


class VerifierSession:
    """Verifier side of one identification; owns its challenge and transcript."""

    def __init__(self, record: EnrollmentRecord, curve: CurveParams, entropy: Entropy,
                 session_id: Optional[bytes] = None):
        self.record = record
        self.curve = curve
        self.entropy = entropy
        self.session_id = session_id
        self.state = SessionState.IDLE
        self.transcript: Optional[Transcript] = None

    def receive_commit(self, D: Point) -> None:
        if self.state != SessionState.IDLE:
            raise ProtocolError(f"commitment in state {self.state.value}", "protocol.order")
        if not is_on_curve(D, self.curve):
            self.state = SessionState.DONE
            raise ProtocolError("commitment D is not on the curve", "protocol.invalid_point")
        self.transcript = Transcript(D, 0, 0, None, self.session_id)
        self.state = SessionState.COMMITTED

    def challenge(self) -> int:
        if self.state != SessionState.COMMITTED:
            raise ProtocolError("challenge requested before a commitment", "protocol.order")
        e = verifier_challenge(self.record.t, self.entropy)
        self.transcript.e = e
        self.state = SessionState.CHALLENGED
        return e

    def receive_response(self, y: int) -> bool:
        if self.state != SessionState.CHALLENGED:
            raise ProtocolError(f"response in state {self.state.value}", "protocol.order")
        self.state = SessionState.DONE
        self.transcript.y = y
        verdict = verifier_check(self.record, self.transcript.D, self.transcript.e, y, self.curve)
        self.transcript.verdict = verdict
        logger.info("session %s for %r: %s", (self.session_id or b"").hex(),
                    self.record.claimant, "accept" if verdict else "reject")
        return verdict

    def reject(self) -> Transcript:
        """End the session without a valid response."""
        self.state = SessionState.DONE
        if self.transcript is None:
            self.transcript = Transcript(self.curve.identity(), 0, 0, False, self.session_id)
        self.transcript.verdict = False
        return self.transcript
