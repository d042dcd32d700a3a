"""
Wire Protocol
Byte codecs, length-prefixed framing, identification sessions and the enrollment store
"""

from .codec import (
    encode_point, decode_point, encode_scalar, decode_scalar, encode_challenge, decode_challenge,
    encode_record, decode_record, encode_enrollment_package, decode_enrollment_package,
    MODE_PLAINTEXT, MODE_ELGAMAL,
)
from .framing import (
    MessageKind, WireMessage, FrameDecoder, frame, deframe, MAX_FRAME, SESSION_ID_BYTES,
    ERROR_CODES, encode_claimant_body, decode_claimant_body, encode_result, decode_result,
    encode_error, decode_error,
)
from .session import (
    SocketTransport, PipeTransport, pipe_pair, MessageChannel, SessionOutcome, SessionConfig,
    run_prover_session, run_verifier_session, run_identification_session,
)
from .store import EnrollmentStore

__all__ = [
    'encode_point', 'decode_point', 'encode_scalar', 'decode_scalar',
    'encode_challenge', 'decode_challenge', 'encode_record', 'decode_record',
    'encode_enrollment_package', 'decode_enrollment_package', 'MODE_PLAINTEXT', 'MODE_ELGAMAL',
    'MessageKind', 'WireMessage', 'FrameDecoder', 'frame', 'deframe', 'MAX_FRAME', 'SESSION_ID_BYTES',
    'ERROR_CODES', 'encode_claimant_body', 'decode_claimant_body', 'encode_result', 'decode_result',
    'encode_error', 'decode_error',
    'SocketTransport', 'PipeTransport', 'pipe_pair', 'MessageChannel', 'SessionOutcome',
    'SessionConfig', 'run_prover_session', 'run_verifier_session', 'run_identification_session',
    'EnrollmentStore',
]
