"""
Identification Protocols
EC-Schnorr baseline, the biometric-seeded three-move protocol and confidential enrollment
"""

from .entropy import Entropy
from .schnorr import SchnorrKeypair, Transcript, schnorr_run, schnorr_verify
from .protocol import (
    EnrollmentRecord, ProverSecret, SessionState, ProverSession, VerifierSession,
    challenge_range, validate_record, enroll, prover_commit, verifier_challenge,
    prover_respond, verifier_check, replay_transcript, extract_alpha_from_transcripts,
)
from .enrollment_crypto import (
    EnrollmentCiphertext, generate_verifier_keypair,
    encrypt_point_for_enrollment, decrypt_point_for_enrollment,
)
from .montecarlo import (
    ImpersonationStats, count_extraction_preimages, run_impersonation_trials,
    challenge_chi_square,
)

__all__ = [
    'Entropy',
    'SchnorrKeypair', 'Transcript', 'schnorr_run', 'schnorr_verify',
    'EnrollmentRecord', 'ProverSecret', 'SessionState', 'ProverSession', 'VerifierSession',
    'challenge_range', 'validate_record', 'enroll', 'prover_commit', 'verifier_challenge',
    'prover_respond', 'verifier_check', 'replay_transcript', 'extract_alpha_from_transcripts',
    'EnrollmentCiphertext', 'generate_verifier_keypair',
    'encrypt_point_for_enrollment', 'decrypt_point_for_enrollment',
    'ImpersonationStats', 'count_extraction_preimages', 'run_impersonation_trials',
    'challenge_chi_square',
]
