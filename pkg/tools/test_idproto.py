#!/usr/bin/env python3
"""
Identification protocol tests: Schnorr baseline, completeness, soundness and enrollment sealing
"""

import os
import random
import sys
import unittest
from dataclasses import replace
from itertools import combinations

# Add core modules to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from core.curves import enumerate_points, load_curve, point_add, point_sub, scalar_mul
from core.errors import ProtocolError
from core.extractors import extract_bytes, extractor_for_curve
from core.idproto import (
    EnrollmentRecord, Entropy, ImpersonationStats, ProverSecret, ProverSession, SchnorrKeypair,
    SessionState, Transcript, VerifierSession, challenge_chi_square, challenge_range,
    count_extraction_preimages, decrypt_point_for_enrollment, encrypt_point_for_enrollment,
    enroll, extract_alpha_from_transcripts, generate_verifier_keypair, prover_commit,
    prover_respond, replay_transcript, run_impersonation_trials, schnorr_run, schnorr_verify,
    validate_record, verifier_challenge, verifier_check,
)


def make_record(curve, B, alpha, t=3):
    """Record for a chosen B and alpha, bypassing hash_to_point."""
    extractor = extractor_for_curve(curve)
    W = scalar_mul(alpha, B, curve)
    C = point_add(scalar_mul(alpha, curve.base_point, curve), B, curve)
    return EnrollmentRecord(B=B, s=extract_bytes(W, curve, extractor), P=curve.base_point, C=C,
                            curve=curve.name, extractor=extractor, t=t)


class TestEntropy(unittest.TestCase):
    def test_seeded_is_reproducible(self):
        a, b = Entropy.seeded(5), Entropy.seeded(5)
        self.assertEqual([a.randrange(1, 100) for _ in range(10)],
                         [b.randrange(1, 100) for _ in range(10)])
        self.assertTrue(a.deterministic)
        self.assertFalse(Entropy.system().deterministic)

    def test_token_bytes(self):
        self.assertEqual(len(Entropy.seeded(1).token_bytes(16)), 16)
        self.assertEqual(len(Entropy.system().token_bytes(16)), 16)
        self.assertEqual(Entropy.seeded(1).token_bytes(0), b"")


class TestSchnorr(unittest.TestCase):
    def setUp(self):
        self.curve = load_curve("toy17")
        self.keypair = SchnorrKeypair.from_private(3, self.curve)

    def test_worked_example(self):
        run = schnorr_run(self.keypair, self.curve, Entropy.seeded(0), t=3, r=5, c=2)
        self.assertEqual(run.y, 18)
        self.assertTrue(run.verdict)
        self.assertEqual(run.D, self.curve.point(9, 16))

    def test_zero_challenge(self):
        run = schnorr_run(self.keypair, self.curve, Entropy.seeded(0), t=3, r=5, c=0)
        self.assertEqual(run.y, 5)
        self.assertTrue(run.verdict)

    def test_tampered_response(self):
        run = schnorr_run(self.keypair, self.curve, Entropy.seeded(0), t=3, r=5, c=2)
        self.assertFalse(schnorr_verify(run.D, run.e, (run.y + 1) % 19, self.keypair.Z, self.curve))

    def test_exhaustive_small_challenges(self):
        P, Z = self.curve.base_point, self.keypair.Z
        for r in range(1, 19):
            for c in range(8):
                run = schnorr_run(self.keypair, self.curve, Entropy.seeded(0), t=3, r=r, c=c)
                self.assertTrue(run.verdict)
                self.assertEqual(run.D, point_add(scalar_mul(run.y, P, self.curve),
                                                  scalar_mul(c, Z, self.curve), self.curve))
                accepted = [y for y in range(19) if schnorr_verify(run.D, c, y, Z, self.curve)]
                self.assertEqual(accepted, [run.y], (r, c))

    def test_challenge_range(self):
        with self.assertRaises(ProtocolError):
            schnorr_run(self.keypair, self.curve, Entropy.seeded(0), t=3, r=5, c=8)

    def test_private_range(self):
        with self.assertRaises(ProtocolError):
            SchnorrKeypair.from_private(19, self.curve)


class TestProtocolExample(unittest.TestCase):
    def setUp(self):
        self.curve = load_curve("toy17")
        self.P = self.curve.base_point
        self.rec = make_record(self.curve, self.P, 2)

    def test_commit_and_response(self):
        sec = ProverSecret(2)
        D = prover_commit(sec, self.rec, self.curve, Entropy.seeded(0), r=7)
        self.assertEqual(D, self.curve.point(9, 16))
        y = prover_respond(sec, self.rec, self.curve, 2)
        self.assertEqual(y, 3)
        self.assertIsNone(sec.session_r)
        self.assertTrue(verifier_check(self.rec, D, 2, y, self.curve))
        self.assertFalse(verifier_check(self.rec, D, 2, 4, self.curve))
        self.assertFalse(verifier_check(self.rec, D, 2, 19, self.curve))

    def test_challenge_bounds(self):
        self.assertEqual(challenge_range(3), (1, 4))
        sec = ProverSecret(2)
        prover_commit(sec, self.rec, self.curve, Entropy.seeded(0), r=7)
        for e in (0, 5):
            with self.assertRaises(ProtocolError) as ctx:
                prover_respond(sec, self.rec, self.curve, e)
            self.assertEqual(ctx.exception.code, "protocol.challenge_range")

    def test_commit_twice(self):
        sec = ProverSecret(2)
        prover_commit(sec, self.rec, self.curve, Entropy.seeded(0))
        with self.assertRaises(ProtocolError) as ctx:
            prover_commit(sec, self.rec, self.curve, Entropy.seeded(0))
        self.assertEqual(ctx.exception.code, "protocol.session_reuse")

    def test_off_curve_commitment(self):
        with self.assertRaises(ProtocolError) as ctx:
            verifier_check(self.rec, self.curve.point(5, 2), 1, 0, self.curve)
        self.assertEqual(ctx.exception.code, "protocol.invalid_point")

    def test_wrong_curve(self):
        with self.assertRaises(ProtocolError):
            verifier_check(self.rec, self.P, 1, 0, load_curve("toy19ed"))


class TestCompleteness(unittest.TestCase):
    """Honest runs accept for every B, alpha, r and e on the toy curves."""

    def _sweep(self, name, rs):
        """Returns (perturbed runs, perturbed accepts, extraction collisions) for y xor 1."""
        curve = load_curve(name)
        l, P = curve.base_order, curve.base_point
        t = 3
        low, high = challenge_range(t)
        checked = perturbed = accepted = collisions = 0
        for B in enumerate_points(curve):
            if curve.is_identity(B):
                continue
            for alpha in range(1, l):
                W = scalar_mul(alpha, B, curve)
                if curve.is_identity(W):
                    continue
                rec = make_record(curve, B, alpha, t)
                for r in rs:
                    for e in range(low, high + 1):
                        sec = ProverSecret(alpha)
                        D = prover_commit(sec, rec, curve, Entropy.seeded(0), r=r)
                        y = prover_respond(sec, rec, curve, e)
                        self.assertTrue(verifier_check(rec, D, e, y, curve), (name, alpha, r, e))
                        checked += 1
                        flipped = y ^ 1
                        if flipped >= l:
                            continue
                        perturbed += 1
                        accepted += verifier_check(rec, D, e, flipped, curve)
                        shifted = point_add(W, scalar_mul((flipped - y) % l, P, curve), curve)
                        if not curve.is_identity(shifted):
                            collisions += extract_bytes(shifted, curve, rec.extractor) == rec.s
        self.assertGreater(checked, 0)
        return perturbed, accepted, collisions

    def test_toy17(self):
        perturbed, accepted, collisions = self._sweep("toy17", range(1, 19))
        self.assertGreater(perturbed, 0)
        # a flipped low bit of y is accepted exactly when W +- P extracts to s
        self.assertEqual(perturbed - accepted, perturbed - collisions)
        self.assertLess(accepted, perturbed)

    def test_toy19ed(self):
        self._sweep("toy19ed", (1, 2, 3, 4))

    def test_recovers_alpha_times_b(self):
        curve = load_curve("toy17")
        P = curve.base_point
        for alpha in range(1, 19):
            B = scalar_mul(4, P, curve)
            rec = make_record(curve, B, alpha)
            sec = ProverSecret(alpha)
            D = prover_commit(sec, rec, curve, Entropy.seeded(alpha), r=11)
            e = 3
            y = prover_respond(sec, rec, curve, e)
            W = point_sub(point_sub(scalar_mul(y, P, curve), D, curve),
                          scalar_mul(e, point_sub(rec.B, rec.C, curve), curve), curve)
            self.assertEqual(W, scalar_mul(alpha, B, curve))


class TestSoundness(unittest.TestCase):
    def setUp(self):
        self.curve = load_curve("toy17")
        self.alpha = 13
        self.rec = make_record(self.curve, scalar_mul(6, self.curve.base_point, self.curve),
                               self.alpha)

    def _transcript(self, r, e):
        sec = ProverSecret(self.alpha)
        D = prover_commit(sec, self.rec, self.curve, Entropy.seeded(0), r=r)
        y = prover_respond(sec, self.rec, self.curve, e)
        return Transcript(D, e, y, verifier_check(self.rec, D, e, y, self.curve))

    def test_two_challenges_reveal_alpha(self):
        T1, T2 = self._transcript(9, 1), self._transcript(9, 4)
        self.assertEqual(extract_alpha_from_transcripts(T1, T2, 19), self.alpha)

    def test_every_challenge_pair(self):
        low, high = challenge_range(self.rec.t)
        for r in range(1, 19):
            runs = {e: self._transcript(r, e) for e in range(low, high + 1)}
            for e1, e2 in combinations(runs, 2):
                self.assertEqual(extract_alpha_from_transcripts(runs[e1], runs[e2], 19), self.alpha,
                                 (r, e1, e2))
                self.assertEqual(extract_alpha_from_transcripts(runs[e2], runs[e1], 19), self.alpha)

    def test_preconditions(self):
        T1 = self._transcript(9, 1)
        with self.assertRaises(ProtocolError):
            extract_alpha_from_transcripts(T1, self._transcript(10, 2), 19)
        with self.assertRaises(ProtocolError):
            extract_alpha_from_transcripts(T1, self._transcript(9, 1), 19)
        rejected = Transcript(T1.D, 2, 0, False)
        with self.assertRaises(ProtocolError):
            extract_alpha_from_transcripts(T1, rejected, 19)

    def test_replay(self):
        T = self._transcript(9, 2)
        self.assertTrue(replay_transcript(self.rec, T, self.curve))
        T.y = (T.y + 1) % 19
        self.assertFalse(replay_transcript(self.rec, T, self.curve))


class TestSessions(unittest.TestCase):
    def setUp(self):
        self.curve = load_curve("toy17")
        self.rec = make_record(self.curve, self.curve.base_point, 2)

    def test_honest_session(self):
        prover = ProverSession(ProverSecret(2), self.rec, self.curve, Entropy.seeded(1))
        verifier = VerifierSession(self.rec, self.curve, Entropy.seeded(2), b"s" * 16)
        verifier.receive_commit(prover.commit())
        e = verifier.challenge()
        self.assertTrue(verifier.receive_response(prover.respond(e)))
        self.assertEqual(prover.state, SessionState.DONE)
        self.assertTrue(verifier.transcript.verdict)
        self.assertEqual(verifier.transcript.session_id, b"s" * 16)

    def test_out_of_order(self):
        prover = ProverSession(ProverSecret(2), self.rec, self.curve, Entropy.seeded(1))
        with self.assertRaises(ProtocolError) as ctx:
            prover.respond(1)
        self.assertEqual(ctx.exception.code, "protocol.order")
        prover.commit()
        with self.assertRaises(ProtocolError):
            prover.commit()

        verifier = VerifierSession(self.rec, self.curve, Entropy.seeded(2))
        with self.assertRaises(ProtocolError):
            verifier.challenge()
        with self.assertRaises(ProtocolError):
            verifier.receive_response(3)

    def test_bad_challenge_aborts_prover(self):
        prover = ProverSession(ProverSecret(2), self.rec, self.curve, Entropy.seeded(1))
        prover.commit()
        with self.assertRaises(ProtocolError):
            prover.respond(9)
        self.assertEqual(prover.state, SessionState.DONE)
        self.assertIsNone(prover.secret.session_r)

    def test_off_curve_commit(self):
        verifier = VerifierSession(self.rec, self.curve, Entropy.seeded(2))
        with self.assertRaises(ProtocolError) as ctx:
            verifier.receive_commit(self.curve.point(5, 2))
        self.assertEqual(ctx.exception.code, "protocol.invalid_point")
        self.assertFalse(verifier.reject().verdict)

    def test_single_use(self):
        prover = ProverSession(ProverSecret(2), self.rec, self.curve, Entropy.seeded(1))
        verifier = VerifierSession(self.rec, self.curve, Entropy.seeded(2))
        verifier.receive_commit(prover.commit())
        verifier.receive_response(prover.respond(verifier.challenge()))
        with self.assertRaises(ProtocolError):
            verifier.receive_response(0)


class TestChallenges(unittest.TestCase):
    def test_single_bit(self):
        entropy = Entropy.seeded(3)
        self.assertEqual({verifier_challenge(1, entropy) for _ in range(50)}, {1})

    def test_uniform_at_eight_bits(self):
        entropy = Entropy.seeded(11)
        samples = [verifier_challenge(8, entropy) for _ in range(12800)]
        self.assertEqual(min(samples), 1)
        self.assertEqual(max(samples), 128)
        chi2, dof = challenge_chi_square(samples, 8)
        self.assertEqual(dof, 127)
        self.assertLess(chi2, 200.0)

    def test_chi_square_rejects_out_of_range(self):
        with self.assertRaises(ValueError):
            challenge_chi_square([0, 1, 2], 3)


class TestEnrollment(unittest.TestCase):
    def test_enroll_produces_valid_record(self):
        for name in ("toy17", "toy19ed", "p192"):
            curve = load_curve(name)
            rec, sec = enroll(b"alice-fingerprint-01", curve, Entropy.seeded(4), claimant="alice")
            validate_record(rec, curve)
            self.assertEqual(rec.claimant, "alice")
            W = scalar_mul(sec.alpha, rec.B, curve)
            self.assertEqual(extract_bytes(W, curve, rec.extractor), rec.s)
            self.assertEqual(rec.C, point_add(scalar_mul(sec.alpha, curve.base_point, curve),
                                              rec.B, curve))
            self.assertNotIn(str(sec.alpha), repr(sec))

    def test_validate_record_rejects(self):
        curve = load_curve("toy17")
        rec, _ = enroll(b"bob-retina-scan-02", curve, Entropy.seeded(4))
        broken = [
            replace(rec, curve="toy19ed"),
            replace(rec, B=curve.identity()),
            replace(rec, C=curve.point(5, 2)),
            replace(rec, P=curve.point(6, 3)),
            replace(rec, s=rec.s + b"\x00"),
            replace(rec, t=0),
        ]
        for bad in broken:
            with self.assertRaises(ProtocolError) as ctx:
                validate_record(bad, curve)
            self.assertEqual(ctx.exception.code, "protocol.record_invalid")


class TestImpersonation(unittest.TestCase):
    def test_acceptance_rate_matches_preimage_count(self):
        curve = load_curve("toy17")
        rec, _ = enroll(b"alice-fingerprint-01", curve, Entropy.seeded(8), t=8)
        preimages = count_extraction_preimages(rec, curve)
        self.assertGreaterEqual(preimages, 1)
        stats = run_impersonation_trials(rec, curve, 10000, seed=1234)
        self.assertEqual(stats.trials, 10000)
        self.assertAlmostEqual(stats.expected_rate, preimages / 19)
        self.assertLessEqual(stats.rate, stats.expected_rate + 3 * stats.sigma)
        self.assertTrue(stats.within_bound)

    def test_within_bound(self):
        self.assertTrue(ImpersonationStats(100, 12, 0.12, 0.1, 0.01).within_bound)
        self.assertFalse(ImpersonationStats(100, 14, 0.14, 0.1, 0.01).within_bound)

    def test_large_curves_refused(self):
        curve = load_curve("p192")
        rec, _ = enroll(b"alice-fingerprint-01", curve, Entropy.seeded(8))
        with self.assertRaises(ValueError):
            run_impersonation_trials(rec, curve, 10, seed=1)
        with self.assertRaises(ValueError):
            challenge_chi_square([1, 2, 3], 80)


class TestEnrollmentCrypto(unittest.TestCase):
    def _round_trip(self, name):
        curve = load_curve(name)
        entropy = Entropy.seeded(21)
        verifier = generate_verifier_keypair(curve, entropy)
        rec, _ = enroll(b"carol-voiceprint-03", curve, entropy)
        ct = encrypt_point_for_enrollment(rec.B, rec.s, verifier.Z, curve, entropy)
        self.assertEqual(decrypt_point_for_enrollment(ct, verifier, curve), (rec.B, rec.s))
        return curve, entropy, verifier, rec, ct

    def test_round_trip(self):
        for name in ("toy17", "toy19ed", "p192"):
            self._round_trip(name)

    def test_fresh_randomness(self):
        curve, entropy, verifier, rec, ct = self._round_trip("p192")
        again = encrypt_point_for_enrollment(rec.B, rec.s, verifier.Z, curve, entropy)
        self.assertNotEqual(ct.R, again.R)
        self.assertNotEqual(ct.M, again.M)

    def test_tampering_detected(self):
        curve, entropy, verifier, rec, ct = self._round_trip("p192")
        flipped = bytes([ct.sealed_s[0] ^ 1]) + ct.sealed_s[1:]
        with self.assertRaises(ProtocolError) as ctx:
            decrypt_point_for_enrollment(replace(ct, sealed_s=flipped), verifier, curve)
        self.assertEqual(ctx.exception.code, "protocol.record_invalid")

    def test_every_toy17_point(self):
        curve = load_curve("toy17")
        entropy = Entropy.seeded(22)
        verifier = generate_verifier_keypair(curve, entropy)
        for i, B in enumerate(enumerate_points(curve)):
            s = bytes([i % 16])
            ct = encrypt_point_for_enrollment(B, s, verifier.Z, curve, entropy)
            self.assertEqual(decrypt_point_for_enrollment(ct, verifier, curve), (B, s))

    def test_bit_flips_detected(self):
        curve, entropy, verifier, rec, ct = self._round_trip("toy17")
        blob = ct.sealed_s + ct.tag
        rng = random.Random(7)
        for _ in range(1000):
            bit = rng.randrange(len(blob) * 8)
            mutated = bytearray(blob)
            mutated[bit // 8] ^= 1 << (bit % 8)
            forged = replace(ct, sealed_s=bytes(mutated[:len(ct.sealed_s)]),
                             tag=bytes(mutated[len(ct.sealed_s):]))
            with self.assertRaises(ProtocolError) as ctx:
                decrypt_point_for_enrollment(forged, verifier, curve)
            self.assertEqual(ctx.exception.code, "protocol.record_invalid")

    def test_points_bound_to_seal(self):
        curve, entropy, verifier, rec, ct = self._round_trip("toy17")
        P = curve.base_point
        for forged in (replace(ct, M=point_add(ct.M, P, curve)),
                       replace(ct, R=point_add(ct.R, P, curve))):
            with self.assertRaises(ProtocolError):
                decrypt_point_for_enrollment(forged, verifier, curve)

    def test_wrong_key(self):
        curve, entropy, verifier, rec, ct = self._round_trip("p192")
        other = SchnorrKeypair.from_private(verifier.s % (curve.base_order - 1) + 1, curve)
        with self.assertRaises(ProtocolError):
            decrypt_point_for_enrollment(ct, other, curve)

    def test_bad_public_key(self):
        curve = load_curve("toy17")
        with self.assertRaises(ProtocolError):
            encrypt_point_for_enrollment(curve.base_point, b"\x01", curve.identity(), curve,
                                         Entropy.seeded(1))


if __name__ == "__main__":
    unittest.main()
