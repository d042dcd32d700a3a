#!/usr/bin/env python3
"""
Wire tests: point/scalar codecs, framing, record packages, the enrollment store and settings
"""

import json
import os
import random
import sys
import tempfile
import unittest
from dataclasses import replace
from unittest import mock

# Add core modules to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from core.config import EcidSettings, load_settings
from core.curves import enumerate_points, is_on_curve, load_curve
from core.errors import ConfigError, ProtocolError, WireError
from core.idproto import Entropy, enroll, generate_verifier_keypair
from core.wire import (
    MAX_FRAME, EnrollmentStore, FrameDecoder, MessageKind, WireMessage, decode_challenge,
    decode_claimant_body, decode_enrollment_package, decode_error, decode_point, decode_record,
    decode_result, decode_scalar, deframe, encode_challenge, encode_claimant_body,
    encode_enrollment_package, encode_error, encode_point, encode_record, encode_result,
    encode_scalar, frame,
)
from core.wire.framing import HEADER

SID = bytes(range(16))


class TestPointCodec(unittest.TestCase):
    def setUp(self):
        self.curve = load_curve("toy17")

    def test_examples(self):
        self.assertEqual(encode_point(self.curve.point(5, 1), self.curve), bytes.fromhex("040501"))
        self.assertEqual(encode_point(self.curve.identity(), self.curve), b"\x00")
        self.assertEqual(decode_point(b"\x00", self.curve), self.curve.identity())
        self.assertEqual(decode_point(bytes.fromhex("040501"), self.curve), self.curve.point(5, 1))

    def test_rejections(self):
        cases = {
            "040502": "wire.off_curve",
            "041101": "wire.non_canonical",
            "050501": "wire.bad_tag",
            "0405": "wire.bad_width",
            "04050100": "wire.bad_width",
            "0000": "wire.bad_width",
            "": "wire.bad_width",
        }
        for hex_data, code in cases.items():
            with self.assertRaises(WireError) as ctx:
                decode_point(bytes.fromhex(hex_data), self.curve)
            self.assertEqual(ctx.exception.code, code, hex_data)

    def test_lenient_decode_skips_curve_check(self):
        P = decode_point(bytes.fromhex("040502"), self.curve, strict=False)
        self.assertFalse(is_on_curve(P, self.curve))

    def test_edwards_neutral_needs_identity_tag(self):
        curve = load_curve("toy19ed")
        self.assertEqual(encode_point(curve.identity(), curve), b"\x00")
        with self.assertRaises(WireError) as ctx:
            decode_point(bytes.fromhex("040001"), curve)
        self.assertEqual(ctx.exception.code, "wire.non_canonical")

    def test_every_toy_point(self):
        for name in ("toy17", "toy19ed", "toy16bin", "toy25"):
            curve = load_curve(name)
            width = 1 + 2 * curve.field.byte_width
            for P in enumerate_points(curve):
                data = encode_point(P, curve)
                self.assertEqual(len(data), 1 if curve.is_identity(P) else width)
                self.assertEqual(decode_point(data, curve), P, name)

    def test_random_bytes_never_escape(self):
        rng = random.Random(99)
        for name in ("toy17", "toy16bin", "toy25", "p192"):
            curve = load_curve(name)
            for _ in range(500):
                length = rng.randrange(0, 2 * curve.field.byte_width + 3)
                data = bytes(rng.randrange(256) for _ in range(length))
                if length and rng.random() < 0.7:
                    data = b"\x04" + data[1:]
                try:
                    P = decode_point(data, curve)
                except WireError:
                    continue
                self.assertTrue(is_on_curve(P, curve))


class TestScalarCodec(unittest.TestCase):
    def test_widths(self):
        toy, p192 = load_curve("toy17"), load_curve("p192")
        self.assertEqual(encode_scalar(3, toy), b"\x03")
        self.assertEqual(len(encode_scalar(1, p192)), 24)
        self.assertEqual(decode_scalar(b"\x12", toy), 18)
        with self.assertRaises(WireError) as ctx:
            decode_scalar(b"\x00\x12", toy)
        self.assertEqual(ctx.exception.code, "wire.bad_width")
        with self.assertRaises(WireError):
            encode_scalar(256, toy)

    def test_challenges(self):
        self.assertEqual(encode_challenge(4, 3), b"\x04")
        self.assertEqual(len(encode_challenge(1, 80)), 10)
        self.assertEqual(decode_challenge(b"\x00" * 9 + b"\x07", 80), 7)
        with self.assertRaises(WireError):
            decode_challenge(b"\x01\x02", 3)


class TestFraming(unittest.TestCase):
    def test_layout(self):
        data = frame(WireMessage(MessageKind.COMMIT, SID, b"abc"))
        self.assertEqual(data[:5], b"\x00\x00\x00\x14\x02")
        self.assertEqual(data[5:21], SID)
        self.assertEqual(data[21:], b"abc")
        self.assertEqual(deframe(data), WireMessage(MessageKind.COMMIT, SID, b"abc"))

    def test_session_id_width(self):
        with self.assertRaises(WireError):
            frame(WireMessage(MessageKind.COMMIT, b"short"))

    def test_oversize(self):
        body_limit = MAX_FRAME - HEADER.size
        frame(WireMessage(MessageKind.ENROLL, SID, b"\x00" * body_limit))
        with self.assertRaises(WireError) as ctx:
            frame(WireMessage(MessageKind.ENROLL, SID, b"\x00" * (body_limit + 1)))
        self.assertEqual(ctx.exception.code, "wire.oversize")

        decoder = FrameDecoder()
        decoder.feed(b"\xff\xff\xff\xff" + b"\x02" + SID)
        with self.assertRaises(WireError) as ctx:
            decoder.next_message()
        self.assertEqual(ctx.exception.code, "wire.oversize")
        self.assertEqual(decoder.pending, 0)

    def test_length_below_header(self):
        decoder = FrameDecoder()
        decoder.feed(b"\x00\x00\x00\x03\x02\x00\x00")
        with self.assertRaises(WireError) as ctx:
            decoder.next_message()
        self.assertEqual(ctx.exception.code, "wire.bad_body")

    def test_concatenated_and_split_frames(self):
        messages = [WireMessage(MessageKind.COMMIT, SID, b"D"),
                    WireMessage(MessageKind.RESPONSE, SID, b"y" * 30),
                    WireMessage(MessageKind.RESULT, SID, b"\x01")]
        stream = b"".join(frame(m) for m in messages)

        decoder = FrameDecoder()
        decoder.feed(stream)
        self.assertEqual(list(decoder), messages)

        decoder = FrameDecoder()
        received = []
        for i in range(len(stream)):
            decoder.feed(stream[i:i + 1])
            received.extend(decoder)
        self.assertEqual(received, messages)
        decoder.finish()

    def test_unknown_kind_is_skipped(self):
        unknown = HEADER.pack(HEADER.size - 4 + 2, 0x09, SID) + b"zz"
        good = frame(WireMessage(MessageKind.CHALLENGE, SID, b"\x01"))
        decoder = FrameDecoder()
        decoder.feed(unknown + good)
        self.assertEqual(decoder.next_message(), WireMessage(MessageKind.CHALLENGE, SID, b"\x01"))
        self.assertEqual([e.code for e in decoder.errors], ["wire.unknown_kind"])
        with self.assertRaises(WireError) as ctx:
            deframe(unknown)
        self.assertEqual(ctx.exception.code, "wire.unknown_kind")

    def test_truncated(self):
        data = frame(WireMessage(MessageKind.COMMIT, SID, b"abc"))
        with self.assertRaises(WireError) as ctx:
            deframe(data[:-1])
        self.assertEqual(ctx.exception.code, "wire.truncated")
        decoder = FrameDecoder()
        decoder.feed(data[:10])
        self.assertIsNone(decoder.next_message())
        with self.assertRaises(WireError):
            decoder.finish()

    def test_trailing_bytes(self):
        data = frame(WireMessage(MessageKind.COMMIT, SID, b"abc"))
        with self.assertRaises(WireError) as ctx:
            deframe(data + b"\x00")
        self.assertEqual(ctx.exception.code, "wire.bad_body")

    def test_bodies(self):
        self.assertEqual(decode_claimant_body(encode_claimant_body("alice", b"\x04\x05\x01")),
                         ("alice", b"\x04\x05\x01"))
        self.assertTrue(decode_result(encode_result(True)))
        self.assertFalse(decode_result(encode_result(False)))
        for bad in (b"", b"\x02", b"\x01\x00"):
            with self.assertRaises(WireError):
                decode_result(bad)
        self.assertEqual(encode_error("protocol.order", "late")[:2], b"\x00\x01")
        self.assertEqual(decode_error(encode_error("wire.off_curve", "D")), ("wire.off_curve", "D"))
        self.assertEqual(decode_error(encode_error("no.such.code"))[0], "internal")
        with self.assertRaises(WireError):
            decode_error(b"\x01")

    def test_error_body_is_never_rewritten(self):
        for bad in (b"\x12\x34hi", b"\x00\x00", b"\x00\x01\xff\xfe", b"\x01\x03\xc3",
                    b"\x00\x01" + b"x" * 1025):
            with self.assertRaises(WireError) as ctx:
                decode_error(bad)
            self.assertEqual(ctx.exception.code, "wire.bad_body")
        for good in (b"\x00\x01", b"\x01\x03caf\xc3\xa9", b"\xff\xff" + b"x" * 1024):
            self.assertEqual(encode_error(*decode_error(good)), good)

    def test_long_error_text_cut_on_character_boundary(self):
        body = encode_error("protocol.order", "a" + "é" * 600)
        self.assertEqual(len(body), 2 + 1023)
        self.assertEqual(decode_error(body), ("protocol.order", "a" + "é" * 511))


class TestRecordCodec(unittest.TestCase):
    def setUp(self):
        self.curve = load_curve("p192")
        self.entropy = Entropy.seeded(17)
        self.rec, _ = enroll(b"alice-fingerprint-01", self.curve, self.entropy, claimant="alice")

    def test_record_round_trip(self):
        data = encode_record(self.rec, self.curve)
        self.assertEqual(data[:4], b"ECR1")
        self.assertEqual(decode_record(data), self.rec)

    def test_record_damage(self):
        data = encode_record(self.rec, self.curve)
        for damaged, code in ((b"XXXX" + data[4:], "wire.bad_body"),
                              (data[:-1], "wire.truncated"),
                              (data + b"\x00", "wire.bad_body")):
            with self.assertRaises(WireError) as ctx:
                decode_record(damaged)
            self.assertEqual(ctx.exception.code, code)

    def test_encrypted_package(self):
        verifier = generate_verifier_keypair(self.curve, self.entropy)
        package = encode_enrollment_package(self.rec, self.curve, verifier.Z, self.entropy)
        self.assertEqual(package[:5], b"ECP1\x01")
        self.assertNotIn(self.rec.s, package)
        self.assertEqual(decode_enrollment_package(package, verifier), self.rec)

        with self.assertRaises(ProtocolError) as ctx:
            decode_enrollment_package(package, None)
        self.assertEqual(ctx.exception.code, "protocol.record_invalid")

        tampered = package[:-1] + bytes([package[-1] ^ 0x80])
        with self.assertRaises(ProtocolError) as ctx:
            decode_enrollment_package(tampered, verifier)
        self.assertEqual(ctx.exception.code, "protocol.record_invalid")

    def test_plaintext_package(self):
        with self.assertLogs("core.wire.codec", level="WARNING"):
            package = encode_enrollment_package(self.rec, self.curve)
        self.assertEqual(package[4], 0)
        self.assertEqual(decode_enrollment_package(package, None), self.rec)

        with self.assertRaises(WireError):
            decode_enrollment_package(package[:4] + b"\x07" + package[5:], None)


class TestEnrollmentStore(unittest.TestCase):
    def setUp(self):
        self.curve = load_curve("toy17")
        entropy = Entropy.seeded(3)
        self.first, _ = enroll(b"alice-fingerprint-01", self.curve, entropy, claimant="alice")
        self.second, _ = enroll(b"alice-fingerprint-01", self.curve, entropy, claimant="alice",
                                t=5)
        self.bob, _ = enroll(b"bob-retina-scan-02", self.curve, entropy, claimant="bob")

    def test_latest_entry_wins(self):
        with tempfile.TemporaryDirectory() as tmp:
            store = EnrollmentStore(tmp)
            store.put(self.first, self.curve)
            store.put(self.bob, self.curve)
            store.put(self.second, self.curve)
            self.assertEqual(store.get("alice"), self.second)

            reopened = EnrollmentStore(tmp)
            self.assertEqual(len(reopened), 2)
            self.assertEqual(reopened.claimants(), ["alice", "bob"])
            self.assertEqual(reopened.get("alice"), self.second)
            record, curve = reopened.lookup("bob")
            self.assertEqual(record, self.bob)
            self.assertEqual(curve.name, "toy17")
            self.assertIsNone(reopened.lookup("mallory"))

    def test_partial_tail_is_ignored(self):
        with tempfile.TemporaryDirectory() as tmp:
            store = EnrollmentStore(tmp)
            store.put(self.first, self.curve)
            with open(store.path, "ab") as fh:
                fh.write(b"\x00\x00\x00\x50abc")
            with self.assertLogs("core.wire.store", level="WARNING"):
                reopened = EnrollmentStore(tmp)
            self.assertEqual(reopened.get("alice"), self.first)


class TestSettings(unittest.TestCase):
    def _write(self, tmp, values):
        path = os.path.join(tmp, "ecid.json")
        with open(path, "w") as fh:
            json.dump(values, fh)
        return path

    def test_defaults_file(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            settings = load_settings()
        self.assertEqual(settings.default_curve, "toy17")
        self.assertTrue(settings.registry_path.endswith(os.path.join("data", "curves.json")))
        self.assertIsNone(settings.entropy_seed)

    def test_file_and_env_overrides(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = self._write(tmp, {"default_curve": "p192", "registry_path": "reg.json"})
            env = {"ECID_T": "8", "ECID_TIMEOUT": "2.5", "ECID_SEED": "7"}
            with mock.patch.dict(os.environ, env, clear=True):
                settings = load_settings(path)
            self.assertEqual(settings.default_curve, "p192")
            self.assertEqual(settings.registry_path,
                             os.path.realpath(os.path.join(tmp, "reg.json")))
            self.assertEqual(settings.challenge_bits, 8)
            self.assertEqual(settings.step_timeout, 2.5)
            self.assertEqual(settings.entropy_seed, 7)
            self.assertTrue(Entropy.from_settings(settings).deterministic)

    def test_config_env_variable(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = self._write(tmp, {"extractor_k": 2})
            with mock.patch.dict(os.environ, {"ECID_CONFIG": path}, clear=True):
                self.assertEqual(load_settings().extractor_k, 2)

    def test_invalid(self):
        with tempfile.TemporaryDirectory() as tmp:
            with mock.patch.dict(os.environ, {}, clear=True):
                with self.assertRaises(ConfigError):
                    load_settings(self._write(tmp, {"colour": "blue"}))
                with self.assertRaises(ConfigError):
                    load_settings(self._write(tmp, {"step_timeout": 0}))
                with self.assertRaises(ConfigError) as ctx:
                    load_settings(os.path.join(tmp, "missing.json"))
                self.assertEqual(ctx.exception.code, "config.missing")
            with mock.patch.dict(os.environ, {"ECID_T": "eight"}, clear=True):
                with self.assertRaises(ConfigError):
                    load_settings()

    def test_to_dict(self):
        self.assertEqual(EcidSettings().to_dict()["max_biometric_bytes"], 4096)
        with self.assertRaises(ConfigError):
            replace(EcidSettings(), log_level="LOUD").validate()


if __name__ == "__main__":
    unittest.main()
