#!/usr/bin/env python3
"""
ecid - Biometric-Seeded Elliptic Curve Identification
Main Entry Point - keygen, enrollment, verifier service and identification
"""

import sys
import os
import json
import logging
import argparse
import unittest
from pathlib import Path

# Add core modules to path
sys.path.insert(0, str(Path(__file__).parent))

from core.config import EcidSettings, load_settings
from core.errors import ConfigError, EcidError, ProtocolError, WireError

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_PROTOCOL = 2
EXIT_CONFIG = 3

VECTOR_CURVES = ["toy17", "toy19ed", "p192", "curve1174"]
VECTOR_INPUTS = ["alice-fingerprint-01", "bob-retina-scan-02", "carol-voiceprint-03", "dave-iris-04"]
DEFAULT_VECTORS = Path(__file__).parent / "data" / "vectors" / "hash_to_point.json"


def show_banner():
    """Display system banner"""
    print("🔐" + "="*60 + "🔐")
    print("   ecid - Biometric-Seeded EC Identification")
    print("   Enrollment + Verifier Service + Identification")
    print("🔐" + "="*60 + "🔐")


def configure_logging(settings: EcidSettings, verbose: bool):
    level = logging.DEBUG if verbose else getattr(logging, settings.log_level.upper())
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def _read_json(path, what: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"{what} not found: {path}", "config.missing")
    except json.JSONDecodeError as e:
        raise ConfigError(f"{what} {path} is not valid JSON: {e}")


def _write_json(path, payload: dict, private: bool = False):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    if private:
        os.chmod(path, 0o600)


def _curve(settings: EcidSettings, name=None):
    from core.curves import load_curve
    return load_curve(name or settings.default_curve, settings.registry_path, settings.strict)


def _resolver(settings: EcidSettings):
    from core.curves import load_curve
    return lambda name: load_curve(name, settings.registry_path, settings.strict)


def _read_biometric(path, settings: EcidSettings):
    from core.maps import BiometricString
    try:
        data = Path(path).read_bytes()
    except FileNotFoundError:
        raise ConfigError(f"biometric capture not found: {path}", "config.missing")
    return BiometricString(data, settings.max_biometric_bytes)


def _load_verifier_key(path, settings: EcidSettings):
    from core.idproto import SchnorrKeypair
    key = _read_json(path, "verifier key")
    try:
        curve = _curve(settings, key["curve"])
        return SchnorrKeypair.from_private(int(key["private"], 16), curve), curve
    except (KeyError, ValueError) as e:
        raise ConfigError(f"verifier key {path} is malformed: {e}")


def run_keygen(args, settings: EcidSettings) -> int:
    """Create the verifier's enrollment keypair"""
    from core.idproto import Entropy, generate_verifier_keypair
    from core.wire import encode_point

    curve = _curve(settings, args.curve)
    print(f"🔐 Generating verifier key on {curve.name}...")
    keypair = generate_verifier_keypair(curve, Entropy.from_settings(settings))
    out = Path(args.out)
    _write_json(out / "verifier.key", {"curve": curve.name, "private": format(keypair.s, "x")},
                private=True)
    _write_json(out / "verifier.pub", {"curve": curve.name,
                                       "public": encode_point(keypair.Z, curve).hex()})
    print(f"✅ Wrote {out / 'verifier.key'} and {out / 'verifier.pub'}")
    return EXIT_OK


def run_enroll(args, settings: EcidSettings) -> int:
    """Enroll a claimant: record and secret for the prover, encrypted package for the verifier"""
    from core.extractors import extractor_for_curve
    from core.idproto import Entropy, enroll
    from core.wire import decode_point, encode_enrollment_package, encode_record

    curve = _curve(settings, args.curve)
    pub = _read_json(args.verifier_pub, "verifier public key")
    if pub.get("curve") != curve.name:
        raise ConfigError(f"verifier key is on {pub.get('curve')}, enrollment curve is {curve.name}")
    try:
        verifier_pub = decode_point(bytes.fromhex(pub["public"]), curve, strict=True)
    except (KeyError, ValueError) as e:
        raise ConfigError(f"verifier public key is malformed: {e}")

    biometric = _read_biometric(args.biometric, settings)
    claimant = args.claimant or Path(args.out).stem
    entropy = Entropy.from_settings(settings)
    extractor = extractor_for_curve(curve, settings.extractor_k)

    print(f"🔐 Enrolling {claimant!r} on {curve.name} ({extractor.kind} k={extractor.k})...")
    record, secret = enroll(biometric, curve, entropy, extractor, settings.challenge_bits, claimant)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(encode_record(record, curve))
    package_out = Path(args.package_out or f"{out}.pkg")
    package = encode_enrollment_package(record, curve, verifier_pub, entropy)
    package_out.write_bytes(package)
    secret_out = Path(args.secret_out or f"{out}.secret")
    _write_json(secret_out, {"curve": curve.name, "claimant": claimant,
                             "alpha": format(secret.alpha, "x")}, private=True)
    print(f"✅ Record: {out}")
    print(f"✅ Package for the verifier: {package_out}")
    print(f"✅ Secret (keep private): {secret_out}")

    if args.submit:
        from interface import ProverClient
        print(f"📡 Submitting package to {args.submit}...")
        ProverClient(args.submit, entropy, settings.step_timeout).submit_enrollment(claimant, package)
        print("✅ Verifier stored the enrollment")
    return EXIT_OK


def run_serve(args, settings: EcidSettings) -> int:
    """Run the verifier service"""
    from core.idproto import Entropy
    from interface import VerifierService

    keypair, curve = _load_verifier_key(args.verifier_key, settings)
    service = VerifierService(args.records, keypair, curve.name, Entropy.from_settings(settings),
                              settings.step_timeout, settings.registry_path, settings.strict)
    for package in args.ingest or []:
        claimant = service.ingest_package(Path(package).read_bytes())
        print(f"✅ Ingested enrollment for {claimant!r}")
    print(f"📡 Verifier on {args.listen} with {len(service.store)} enrollment(s) - Ctrl+C to stop")
    try:
        service.serve_forever(args.listen)
    except KeyboardInterrupt:
        print("\n👋 Verifier stopped")
    return EXIT_OK


def run_identify(args, settings: EcidSettings) -> int:
    """Run one identification session against a verifier"""
    from core.idproto import Entropy, ProverSecret
    from core.maps import hash_to_point
    from core.wire import decode_record
    from interface import ProverClient

    try:
        record = decode_record(Path(args.record).read_bytes(), _resolver(settings))
    except FileNotFoundError:
        raise ConfigError(f"record not found: {args.record}", "config.missing")
    curve = _curve(settings, record.curve)
    secret_json = _read_json(args.secret, "secret file")
    try:
        secret = ProverSecret(int(secret_json["alpha"], 16))
    except (KeyError, ValueError) as e:
        raise ConfigError(f"secret file {args.secret} is malformed: {e}")
    if secret_json.get("curve") != record.curve:
        raise ConfigError("secret file and record name different curves")

    if args.biometric:
        fresh = hash_to_point(_read_biometric(args.biometric, settings), curve)
        if fresh != record.B:
            print("❌ Biometric capture does not match the enrolled record")
            return EXIT_REJECT

    print(f"📡 Identifying {record.claimant!r} at {args.connect}...")
    client = ProverClient(args.connect, Entropy.from_settings(settings), settings.step_timeout)
    outcome = client.identify(record, secret, curve)
    if outcome.verdict:
        print(f"✅ Accepted (session {outcome.session_id.hex()})")
        return EXIT_OK
    print(f"❌ Rejected (session {outcome.session_id.hex()})")
    return EXIT_REJECT


def run_gen_vectors(args, settings: EcidSettings) -> int:
    """Write hash-to-point fixture vectors"""
    from core.maps import HASH_DOMAIN, hash_to_point
    from core.wire import encode_point

    vectors = []
    for name in VECTOR_CURVES:
        curve = _curve(settings, name)
        for text in VECTOR_INPUTS:
            point = hash_to_point(text.encode("utf-8"), curve)
            vectors.append({"curve": name, "input": text, "point": encode_point(point, curve).hex()})
    out = Path(args.out) if args.out else DEFAULT_VECTORS
    _write_json(out, {"domain": HASH_DOMAIN.decode("ascii"), "vectors": vectors})
    print(f"✅ Wrote {len(vectors)} vectors to {out}")
    return EXIT_OK


def run_selftest(args, settings: EcidSettings) -> int:
    """Run the exhaustive desk-scale suites"""
    tools = Path(__file__).parent / "tools"
    print("🧪 Running desk-scale suites...")
    suite = unittest.defaultTestLoader.discover(str(tools), pattern="test_*.py")
    result = unittest.TextTestRunner(verbosity=2 if args.verbose else 1).run(suite)
    if result.wasSuccessful():
        print(f"✅ {result.testsRun} tests passed")
        return EXIT_OK
    print(f"❌ {len(result.failures)} failure(s), {len(result.errors)} error(s)")
    return EXIT_REJECT


COMMANDS = {
    "keygen": (run_keygen, EXIT_CONFIG),
    "enroll": (run_enroll, EXIT_PROTOCOL),
    "serve": (run_serve, EXIT_PROTOCOL),
    "identify": (run_identify, EXIT_PROTOCOL),
    "gen-vectors": (run_gen_vectors, EXIT_CONFIG),
    "selftest": (run_selftest, EXIT_CONFIG),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecid",
        description="Biometric-seeded elliptic curve identification",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="Exit codes: 0 accept/ok, 1 reject, 2 protocol error, 3 config error"
    )
    parser.add_argument('--config', help='Settings file (default: data/ecid.json or ECID_CONFIG)')
    parser.add_argument('--verbose', action='store_true', help='Debug logging')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('keygen', help='Create the verifier enrollment keypair')
    p.add_argument('--curve', help='Curve registry name')
    p.add_argument('--out', required=True, help='Directory for verifier.key and verifier.pub')

    p = sub.add_parser('enroll', help='Enroll a biometric capture')
    p.add_argument('--curve', help='Curve registry name')
    p.add_argument('--biometric', required=True, help='Biometric capture file')
    p.add_argument('--verifier-pub', required=True, help='Verifier public key (verifier.pub)')
    p.add_argument('--out', required=True, help='Prover record file')
    p.add_argument('--package-out', help='Encrypted package for the verifier (default RECORD.pkg)')
    p.add_argument('--secret-out', help='Prover secret file (default RECORD.secret)')
    p.add_argument('--claimant', help='Claimant id (default: record file name)')
    p.add_argument('--submit', metavar='ADDR', help='Send the package to a running verifier')

    p = sub.add_parser('serve', help='Run the verifier service')
    p.add_argument('--records', required=True, help='Enrollment store directory')
    p.add_argument('--verifier-key', required=True, help='Verifier private key (verifier.key)')
    p.add_argument('--listen', required=True, metavar='ADDR', help='host:port')
    p.add_argument('--ingest', nargs='*', metavar='PACKAGE', help='Enrollment packages to store first')

    p = sub.add_parser('identify', help='Identify against a verifier')
    p.add_argument('--record', required=True, help='Prover record file')
    p.add_argument('--secret', required=True, help='Prover secret file')
    p.add_argument('--connect', required=True, metavar='ADDR', help='host:port')
    p.add_argument('--biometric', help='Fresh capture; must hash to the enrolled B')

    p = sub.add_parser('gen-vectors', help='Write hash-to-point fixture vectors')
    p.add_argument('--out', help=f'Output file (default {DEFAULT_VECTORS})')

    sub.add_parser('selftest', help='Run the exhaustive desk-scale suites')
    return parser


def main(argv=None):
    """Main entry point"""
    args = build_parser().parse_args(argv)

    try:
        settings = load_settings(args.config)
    except ConfigError as e:
        print(f"❌ {e}")
        return EXIT_CONFIG
    configure_logging(settings, args.verbose)

    if args.command in ("serve", "selftest"):
        show_banner()

    handler, fallback = COMMANDS[args.command]
    try:
        return handler(args, settings)
    except ConfigError as e:
        print(f"❌ Configuration error: {e}")
        print("💡 Check --config, the ECID_* variables and the curve registry")
        return EXIT_CONFIG
    except (ProtocolError, WireError) as e:
        print(f"❌ Protocol error: {e}")
        return EXIT_PROTOCOL
    except EcidError as e:
        print(f"❌ {e}")
        return fallback
    except OSError as e:
        print(f"❌ I/O error: {e}")
        return fallback
    except KeyboardInterrupt:
        print("\n\n👋 Goodbye!")
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
