"""
Enrollment Store
Append-only flat file of serialized records keyed by claimant id
"""

import logging
import os
import struct
import threading
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from core.curves import CurveParams, load_curve
from core.errors import EcidError, WireError
from core.idproto import EnrollmentRecord
from .codec import ByteReader, ByteWriter, CurveResolver, decode_record, encode_record

logger = logging.getLogger(__name__)

STORE_FILE = "records.bin"
ENTRY = struct.Struct("!I")


class EnrollmentStore:
    """Entries are a 4-byte length then (claimant, record bytes); the latest entry per claimant wins."""

    def __init__(self, directory, resolve: CurveResolver = load_curve):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.path = self.directory / STORE_FILE
        self.resolve = resolve
        self._lock = threading.Lock()
        self._records: Dict[str, bytes] = {}
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        data = self.path.read_bytes()
        pos = 0
        while pos < len(data):
            if pos + ENTRY.size > len(data):
                break
            (length,) = ENTRY.unpack_from(data, pos)
            if pos + ENTRY.size + length > len(data):
                break
            r = ByteReader(data[pos + ENTRY.size:pos + ENTRY.size + length])
            pos += ENTRY.size + length
            try:
                claimant = r.text()
            except WireError as e:
                logger.warning("skipping unreadable store entry: %s", e)
                continue
            self._records[claimant] = r.rest()
        if pos < len(data):
            logger.warning("%s ends with %d bytes of a partial entry; ignored", self.path, len(data) - pos)
        logger.info("loaded %d enrollment(s) from %s", len(self._records), self.path)

    def put(self, record: EnrollmentRecord, curve: CurveParams) -> None:
        payload = ByteWriter().text(record.claimant).raw(encode_record(record, curve)).getvalue()
        with self._lock:
            with open(self.path, "ab") as f:
                f.write(ENTRY.pack(len(payload)) + payload)
                f.flush()
                os.fsync(f.fileno())
            self._records[record.claimant] = payload[2 + len(record.claimant.encode("utf-8")):]
        logger.info("stored enrollment for %r", record.claimant)

    def get(self, claimant: str) -> Optional[EnrollmentRecord]:
        with self._lock:
            raw = self._records.get(claimant)
        if raw is None:
            return None
        return decode_record(raw, self.resolve)

    def lookup(self, claimant: str) -> Optional[Tuple[EnrollmentRecord, CurveParams]]:
        """Record and curve for a claimant, as the verifier session expects."""
        try:
            record = self.get(claimant)
        except EcidError as e:
            logger.warning("stored record for %r is unusable: %s", claimant, e)
            return None
        if record is None:
            return None
        return record, self.resolve(record.curve)

    def claimants(self) -> List[str]:
        with self._lock:
            return sorted(self._records)

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)
