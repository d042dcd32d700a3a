"""
Interface Package
Network-facing verifier service and prover client
"""

from .verifier_service import VerifierService, parse_address
from .prover_client import ProverClient

__all__ = ['VerifierService', 'ProverClient', 'parse_address']
