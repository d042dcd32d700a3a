"""
Hash-to-Curve Encodings
Icart and Elligator maps plus the biometric hash-to-point wrapper
"""

from .icart import icart_encode, supports_icart
from .elligator import (
    ElligatorParams, elligator_setup, elligator_params_for, elligator_phi, elligator_iota,
    bits_to_sigma, sigma_to_bits,
)
from .hashing import BiometricString, HASH_DOMAIN, encoding_name, hash_to_point

__all__ = [
    'icart_encode', 'supports_icart',
    'ElligatorParams', 'elligator_setup', 'elligator_params_for', 'elligator_phi', 'elligator_iota',
    'bits_to_sigma', 'sigma_to_bits',
    'BiometricString', 'HASH_DOMAIN', 'encoding_name', 'hash_to_point',
]
