"""
Randomness Extractors
L_k and D_k extraction from curve points with bound validation and an exact oracle
"""

from .extractor import (
    LK, DK, ExtractorParams, extract_lk, extract_dk, lk_to_bytes, dk_to_bytes,
    extractor_for_curve, extract_bytes, max_admissible_k, validate_extractor_params,
    check_for_curve,
)
from .oracle import OracleResult, distribution_distance, stat_distance_oracle, oracle_report

__all__ = [
    'LK', 'DK', 'ExtractorParams', 'extract_lk', 'extract_dk', 'lk_to_bytes', 'dk_to_bytes',
    'extractor_for_curve', 'extract_bytes', 'max_admissible_k', 'validate_extractor_params',
    'check_for_curve',
    'OracleResult', 'distribution_distance', 'stat_distance_oracle', 'oracle_report',
]
