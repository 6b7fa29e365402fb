"""Multi-scale reversible chaos game representation of biological sequences."""

from .alphabet import Alphabet, Base, CornerTable, build_alphabet, corner_points, corner_table, token_index
from .cgr import (
    Trajectory,
    check_precision_bound,
    decode,
    encode_multiscale,
    encode_scale,
    kmer_stream,
)
from .exact import Point2, grid_modulus, midpoint, snap_round_q
from .features import cgr_feature_vector, scale_descriptor, zscore_apply, zscore_fit

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "Base",
    "CornerTable",
    "Point2",
    "Trajectory",
    "build_alphabet",
    "cgr_feature_vector",
    "check_precision_bound",
    "corner_points",
    "corner_table",
    "decode",
    "encode_multiscale",
    "encode_scale",
    "grid_modulus",
    "kmer_stream",
    "midpoint",
    "scale_descriptor",
    "snap_round_q",
    "token_index",
    "zscore_apply",
    "zscore_fit",
]
