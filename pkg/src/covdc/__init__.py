"""Coded distributed computation of linearly separable functions via covering codes."""

from .code import (
    LinearCode,
    build_coset_leader_table,
    covering_radius,
    hamming_ball_volume,
    partial_covering_radius,
    syndrome_decode,
)
from .covering import TargetSet, build_covering_code, build_partial_covering_code
from .fq_linalg import FieldSpec, FqMatrix, FqVector
from .scheme import (
    FullCovering,
    GivenD,
    PartialCovering,
    Scheme,
    build_scheme_coded,
    costs,
    verify_scheme,
)

__all__ = [
    "FieldSpec",
    "FqMatrix",
    "FqVector",
    "FullCovering",
    "GivenD",
    "LinearCode",
    "PartialCovering",
    "Scheme",
    "TargetSet",
    "build_coset_leader_table",
    "build_covering_code",
    "build_partial_covering_code",
    "build_scheme_coded",
    "costs",
    "covering_radius",
    "hamming_ball_volume",
    "partial_covering_radius",
    "syndrome_decode",
    "verify_scheme",
]
