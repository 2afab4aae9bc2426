"""Exact binary-digit experiments on square roots of integers.

The package computes digits of quadratic surds exactly, tabulates digit
frequencies, and evaluates the finite-difference quantities that relate the
digits of a number to the digits of its square.
"""

from .bigint_core import (
    guard_bit_cap,
    is_perfect_square,
    isqrt,
    pinned_floor,
    pinned_floor_sqrt,
)
from .boxes import (
    BoxIndex,
    PrefixDetermination,
    box_index,
    compute_Mn,
    compute_Nr,
    same_box,
    x_prefix_from_u_prefix,
)
from .errors import (
    BadScale,
    IndexBeyondLength,
    InconsistentFlip,
    LengthMismatch,
    OutOfRange,
    PerfectSquareRadicand,
    PrecisionExhausted,
    SearchExhausted,
    SurdError,
)
from .expansion import (
    DyadicExpansion,
    Exactness,
    FrequencyPoint,
    QuadraticSurd,
    add_dyadic,
    build_lemma_points,
    complement_digits,
    digits,
    first_tail_agreement,
    freq_series,
    lambda_of,
    make_surd,
    minimal_scale,
    square_surd,
)
from .findiff import (
    DifferenceReport,
    PerturbationPair,
    apply_x_flips,
    chain_rule_check,
    decay_series,
    delta_u,
    eval_h_n,
    frozen_prefix_delta,
    hybrid_point,
    invariance_check,
    partial_diff_h,
    partial_dU_dX,
    tail_variants,
    total_diff_check,
)

__version__ = "0.1.0"
