"""Discrete memoryless channels, their Blackwell measures, and the operations between them."""
from .analysis import (
    DegradationWitness,
    NoisinessBudget,
    NoisinessEstimate,
    NotDegraded,
    continuity_probe,
    is_degraded,
    noisiness_lower_bound,
    tv_class_distance,
)
from .blackwell import (
    BlackwellMeasure,
    blackwell_measure,
    bhattacharyya_of,
    canonicalize,
    channel_from_measure,
    code_error_of,
    equivalent,
    is_balanced,
    map_error_of,
    measure_mixture,
    measure_tensor,
    meta_push_forward,
    minus_convolve,
    mutual_information_of,
    plus_convolve,
    rank,
    sum_measure,
    tv_distance,
)
from .channel_core import (
    Channel,
    ChannelDecomposition,
    Distribution,
    bec,
    bsc,
    channel_distance,
    compose,
    constant_channel,
    decompose,
    deterministic_channel,
    identity_channel,
    random_channel,
    validate_channel,
)
from .errors import (
    BadAlpha,
    BadWeights,
    ChannelError,
    DimensionMismatch,
    NoConvergence,
    NonStochastic,
    NotBalanced,
    NotUniformityPreserving,
    ParseError,
    TooLarge,
)
from .operations import (
    BinaryOp,
    RightInverse,
    add_mod,
    channel_product,
    channel_sum,
    check_uniformity_preserving,
    interpolate,
    polar_minus,
    polar_plus,
    right_inverse,
    xor_op,
)
from .parameters import (
    CapacityResult,
    Code,
    JointPrior,
    bhattacharyya,
    capacity,
    code_error,
    correct_guess_prob,
    map_error,
    mutual_information,
    optimal_code_error,
    symmetric_capacity,
)

__version__ = "0.1.0"
