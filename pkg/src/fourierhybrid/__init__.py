"""Reconstruction of piecewise-smooth functions from non-uniform Fourier
samples: an HDAF-filtered admissible-frame approximation away from jumps,
stitched to stable Chebyshev least-squares extrapolation inside buffer
zones around them.
"""

from .chebfit import (
    ChebyshevFit,
    chebyshev_fit,
    evaluate_fit,
    extrapolation_error_bound,
    extrapolation_params_practical,
    extrapolation_params_theoretical,
)
from .filters import (
    AdaptiveParams,
    FilterConfig,
    adaptive_params,
    filter_sigma,
    frequency_weights,
    hdaf_kernel,
    hermite_polynomial,
    mollifier_periodized,
    tail_bound_l2,
    tail_bound_linf,
)
from .frame import (
    FilterReconstruction,
    FrameOperator,
    admissibility_constant,
    assemble_omega,
    choose_n,
    choose_n_theoretical,
    filter_reconstruct,
    filter_reconstruct_point,
    inner_product_exp,
)
from .hybrid import (
    HybridConfig,
    HybridReconstruction,
    delta_objective,
    hybrid_reconstruct,
    optimize_delta,
)
from .piecewise import (
    PiecewiseFunction,
    SmoothPiece,
    builtin_f1,
    builtin_f2,
    builtin_function,
    distance_to_jump,
    distance_to_set,
    evaluate,
    jump_set,
    parse_expression,
    piecewise_from_expressions,
)
from .sampling import (
    FourierSamples,
    FrequencySet,
    QuadratureError,
    fourier_sample,
    fourier_samples,
    jittered_frequencies,
    log_frequencies,
    samples_from_csv,
    samples_to_csv,
    uniform_frequencies,
)

__version__ = "0.1.0"
