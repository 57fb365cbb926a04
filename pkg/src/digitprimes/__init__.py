"""Numerics for primes with restricted base-b digits: sieves, digit Fourier transforms, circle-method assembly and bound checks."""
from .constraints import DigitConstraint, Kind, digit_sum, digit_sums
from .errors import (
    ComputationError,
    ConstraintViolation,
    DigitPrimesError,
    HypothesisError,
    ResourceError,
    UnsupportedEstimatorError,
)
from .primes import PrimeTable, count_constrained_primes, load_or_sieve, sieve_primes
from .rational import Frequency, RationalApprox, dirichlet_approx, nearest_int_distance
from .fourier import fourier_eval, full_spectrum, naive_fourier_oracle, radix_fft
from .expsums import BoundFit, equidistribution_sum, fit_vinogradov_constants, lambda_hat, vinogradov_grid
from .bounds import ExponentSet, single_digit_inequalities, verify_hybrid, verify_l1, verify_large_sieve, verify_linf
from .circle import (
    ArcDecomposition,
    EstimateConfig,
    classify_arcs,
    digit_sum_character_decomposition,
    estimate_count,
    inversion_identity_check,
    kappa,
    major_arc_main_term,
    minor_arc_report,
)

__version__ = "0.1.0"
