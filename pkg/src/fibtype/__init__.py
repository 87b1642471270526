"""Exact Fibonacci-type matrix sequences and the uniform exponents of their limit points."""

__version__ = "0.1.0"

from .linalg import Mat2, J, wedge, scalar, det3, norm, proj_dist
from .symmetrizer import SeedPair, solve_n, is_admissible, NotInV, NotInU
from .sequence import FibSequence, verify_prop3, verify_cor4, verify_growth
from .families import FamilyParams, CorollaryParams, corollary_params, target_interval, example1_seed
from .xi import BigReal, xi_approx, y_vector, residuals, PrecisionError, DegenerateSequence
from .exponents import (omega_bruteforce, lambda_bruteforce, omega_records, lambda_records,
                        uniform_slope, candidate_slopes, jarnik_check, density_sweep)
