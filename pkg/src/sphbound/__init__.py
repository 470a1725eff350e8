"""Linear-programming bounds for spherical codes and kissing numbers."""

from .bounds import BoundResult, Grid, build_lp, cardinality_bound, make_grid, max_angle_bound
from .certify import Certificate, VerifyReport, builtin_certificates, parse, serialize, verify
from .codes import GramMatrix, SphericalCode, gram, random_code
from .funspace import BasisSpec, FAlpha, GBeta, Gegenbauer, MusinHat, basis_eval, f_alpha, g_beta, musin_hat
from .lpsolve import LinearProgram, LpSolution, Status, solve_max
from .polycore import ExactPolynomial, Interval, certify_nonpositive, gegenbauer_coeffs, gegenbauer_eval

__version__ = "0.1.0"
