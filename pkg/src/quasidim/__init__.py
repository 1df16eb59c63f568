"""Hausdorff dimension of quasi-circle Julia sets of z**2 + c via Bowen's equation."""

__version__ = "0.1.0"

from .bowen import (DimensionReport, beta_quadratic, large_c_bounds, ruelle_asymptotic,
                    solve_dimension)
from .boxdim import BoxCountEstimate, PointCloud, box_dimension, sample_julia
from .coding import (DyadicRational, DyadicWord, PreimagePoint, enumerate_leaves, phi_series,
                     q_exponent, r_log, u_phase, xi)
from .dynamics import (Parameter, Regime, apply, derivative_modulus, fixed_point_alpha,
                       inverse_branch)
from .errors import (BracketFailure, CriticalCollision, DegenerateFit, LogBranchViolation,
                     NoConvergence, NonMonotone, NoRealRoot, OutOfRange, QuasidimError,
                     RegimeError)
from .kernels import BACKEND
from .pressure import (PressureSample, birkhoff_logsum, delta_n, periodic_points,
                       pressure_periodic, pressure_ratio, pressure_raw)
