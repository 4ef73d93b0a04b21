"""Numerical bounds for the sharp point-evaluation constant of Paley-Wiener spaces."""

from .bounds import (BoundRecord, c0_lower, c0_lower_opt, c0_upper, c0_upper_opt, ceil_upper,
                     crude_upper, envelope_infinity, korevaar_upper, lower_from_test_function,
                     lower_g_alpha, lower_g_alpha_opt, lower_sweep_fp, pw4_upper, sweep)
from .convolve import AdmissibleDensity, bessel4_experiment, convolve_pair, n_fold
from .errors import (BracketError, ConstructionError, ContractError, ConvergenceError,
                     DomainError)
from .extremal import (ExtremalSearch, ZeroSequence, hb_upper_p1, kplus_bound, minimize_norm,
                       norm_p, orthogonality_residual, phi_eval, representation_check,
                       separation_certificate, separation_diagnostics)
from .prolate import c_for_lambda, lambda0

__version__ = "0.1.0"
