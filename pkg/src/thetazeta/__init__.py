"""Numerics for lattice theta functions and Epstein zeta functions of
unit-area 2-d lattices: evaluation with error bounds, modular reduction,
local minimisation and grid sign certification of their x-derivatives."""

from ._numerics import (DEFAULT_TRUNCATION, DegenerateDenominator, InvalidDomain,
                        NotConverged, QuadratureNotConverged, ThetaZetaError,
                        ToleranceNotMet, Truncation, ValueWithError)
from .certify import (GridSpec, Region, SignCertificate, arc_restriction_check,
                      bound_suite, certify_claim, certify_sign, epsilon1, epsilon2,
                      lower_bound_neg_theta_xyy, lower_bound_theta_xy)
from .lattice import (HEXAGONAL, minimize, theta_direct, theta_expansion, theta_x,
                      theta_xy, theta_xyy, theta_y, zeta_direct, zeta_mellin,
                      zeta_mellin_partial, zeta_partial_termwise, zeta_x, zeta_xy,
                      zeta_xyy, zeta_y)
from .modular import apply_word, contains, reduce
from .series_bounds import (F, H, Q, AuxSeries, QuotientBoundCase, QuotientItem,
                            aux_series, bound_constants, f_positivity_suite,
                            quotient_bound_check)
from .theta1d import (Theta1dPoint, theta1d, theta1d_dX, theta1d_dXXY, theta1d_dXY,
                      theta1d_dY)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
