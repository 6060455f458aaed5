"""Exact symbolic geometry of the theta-deformed 4-sphere.

Generic ``q`` is a formal symbol, coefficients are Gaussian rationals, and
every identity is decided exactly.
"""
from ._kernel import BACKEND
from .algebra import (
    ABS_W2, ABS_Z2, ONE_EL, ONE_MINUS_T2, ONE_PLUS_T2, T, W, WS, X1, X2, X3, X4, X5, Z, ZS,
    AlgebraElement, CentralFactor, ChartPoint, MultiIndex, NotCentral, NotDivisible,
    basis_product, center_decompose, classical_eval, commutator, from_center, is_central,
    mul, star, try_divide_central,
)
from .connection import (
    ConnectionTable, NotInvertibleMetric, check_metric_compatibility, check_torsion_free,
    closed_form_connection, koszul_rhs, nabla_apply, projector_connection, solve_connection,
)
from .curvature import (
    ClosedFormMismatch, CurvatureTensor, GcbIntegrand, curvature_op, gcb_integrand,
    lowered_components, ricci_scalar,
)
from .derivations import Derivation, DerivationBasis, apply, apply_local, bracket, partial
from .geometry import (
    PROJECTOR, Ambient5, Metric, ModuleVec, NotInImage, Perturbation, Projector,
    UnsupportedDelta, ambient_h, ambient_to_basis, embed, metric_eval, phi_map,
    projector_apply,
)
from .localization import (
    DELTA, CentralDenominator, DeltaGradeMismatch, LocalElement, NotAUnit, invert, loc_add,
    loc_eq, loc_mul,
)
from .parsing import ParseError, parse, parse_algebra
from .scalars import GaussianRational, QScalar
from .trace import (
    AlphaBoundaryNonzero, ConvergenceFailure, DivergentIntegral, TraceValue,
    euler_characteristic, quadrature_oracle, tau, tau_delta, tau_delta_loc,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
