"""Numerical laboratory for the discrete quadratic-phase Hilbert transform.

H^alpha f(n) = sum_{m != 0} e(alpha m^2) f(n - m) / m, its circle-method
multiplier decomposition, sparse bilinear forms, and weighted estimates.
"""
from .errors import NumericError, OQHError, ParameterError, ResourceError, StructuralError
from .signal import DiscreteInterval, Signal, Window, apply_halpha, inner_product, lr_average
from .torus import TorusPoint, parse_torus
from .numtheory import ArcParams, ReducedFraction, enumerate_level, find_alpha_s, gauss_sum
from .multiplier import MultiplierModel, eval_Ej, eval_Lj, eval_Ljs, eval_M_truncated, eval_Mj, eval_Uj
from .sparse import SparseCollection, SparseFormParams, build_universal_sparse, eval_sparse_form, verify_sparse
from .weights import Weight, a2_characteristic, rh_characteristic, weighted_norm_ratio

__version__ = "0.1.0"
