"""
Exact heights on the weighted projective stack P(2,3,4) over ℚ and 𝔽_q(t).

Enumerates the points of bounded height, sends each one to an elliptic curve
with a marked point, classifies the order of that point and reports census
statistics on how rarely the marked point is torsion.
"""

from .curves import IDENTITY
from .curves import NONSINGULAR
from .curves import NONTORSION
from .curves import SINGULAR
from .curves import AffinePoint
from .curves import MarkedCurve
from .curves import NonTorsion
from .curves import Order
from .curves import Singular
from .curves import TorsionClass
from .curves import classify_triple
from .curves import discriminant
from .curves import ec_add
from .curves import ec_mul
from .curves import to_marked_curve
from .curves import torsion_order
from .enumerate import ALL_POINTS
from .enumerate import NO_POINTS
from .enumerate import DegreeBound
from .enumerate import HeightBound
from .enumerate import RationalBound
from .enumerate import SubstackPredicate
from .enumerate import count_points
from .enumerate import count_with_predicate
from .enumerate import enumerate_points
from .enumerate import naive_points
from .enumerate import parse_bound
from .enumerate import within_bound
from .errors import CensusInputError
from .errors import CensusInternalError
from .errors import ContractError
from .errors import HeightCensusError
from .fields import RATIONALS
from .fields import Archimedean
from .fields import DegreePlace
from .fields import FieldElem
from .fields import FiniteIrreducible
from .fields import FinitePrime
from .fields import GlobalFieldCtx
from .fields import Place
from .fields import abs_value_exact
from .fields import factor_integer
from .fields import support
from .fields import valuation
from .heights import Height12
from .heights import WeightedTriple
from .heights import equivalent
from .heights import height12
from .heights import is_minimal
from .heights import local_size_exp
from .heights import normalize
from .heights import scale
from .polynomials import Poly
from .polynomials import RationalFunction
from .stats import DensityRow
from .stats import ExperimentConfig
from .stats import equidistribution_report
from .stats import fit_growth_exponent
from .stats import run_census
from .stats import theorem1_report

__version__ = "0.1.0"

__all__ = [
    "ALL_POINTS",
    "IDENTITY",
    "NONSINGULAR",
    "NONTORSION",
    "NO_POINTS",
    "RATIONALS",
    "SINGULAR",
    "AffinePoint",
    "Archimedean",
    "CensusInputError",
    "CensusInternalError",
    "ContractError",
    "DegreeBound",
    "DegreePlace",
    "DensityRow",
    "ExperimentConfig",
    "FieldElem",
    "FiniteIrreducible",
    "FinitePrime",
    "GlobalFieldCtx",
    "Height12",
    "HeightBound",
    "HeightCensusError",
    "MarkedCurve",
    "NonTorsion",
    "Order",
    "Place",
    "Poly",
    "RationalBound",
    "RationalFunction",
    "Singular",
    "SubstackPredicate",
    "TorsionClass",
    "WeightedTriple",
    "__version__",
    "abs_value_exact",
    "classify_triple",
    "count_points",
    "count_with_predicate",
    "discriminant",
    "ec_add",
    "ec_mul",
    "enumerate_points",
    "equidistribution_report",
    "equivalent",
    "factor_integer",
    "fit_growth_exponent",
    "height12",
    "is_minimal",
    "local_size_exp",
    "naive_points",
    "normalize",
    "parse_bound",
    "run_census",
    "scale",
    "support",
    "theorem1_report",
    "to_marked_curve",
    "torsion_order",
    "valuation",
    "within_bound",
]
