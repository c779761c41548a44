"""Diversities on R^k: evaluation, property checks, measure/kernel conversion
and negative-type decisions for finite diversity tables."""

from .checkers import CheckConfig, CheckReport, run_suite
from .errors import (
    CapExceededError,
    DimensionMismatchError,
    DiversityError,
    DomainError,
    InsufficientDirectionsError,
    NotExtremalError,
    PreconditionError,
    SpecParseError,
    UnboundedSliceError,
)
from .finite import DiversityTable, linear_embeddable, negative_type, restrict
from .geometry import PointSet, minkowski_sum, support, width
from .lp import LPOutcome, LPProblem, solve
from .measures import (
    DiscreteSphericalMeasure,
    HPolytope,
    SimplexKernelSpec,
    kernel_from_measure,
    l1_measure,
    measure_from_simplex_kernel,
)
from .numerics import SphereSampler, jacobi_eigenvalues
from .variants import (
    L1,
    Circumradius,
    Diameter,
    DiscreteLinear,
    Diversity,
    MaxOf,
    MeanWidth,
    MeanWidthP,
    Minkowski,
    SimplexClosedForm,
    WeightedSum,
    Zonotope,
    spec_from_dict,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
