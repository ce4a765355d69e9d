"""Exact computations for locally nilpotent derivations on affine surfaces."""

from .algebra import ChartPresentation, LaurentPoly, Monomial, evaluate, substitute
from .derivations import (
    Derivation,
    apply,
    bundle_lift,
    homogeneous_components,
    localize_lift,
    nilpotency_index,
    verify_regular,
)
from .divisors import CurveGraph, contract, fiber_solve, pairing, validate_fiber
from .errors import LndlabError
from .fixtures import check_automorphism, check_surface_relations, load_fixture
from .picard import (
    FibrationPresentation,
    PicardElement,
    intersection_counts,
    is_positive,
    pic_rank,
    standard_form,
)
from .semigroup import SemigroupPresentation, cone_rays, homogeneous_lnd_obstruction, membership
from .weights import Weight, induced_weights, leading_form, weight_of

__version__ = "0.1.0"
