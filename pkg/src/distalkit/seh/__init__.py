from .certificates import (
    Epsilon,
    HomogeneityCertificate,
    PredicateTable,
    Threshold,
    certificate_from_json,
    certify,
    verify,
)
from .combinators import (
    RefiningFinder,
    combine_continuous,
    refine_to_eps,
    rounds_needed,
    uniform_limit_finder,
)
from .ultrametric import (
    UltrametricCutter,
    UltrametricSpace,
    closed_ball_classes,
    make_space,
    space_from_json,
    space_to_json,
    ultrametric_partition,
)
from .valuation import PAdicAbs, extension_valuation, field_mul, norm, padic_space, vp

__all__ = [
    "Epsilon",
    "HomogeneityCertificate",
    "PAdicAbs",
    "PredicateTable",
    "RefiningFinder",
    "Threshold",
    "UltrametricCutter",
    "UltrametricSpace",
    "certificate_from_json",
    "certify",
    "closed_ball_classes",
    "combine_continuous",
    "extension_valuation",
    "field_mul",
    "make_space",
    "norm",
    "padic_space",
    "refine_to_eps",
    "rounds_needed",
    "space_from_json",
    "space_to_json",
    "ultrametric_partition",
    "uniform_limit_finder",
    "verify",
    "vp",
]
