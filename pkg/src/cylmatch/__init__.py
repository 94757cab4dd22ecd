"""Monotone cylindrical drawings of complete graphs: exact geometry,
validation, generators, and disjoint-edge matching algorithms."""

from .errors import (
    CylmatchError,
    DegenerateError,
    EventAtCutError,
    GenerationFailedError,
    InvalidDrawingError,
    InvariantError,
    NoSplitError,
    NotAFlagError,
    NotCircularError,
    NoValidCutError,
    ParamsRequiredError,
    ParseError,
    TooLargeError,
    UnrelatedVertexError,
    WrappingPairError,
)
from .geometry import (
    Drawing,
    EdgeCurve,
    Rational,
    Relation,
    Vertex,
    crossing_count,
    crossings,
    cut_height,
    eval_at,
    is_flag,
    new_drawing,
    point_relation,
    recut,
    relation,
    simplest_between,
    split_circular,
)

__version__ = "0.1.0"

__all__ = [
    "CylmatchError",
    "DegenerateError",
    "Drawing",
    "EdgeCurve",
    "EventAtCutError",
    "GenerationFailedError",
    "InvalidDrawingError",
    "InvariantError",
    "NoSplitError",
    "NotAFlagError",
    "NotCircularError",
    "NoValidCutError",
    "ParamsRequiredError",
    "ParseError",
    "Rational",
    "Relation",
    "TooLargeError",
    "UnrelatedVertexError",
    "Vertex",
    "WrappingPairError",
    "crossing_count",
    "crossings",
    "cut_height",
    "eval_at",
    "is_flag",
    "new_drawing",
    "point_relation",
    "recut",
    "relation",
    "simplest_between",
    "split_circular",
    "__version__",
]
