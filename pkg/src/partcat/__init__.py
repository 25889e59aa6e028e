"""Exact calculus for categories of partitions."""

from .errors import PartcatError
from .partition import (
    BLACK,
    EXTRA,
    LINE,
    WHITE,
    Color,
    Partition,
    compose,
    generator,
    involute,
    make_partition,
    parse,
    rotate,
    serialize,
    tensor,
)
from .scalar import Scalar

__version__ = "0.1.0"

__all__ = [
    "BLACK",
    "EXTRA",
    "LINE",
    "WHITE",
    "Color",
    "Partition",
    "PartcatError",
    "Scalar",
    "compose",
    "generator",
    "involute",
    "make_partition",
    "parse",
    "rotate",
    "serialize",
    "tensor",
]
