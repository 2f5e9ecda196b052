"""Exact Néron desingularization for algebras over ``k[x]_(x)`` and Artinian bases."""

from .errors import (
    ApproxTooCoarse,
    BoundTooSmall,
    InputError,
    NeronError,
    NoSystemError,
    NotArtinian,
    NotWellChosen,
    RelationViolated,
)
from .polycore import DEGREVLEX, LEX, INFINITY, MonomialOrder, Polynomial, PolyRing, block_order
from .series import AtLeast, PrecisionError, TruncatedSeries, EXP, FACT

__version__ = "0.1.0"
