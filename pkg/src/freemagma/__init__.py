"""Exact means on free magmas.

Interned terms, the Z / T(p) classification, exact convolution of finitely
supported means, substitution of means into terms, refutation certificates
and the idempotent-mean diagnostics.
"""

from .errors import (CapExceeded, FreeMagmaError, MeanError, PrefixExhausted,
                     TermSyntaxError, UnknownGenerator, VerificationError)
from .kernel import BACKEND
from .limits import Limits
from .measure import (LevelMean, Mean, convolve, from_entries, fubini_measure, measure_of,
                      point_mass, uniform_level)
from .sets import (Complement, FiniteSet, Gens, Intersection, Level, Product, SetExpr, T,
                   Union, Z, in_T, in_Z, member, parse_set)
from .substitution import check_sufficient, is_admissible, substitute
from .terms import GeneratorSet, Term, TermStore, count_level

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CapExceeded", "Complement", "FiniteSet", "FreeMagmaError", "GeneratorSet", "Gens",
    "Intersection", "Level", "LevelMean", "Limits", "Mean", "MeanError", "PrefixExhausted",
    "Product", "SetExpr", "T", "Term", "TermStore", "TermSyntaxError", "Union", "UnknownGenerator",
    "VerificationError", "Z", "check_sufficient", "convolve", "count_level", "from_entries",
    "fubini_measure", "in_T", "in_Z", "is_admissible", "measure_of", "member", "parse_set",
    "point_mass", "substitute", "uniform_level",
]
