"""Exact computations in Coxeter groups, thin twin buildings and the twin tree of SL_2."""

__version__ = "0.1.0"

from .coxeter import CoxeterMatrix, Element, reduce  # noqa: E402,F401
from .errors import PreconditionError, TwinBuildError  # noqa: E402,F401
