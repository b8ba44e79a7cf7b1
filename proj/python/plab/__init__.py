"""Degenerate p-Laplace solver and regularity diagnostics.

Solves -div(w(X)|Du|^{p-2} Du) = f on the unit ball by discrete energy
minimization and measures the function-space quantities the solutions live
in: weak Lebesgue norms, BMO seminorms, John-Nirenberg moments, and fitted
Holder exponents from dyadic oscillation decay.
"""

from plab._core import *  # noqa: F401,F403
from plab._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
