"""Twisted sums of modular symbols on Gamma0(N), N prime.

Numerical machinery for Dirichlet characters of prime conductor, weight-2
newform data, modular symbols, Eisenstein series twisted by characters and
symbols, and the closed-form evaluators that predict their Fourier
coefficients and partial-sum growth.  Every closed form is paired with an
independent brute-force oracle; the acceptance suite compares the two.
"""

__version__ = "0.1.0"

from .characters import DirichletCharacter, make_character, gauss_sum, twisted_divisor_sum
from .cuspforms import CuspForm, curve_registry
from .symbols import GroupElement, modular_symbol, coset_enum, double_coset_enum

__all__ = [
    "DirichletCharacter",
    "make_character",
    "gauss_sum",
    "twisted_divisor_sum",
    "CuspForm",
    "curve_registry",
    "GroupElement",
    "modular_symbol",
    "coset_enum",
    "double_coset_enum",
    "__version__",
]
