"""Exact divided powers on the fundamental ideal of the Witt ring.

Submodules:

* ``numkit`` - binomials, 2-local rationals, Bernoulli numbers, power series
* ``tangent`` - tangent numbers T(n, i)
* ``lambda_universal`` - exterior-power calculus of a generic ideal element
* ``fields`` - tower fields and square classes
* ``gw`` - Grothendieck-Witt / Witt rings, exterior powers, divided powers
* ``axioms`` - randomized axiom checks
* ``pfister`` - Pfister forms
* ``milnor`` - Milnor K-theory mod 2
* ``verify`` and ``cli`` - verification driver and command line
"""

from .fields import FieldTower, SquareClass, parse_class, parse_field
from .gw import (
    DiagonalForm,
    GWElement,
    WittClass,
    gamma,
    lift_witt_to_I,
    witt_canonicalize,
    witt_eval_2local,
)
from .lambda_universal import GammaCoeffTable, LambdaVector, gamma_table
from .tangent import TangentTable, build_table

__version__ = "0.1.0"

__all__ = [
    "DiagonalForm",
    "FieldTower",
    "GWElement",
    "GammaCoeffTable",
    "LambdaVector",
    "SquareClass",
    "TangentTable",
    "WittClass",
    "build_table",
    "gamma",
    "gamma_table",
    "lift_witt_to_I",
    "parse_class",
    "parse_field",
    "witt_canonicalize",
    "witt_eval_2local",
]
