"""Frame correspondents for many-valued modal formulas, with verification.

The package computes, classifies and verifies first-order frame
correspondents for modal formulas interpreted over Kripke frames valued in
a finite Heyting algebra.  Everything a rewriting pipeline produces can be
cross-checked against brute-force finite-model oracles.
"""

from .alba import run_alba
from .heyting import HeytingAlgebra, builtin_algebra, load_algebra
from .oracle import correspondence_oracle
from .svb import svb_correspondent
from .syntax import parse_formula, parse_inequality

__all__ = [
    "HeytingAlgebra",
    "builtin_algebra",
    "correspondence_oracle",
    "load_algebra",
    "parse_formula",
    "parse_inequality",
    "run_alba",
    "svb_correspondent",
]

__version__ = "0.1.0"
