#!/usr/bin/env python3
"""Classify the three worked inequalities and print their branch tables."""

import sys

from mvcorr.heyting import builtin_algebra
from mvcorr.syntax import Const, parse_formula, parse_inequality
from mvcorr.trees import branch_table, formula_inequality, is_inductive, is_sahlqvist

EXAMPLES = [
    "(p -> @0) -> []q <= <>[]q \\/ []p",
    "[](p \\/ q) <= <>(p /\\ q)",
    "[](@alpha /\\ p -> q) /\\ []p -> <>[]q",
]


def main() -> int:
    alg = builtin_algebra("paper-P")
    for text in EXAMPLES:
        if "<=" in text:
            ineq = parse_inequality(text, alg)
        else:
            ineq = formula_inequality(
                parse_formula(text, alg), Const(alg.element_name(alg.top), alg.top)
            )
        print(f"\n{text}")
        eps = is_sahlqvist(ineq)
        inductive = is_inductive(ineq)
        if eps is not None:
            print(f"  sahlqvist, order type {eps}")
        elif inductive is not None:
            omega, ieps = inductive
            print(f"  inductive, order type {ieps}, dependency {omega}")
        else:
            print("  not inductive")
        for n, leaf, quality in branch_table(ineq):
            print(f"    branch {n}: {leaf:12s} {quality}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
