"""Signed generation trees, branch analysis, and shape recognition.

A signed tree propagates + / - from the root, flipping through the left
child of an implication.  Each (sign, connective) pair is classified into
skeleton roles (delta adjoint, syntactically left residual) and inner
roles (syntactically right adjoint, syntactically right residual):

    +|  or: delta+srr   and: delta+sra   imp: srr   box: sra   dia: slr
    -|  or: delta+sra   and: delta+srr   imp: slr   box: slr   dia: sra

A branch is *good* when some cut splits it into a skeleton-only prefix
(from the root) followed by an inner-only suffix; the cut maximizing the
prefix is canonical.  A good branch is *excellent* when, at the canonical
cut, every suffix node after the first is a right adjoint; a right
residual may only open the suffix, and recognition then enforces the usual
side conditions at that node (no critical branch through the sibling
subtree, sibling variables preceding the branch variable).  This is the
reading on which the worked examples of the source material are
consistent; demanding right adjoints in the whole suffix would reject one
of them.

Recognition searches order types (and accumulates a dependency order,
checked acyclic) to decide the residual-friendly and residual-free
shapes; the classical shape test recognizes implications built from boxed
atoms and negative parts, composed under box/meet and variable-disjoint
joins.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from .syntax import (
    And,
    Box,
    Const,
    Dia,
    Formula,
    Implies,
    Inequality,
    Or,
    Var,
    children,
    in_base_language,
    polarity,
    prop_vars,
    POSITIVE,
    NEGATIVE,
    ABSENT,
)

DELTA, SLR, SRA, SRR = "delta", "slr", "sra", "srr"

NOT_GOOD, GOOD, EXCELLENT = "not-good", "good", "excellent"

ONE, PARTIAL = "1", "d"  # order-type marks; "d" renders as the dual mark

_ROLES = {
    (1, Or): frozenset({DELTA, SRR}),
    (1, And): frozenset({DELTA, SRA}),
    (-1, And): frozenset({DELTA, SRR}),
    (-1, Or): frozenset({DELTA, SRA}),
    (1, Dia): frozenset({SLR}),
    (-1, Box): frozenset({SLR}),
    (-1, Implies): frozenset({SLR}),
    (1, Box): frozenset({SRA}),
    (-1, Dia): frozenset({SRA}),
    (1, Implies): frozenset({SRR}),
}


@dataclass(frozen=True)
class SignedNode:
    formula: Formula
    sign: int
    kids: tuple["SignedNode", ...]
    roles: frozenset[str]

    @property
    def is_leaf(self) -> bool:
        return not self.kids

    def skeleton_capable(self) -> bool:
        return DELTA in self.roles or SLR in self.roles

    def inner_capable(self) -> bool:
        return SRA in self.roles or SRR in self.roles

    def label(self) -> str:
        sign = "+" if self.sign > 0 else "-"
        if self.is_leaf:
            return f"{sign}{self.formula}"
        names = {Or: "\\/", And: "/\\", Implies: "->", Box: "[]", Dia: "<>"}
        return f"{sign}{names[type(self.formula)]}"


def build_signed_tree(f: Formula, sign: int) -> SignedNode:
    """Sign-propagated tree with role classification; input must be the
    base language (no nominals, no co-implication, no inverse modalities)."""
    if not in_base_language(f):
        raise ValueError("signed trees are defined over the base language")
    if isinstance(f, (Var, Const)):
        return SignedNode(f, sign, (), frozenset())
    if isinstance(f, Implies):
        kids = (
            build_signed_tree(f.lhs, -sign),
            build_signed_tree(f.rhs, sign),
        )
    else:
        kids = tuple(build_signed_tree(c, sign) for c in children(f))
    return SignedNode(f, sign, kids, _ROLES[(sign, type(f))])


@dataclass(frozen=True)
class Branch:
    leaf: SignedNode
    path: tuple[SignedNode, ...]  # internal nodes, root first
    child_index: tuple[int, ...]  # which child the branch follows at each node


def branches(tree: SignedNode) -> list[Branch]:
    """Root-to-leaf branches, leaves ordered left to right."""
    out: list[Branch] = []

    def walk(node: SignedNode, path, choices) -> None:
        if node.is_leaf:
            out.append(Branch(node, tuple(path), tuple(choices)))
            return
        for i, kid in enumerate(node.kids):
            walk(kid, path + [node], choices + [i])

    walk(tree, [], [])
    return out


def canonical_cut(path: tuple[SignedNode, ...]) -> Optional[int]:
    """Largest skeleton-prefix cut splitting the path, if any."""
    for t in range(len(path), -1, -1):
        if all(n.skeleton_capable() for n in path[:t]) and all(
            n.inner_capable() for n in path[t:]
        ):
            return t
    return None


def branch_quality(branch: Branch) -> str:
    t = canonical_cut(branch.path)
    if t is None:
        return NOT_GOOD
    suffix = branch.path[t:]
    if all(SRA in n.roles for n in suffix[1:]):
        return EXCELLENT
    return GOOD


def leaf_is_critical(leaf: SignedNode, eps: dict[str, str]) -> bool:
    if not isinstance(leaf.formula, Var):
        return False
    mark = eps[leaf.formula.name]
    return (leaf.sign > 0 and mark == ONE) or (leaf.sign < 0 and mark == PARTIAL)


def _subtree_has_critical(node: SignedNode, eps: dict[str, str]) -> bool:
    if node.is_leaf:
        return leaf_is_critical(node, eps)
    return any(_subtree_has_critical(k, eps) for k in node.kids)


def _subtree_vars(node: SignedNode) -> set[str]:
    return prop_vars(node.formula)


@dataclass
class _BranchAnalysis:
    quality: str
    # per residual node on the inner suffix: (sibling subtree, branch variable)
    residuals: list[tuple[SignedNode, str]]


def _analyse_branch(branch: Branch) -> _BranchAnalysis:
    t = canonical_cut(branch.path)
    if t is None:
        return _BranchAnalysis(NOT_GOOD, [])
    quality = branch_quality(branch)
    residuals: list[tuple[SignedNode, str]] = []
    var = branch.leaf.formula.name if isinstance(branch.leaf.formula, Var) else ""
    for i in range(t, len(branch.path)):
        node = branch.path[i]
        if SRA in node.roles:
            continue
        sibling_index = 1 - branch.child_index[i]
        residuals.append((node.kids[sibling_index], var))
    return _BranchAnalysis(quality, residuals)


@dataclass(frozen=True)
class OrderType:
    marks: dict  # variable -> ONE | PARTIAL

    def __str__(self) -> str:
        def show(m):
            return "1" if m == ONE else "d"

        return ", ".join(f"{v}:{show(m)}" for v, m in sorted(self.marks.items()))


@dataclass(frozen=True)
class DependencyOrder:
    precedences: frozenset[tuple[str, str]]  # (earlier, later) pairs, closed

    def __str__(self) -> str:
        if not self.precedences:
            return "(empty)"
        return ", ".join(f"{a} < {b}" for a, b in sorted(self.precedences))


def _transitive_closure(pairs: set[tuple[str, str]]) -> set[tuple[str, str]]:
    closure = set(pairs)
    changed = True
    while changed:
        changed = False
        for a, b in list(closure):
            for c, d in list(closure):
                if b == c and (a, d) not in closure:
                    closure.add((a, d))
                    changed = True
    return closure


def _signed_trees(ineq: Inequality) -> tuple[SignedNode, SignedNode]:
    return build_signed_tree(ineq.lhs, 1), build_signed_tree(ineq.rhs, -1)


def _search_shape(ineq: Inequality, require_excellent: bool):
    """Shared search behind the residual-free and residual-friendly tests."""
    pos, neg = _signed_trees(ineq)
    all_branches = branches(pos) + branches(neg)
    variables = sorted(prop_vars(ineq.lhs) | prop_vars(ineq.rhs))
    analyses = {b: _analyse_branch(b) for b in all_branches}

    for combo in product((ONE, PARTIAL), repeat=len(variables)):
        eps = dict(zip(variables, combo))
        precedences: set[tuple[str, str]] = set()
        ok = True
        for b in all_branches:
            if not leaf_is_critical(b.leaf, eps):
                continue
            analysis = analyses[b]
            if analysis.quality == NOT_GOOD:
                ok = False
                break
            if require_excellent and analysis.quality != EXCELLENT:
                ok = False
                break
            for sibling, var in analysis.residuals:
                if _subtree_has_critical(sibling, eps):
                    ok = False
                    break
                for q in _subtree_vars(sibling):
                    precedences.add((q, var))
            if not ok:
                break
        if not ok:
            continue
        closure = _transitive_closure(precedences)
        if any(a == b for a, b in closure):
            continue
        return OrderType(eps), DependencyOrder(frozenset(closure))
    return None


def is_sahlqvist(ineq: Inequality) -> Optional[OrderType]:
    """An order type making every critical branch excellent, if one exists."""
    found = _search_shape(ineq, require_excellent=True)
    return found[0] if found else None


def is_inductive(ineq: Inequality) -> Optional[tuple[DependencyOrder, OrderType]]:
    """A dependency order and order type witnessing the residual-friendly
    shape, if any exist."""
    found = _search_shape(ineq, require_excellent=False)
    if found is None:
        return None
    eps, omega = found
    return omega, eps


def formula_inequality(f: Formula, alg_top: Const) -> Inequality:
    """A formula classifies through `top <= f`."""
    return Inequality(alg_top, f)


# -- classical shape ----------------------------------------------------------


@dataclass(frozen=True)
class SahlImplication:
    antecedent: Formula
    consequent: Formula


@dataclass(frozen=True)
class SahlBox:
    inner: "ClassicalDecomposition"


@dataclass(frozen=True)
class SahlAnd:
    lhs: "ClassicalDecomposition"
    rhs: "ClassicalDecomposition"


@dataclass(frozen=True)
class SahlOr:
    lhs: "ClassicalDecomposition"
    rhs: "ClassicalDecomposition"


ClassicalDecomposition = object  # union of the four shapes above


def _boxed_atom_depth(f: Formula) -> Optional[int]:
    depth = 0
    while isinstance(f, Box):
        depth += 1
        f = f.sub
    return depth if isinstance(f, Var) else None


def _only_classical_constants(f: Formula) -> bool:
    if isinstance(f, Const):
        return f.index in (0, 1)
    return all(_only_classical_constants(c) for c in children(f))


def _is_negative_formula(f: Formula) -> bool:
    vs = prop_vars(f)
    return all(polarity(f, v) == NEGATIVE for v in vs) if vs else False


def _is_positive_formula(f: Formula) -> bool:
    return all(polarity(f, v) in (POSITIVE, ABSENT) for v in prop_vars(f))


def is_sahl_antecedent(f: Formula, definite: bool = False) -> bool:
    """Built from bottom/top, boxed atoms and negative parts with and/or/dia
    (definite variant: and/dia only)."""
    if isinstance(f, Const):
        return f.index in (0, 1)
    if _boxed_atom_depth(f) is not None:
        return True
    if isinstance(f, And):
        return is_sahl_antecedent(f.lhs, definite) and is_sahl_antecedent(f.rhs, definite)
    if isinstance(f, Or) and not definite:
        return is_sahl_antecedent(f.lhs, definite) and is_sahl_antecedent(f.rhs, definite)
    if isinstance(f, Dia):
        return is_sahl_antecedent(f.sub, definite)
    return _is_negative_formula(f)


def is_classical_sahlqvist(f: Formula) -> Optional[ClassicalDecomposition]:
    """Decomposition through box/meet/variable-disjoint-join down to
    implications with recognized antecedents and positive consequents."""
    if not in_base_language(f) or not _only_classical_constants(f):
        return None
    if isinstance(f, Implies):
        if is_sahl_antecedent(f.lhs) and _is_positive_formula(f.rhs):
            return SahlImplication(f.lhs, f.rhs)
        return None
    if isinstance(f, Box):
        inner = is_classical_sahlqvist(f.sub)
        return SahlBox(inner) if inner is not None else None
    if isinstance(f, And):
        lhs, rhs = is_classical_sahlqvist(f.lhs), is_classical_sahlqvist(f.rhs)
        if lhs is not None and rhs is not None:
            return SahlAnd(lhs, rhs)
        return None
    if isinstance(f, Or):
        if prop_vars(f.lhs) & prop_vars(f.rhs):
            return None
        lhs, rhs = is_classical_sahlqvist(f.lhs), is_classical_sahlqvist(f.rhs)
        if lhs is not None and rhs is not None:
            return SahlOr(lhs, rhs)
        return None
    return None


# -- reporting -----------------------------------------------------------------


def branch_table(ineq: Inequality) -> list[tuple[int, str, str]]:
    """(number, leaf label, quality) rows, leaves numbered left to right
    across the positive then the negative tree."""
    pos, neg = _signed_trees(ineq)
    rows = []
    for i, b in enumerate(branches(pos) + branches(neg), start=1):
        rows.append((i, b.leaf.label(), branch_quality(b)))
    return rows
