"""Correspondents for classical Sahlqvist formulas, independent of the
truth-value parameter.

The pipeline translates a definite implication, prenexes the existentials
out of the antecedent to reach the shape

    forall x1..xm ( REL  &  BOX-AT  ->  POS ),

reads off the minimal instantiation sigma(P(y)) as the disjunction of the
relational reach R^r(x_i, y) of the boxed atoms mentioning P, substitutes
it into the consequent, and emits  forall x1..xm (REL -> sigma(POS)).
Negative antecedent parts are curried into the consequent first, which
keeps every antecedent predicate occurrence inside BOX-AT and the
consequent monotone.  Compositions through box / meet / variable-disjoint
join recompose the emitted conditions with the matching first-order
context.

The function never reads an algebra or a truth value, so its output is
literally identical across truth-value spaces and parameters.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .budget import Budget
from .errors import NotClassicalSahlqvist
from .fol import (
    BOT,
    Eq,
    Exists,
    Fo,
    FoAnd,
    FoImplies,
    FoOr,
    Forall,
    FoVar,
    FreshVars,
    NomTV,
    Rel,
    Term,
    TruthConst,
    fo_eval,
    interp_for_frame,
    subst_pred,
    standard_translation,
)
from .semantics import Frame
from .syntax import And, Box, Const, Dia, Formula, Or, Var, prop_vars
from .trees import (
    SahlAnd,
    SahlBox,
    SahlImplication,
    SahlOr,
    is_classical_sahlqvist,
)


@dataclass
class DefiniteImplication:
    """Skeleton of one translated definite implication."""

    bound: list[FoVar]  # x1..xm, in introduction order
    rel: list[Fo]  # R(x_i, x_j) atoms and constant conjuncts
    boxed: list[tuple[str, Term, int]]  # (predicate, base variable, depth)
    negatives: list[Fo]  # translations of negative antecedent parts
    consequent: Fo


def _lift_disjunctions(f: Formula) -> list[Formula]:
    """Antecedent as a join of definite antecedents; negative parts and
    boxed atoms are atomic here."""
    if isinstance(f, Or) and is_boxed_free_decomposable(f):
        return _lift_disjunctions(f.lhs) + _lift_disjunctions(f.rhs)
    if isinstance(f, And):
        return [
            And(a, b)
            for a in _lift_disjunctions(f.lhs)
            for b in _lift_disjunctions(f.rhs)
        ]
    if isinstance(f, Dia):
        return [Dia(a) for a in _lift_disjunctions(f.sub)]
    return [f]


def is_boxed_free_decomposable(f: Formula) -> bool:
    # a disjunction that is itself a negative formula stays whole
    vs = prop_vars(f)
    if not vs:
        return True
    from .syntax import NEGATIVE, polarity

    return not all(polarity(f, v) == NEGATIVE for v in vs)


def _boxed_atom(f: Formula) -> Optional[tuple[str, int]]:
    depth = 0
    while isinstance(f, Box):
        depth += 1
        f = f.sub
    if isinstance(f, Var):
        return f.name, depth
    return None


def _negative(f: Formula) -> bool:
    from .syntax import NEGATIVE, polarity

    vs = prop_vars(f)
    return bool(vs) and all(polarity(f, v) == NEGATIVE for v in vs)


def _walk_definite(
    f: Formula,
    cur: Term,
    out: DefiniteImplication,
    ivars: FreshVars,
    st_fresh: FreshVars,
) -> None:
    boxed = _boxed_atom(f)
    if boxed is not None:
        name, depth = boxed
        out.boxed.append((name, cur, depth))
        return
    if isinstance(f, Const):
        out.rel.append(TruthConst(f.name, f.index))
        return
    if isinstance(f, And):
        _walk_definite(f.lhs, cur, out, ivars, st_fresh)
        _walk_definite(f.rhs, cur, out, ivars, st_fresh)
        return
    if isinstance(f, Dia):
        nxt = ivars.next()
        out.bound.append(nxt)
        out.rel.append(Rel(cur, nxt))
        _walk_definite(f.sub, nxt, out, ivars, st_fresh)
        return
    if _negative(f):
        out.negatives.append(standard_translation(f, cur, st_fresh))
        return
    raise NotClassicalSahlqvist(f"not a definite antecedent part: {f}")


def _reach(base: Term, depth: int, target: Term, fresh: FreshVars) -> Fo:
    """R^depth from base to target, expanded as an existential chain."""
    if depth == 0:
        return Eq(base, target)
    cur = base
    binders: list[FoVar] = []
    conj: list[Fo] = []
    for _ in range(depth):
        nxt = fresh.next()
        binders.append(nxt)
        conj.append(Rel(cur, nxt))
        cur = nxt
    conj.append(Eq(cur, target))
    body = conj[0]
    for c in conj[1:]:
        body = FoAnd(body, c)
    for b in reversed(binders):
        body = Exists(b, body)
    return body


def _emit_implication(
    shape: SahlImplication, cur: Term, ivars: FreshVars, st_fresh: FreshVars
) -> Fo:
    results: list[Fo] = []
    for delta in _lift_disjunctions(shape.antecedent):
        info = DefiniteImplication([], [], [], [], BOT)
        _walk_definite(delta, cur, info, ivars, st_fresh)
        pos = standard_translation(shape.consequent, cur, st_fresh)
        if info.negatives:
            negs = info.negatives[0]
            for n in info.negatives[1:]:
                negs = FoAnd(negs, n)
            pos = FoImplies(negs, pos)

        def make_sigma(pred: str) -> Callable[[Term], Fo]:
            units = [(base, depth) for name, base, depth in info.boxed if name == pred]

            def body(t: Term) -> Fo:
                if not units:
                    return BOT
                parts = [_reach(base, depth, t, st_fresh) for base, depth in units]
                out = parts[0]
                for p in parts[1:]:
                    out = FoOr(out, p)
                return out

            return body

        from .fol import free_pred_names

        for pred in sorted(free_pred_names(pos)):
            pos = subst_pred(pos, pred, make_sigma(pred))

        if info.rel:
            ant = info.rel[0]
            for r in info.rel[1:]:
                ant = FoAnd(ant, r)
            body: Fo = FoImplies(ant, pos)
        else:
            body = pos
        for v in reversed(info.bound):
            body = Forall(v, body)
        results.append(body)
    out = results[0]
    for r in results[1:]:
        out = FoAnd(out, r)
    return out


def _emit(shape, cur: Term, ivars: FreshVars, st_fresh: FreshVars) -> Fo:
    if isinstance(shape, SahlImplication):
        return _emit_implication(shape, cur, ivars, st_fresh)
    if isinstance(shape, SahlBox):
        y = st_fresh.next()
        return Forall(y, FoImplies(Rel(cur, y), _emit(shape.inner, y, ivars, st_fresh)))
    if isinstance(shape, SahlAnd):
        return FoAnd(
            _emit(shape.lhs, cur, ivars, st_fresh),
            _emit(shape.rhs, cur, ivars, st_fresh),
        )
    if isinstance(shape, SahlOr):
        return FoOr(
            _emit(shape.lhs, cur, ivars, st_fresh),
            _emit(shape.rhs, cur, ivars, st_fresh),
        )
    raise NotClassicalSahlqvist(f"unrecognized decomposition node {shape!r}")


def svb_correspondent(f: Formula) -> Fo:
    """Raw local correspondent of a classical Sahlqvist formula.

    Raises NotClassicalSahlqvist when the shape test rejects f.  The
    computation is purely syntactic: no algebra and no truth value enter.
    """
    shape = is_classical_sahlqvist(f)
    if shape is None:
        raise NotClassicalSahlqvist(str(f))
    return _emit(shape, FoVar("x"), FreshVars(prefix="x"), FreshVars(prefix="y"))


def to_definite_implications(f: Formula) -> list[DefiniteImplication]:
    """The translated definite implications underlying the correspondent."""
    shape = is_classical_sahlqvist(f)
    if shape is None:
        raise NotClassicalSahlqvist(str(f))
    out: list[DefiniteImplication] = []

    def collect(node, cur: Term, ivars: FreshVars, st_fresh: FreshVars) -> None:
        if isinstance(node, SahlImplication):
            for delta in _lift_disjunctions(node.antecedent):
                info = DefiniteImplication([], [], [], [], BOT)
                _walk_definite(delta, cur, info, ivars, st_fresh)
                info.consequent = standard_translation(node.consequent, cur, st_fresh)
                out.append(info)
            return
        if isinstance(node, SahlBox):
            collect(node.inner, st_fresh.next(), ivars, st_fresh)
            return
        collect(node.lhs, cur, ivars, st_fresh)
        collect(node.rhs, cur, ivars, st_fresh)

    collect(shape, FoVar("x"), FreshVars(prefix="x"), FreshVars(prefix="y"))
    return out


# -- decorated-substitution check ---------------------------------------------------


def check_c_elimination(
    frame: Frame,
    phi: Fo,
    pred: str,
    delta: Callable[[Term], Fo],
    rng: random.Random,
    trials: int = 20,
    other_preds: Iterable[str] = (),
    budget: Budget | None = None,
) -> Optional[str]:
    """Compare the decorated and plain substitutions conjoined with the
    decoration, over all join-irreducible decorations and sampled
    assignments.  Returns None on agreement, else a witness description.
    """
    alg = frame.algebra
    c = NomTV("c")
    plain = FoAnd(subst_pred(phi, pred, delta), c)
    decorated = FoAnd(subst_pred(phi, pred, delta, conjoin_tv=c), c)
    interp = interp_for_frame(frame)
    from .fol import free_individual_symbols

    free = sorted(free_individual_symbols(plain), key=str)
    for _ in range(trials):
        env: dict = {
            name: tuple(rng.randrange(alg.n) for _ in range(frame.size))
            for name in other_preds
        }
        for t in free:
            env[t] = rng.randrange(frame.size)
        for j in alg.join_irreducibles:
            env[c] = j
            lhs = fo_eval(interp, decorated, env, budget)
            rhs = fo_eval(interp, plain, env, budget)
            if lhs != rhs:
                return (
                    f"decorated {alg.element_name(lhs)} != plain "
                    f"{alg.element_name(rhs)} at decoration "
                    f"{alg.element_name(j)} under {env}"
                )
    return None
