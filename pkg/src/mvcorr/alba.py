"""Rewriting engine computing parametrized first-order frame correspondents.

Given an inequality `lhs <= rhs` (or a formula, read as `top <= f`, with a
top-level implication read as its inequality) and an algebra element `a`,
the engine works on `lhs & @a <= rhs`:

1. preprocessing distributes joins on the left / meets on the right as far
   as possible, splits, and closes variables occurring with uniform
   polarity;
2. each resulting inequality is approximated into a system
   `{i0 <= core, i0 <= @a, rhs <= m0}` with reserved atoms i0 / m0; the
   pinned `i0 <= @a` is carried through untouched;
3. splitting, variable-eliminating substitution (both Ackermann
   directions), approximation (fresh nominals/co-nominals) and residuation
   steps are applied until no propositional variable remains.

The rule strategy is a deterministic priority (cleanup, splitting,
elimination, approximation, residuation), falling back to depth-first
backtracking over untried rule applications when the preferred path gets
stuck; every applied step is recorded in a trace for independent
verification.  On success the variable-free systems are translated into a
quasi-inequality and, through the standard translation, into the local
first-order correspondent (the reserved `c_i0` becomes the free variable).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import StepCapExceeded
from .fol import (
    CoNomConst,
    CoNomTV,
    Eq,
    Exists,
    Fo,
    FoAnd,
    FoImplies,
    FoOr,
    Forall,
    ForallTV,
    FoVar,
    NomConst,
    NomTV,
    Preceq,
    Rel,
    TruthConst,
    FreshVars,
    print_fo,
    simplify_display,
    standard_translation,
    subst_term,
)
from .heyting import HeytingAlgebra
from .syntax import (
    ABSENT,
    And,
    Box,
    BoxInv,
    CoNom,
    Const,
    Dia,
    DiaInv,
    Formula,
    Implies,
    Inequality,
    Minus,
    NEGATIVE,
    Nom,
    Or,
    POSITIVE,
    QuasiInequality,
    Var,
    atoms,
    children,
    is_pure,
    polarity,
    prop_vars,
    rebuild,
    substitute,
)

RESERVED_NOM = "i0"
RESERVED_CONOM = "m0"

System = tuple[Inequality, ...]


@dataclass(frozen=True)
class TraceStep:
    phase: str  # preprocess | first-approx | reduce
    rule: str
    branch: int  # -1 during preprocessing
    before: System  # the inequalities the rule consumed
    after: System  # the inequalities it produced
    eliminated: tuple[str, ...] = ()  # closed propositional variables
    introduced: tuple[Formula, ...] = ()  # fresh nominal/co-nominal atoms

    def describe(self) -> str:
        b = "; ".join(str(i) for i in self.before) or "(nothing)"
        a = "; ".join(str(i) for i in self.after) or "(nothing)"
        return f"[{self.phase}] {self.rule}: {b}  ==>  {a}"


@dataclass
class AlbaBranch:
    index: int
    initial: Inequality  # the preprocessed member, shape core & @a <= rhs
    success: bool
    system: System  # reduced system on success, stuck system otherwise
    steps: list[TraceStep]


@dataclass
class AlbaResult:
    status: str  # success | failure | step-cap
    algebra: HeytingAlgebra
    value: int
    source: Inequality  # lhs <= rhs before the @a conjunct is added
    pre: list[Inequality]
    pre_steps: list[TraceStep]
    branches: list[AlbaBranch]
    quasi: list[QuasiInequality] = field(default_factory=list)
    correspondent: Optional[Fo] = None
    correspondent_global: Optional[Fo] = None
    display: str = ""

    @property
    def succeeded(self) -> bool:
        return self.status == "success"

    def all_steps(self) -> list[TraceStep]:
        out = list(self.pre_steps)
        for branch in self.branches:
            out.extend(branch.steps)
        return out


# -- input shaping -----------------------------------------------------------


def input_inequality(target: Formula | Inequality, alg: HeytingAlgebra) -> Inequality:
    """Formulas become `top <= f`; a top-level implication becomes its
    inequality (both readings have the same parametrized truth)."""
    if isinstance(target, Inequality):
        return target
    if isinstance(target, Implies):
        return Inequality(target.lhs, target.rhs)
    return Inequality(Const(alg.element_name(alg.top), alg.top), target)


# -- phase 1: preprocessing ----------------------------------------------------


def _distribute_left(f: Formula) -> Optional[tuple[str, Formula]]:
    """One step of bubbling joins up through the left-hand side."""
    if isinstance(f, Dia) and isinstance(f.sub, Or):
        return "distribute-dia-or", Or(Dia(f.sub.lhs), Dia(f.sub.rhs))
    if isinstance(f, And) and isinstance(f.rhs, Or):
        g, a, b = f.lhs, f.rhs.lhs, f.rhs.rhs
        return "distribute-and-or", Or(And(g, a), And(g, b))
    if isinstance(f, And) and isinstance(f.lhs, Or):
        a, b, g = f.lhs.lhs, f.lhs.rhs, f.rhs
        return "distribute-and-or", Or(And(a, g), And(b, g))
    for i, c in enumerate(children(f)):
        found = _distribute_left(c)
        if found:
            rule, new = found
            subs = list(children(f))
            subs[i] = new
            return rule, rebuild(f, tuple(subs))
    return None


def _distribute_right(f: Formula) -> Optional[tuple[str, Formula]]:
    """One step of bubbling meets up through the right-hand side."""
    if isinstance(f, Box) and isinstance(f.sub, And):
        return "distribute-box-and", And(Box(f.sub.lhs), Box(f.sub.rhs))
    if isinstance(f, Or) and isinstance(f.rhs, And):
        g, a, b = f.lhs, f.rhs.lhs, f.rhs.rhs
        return "distribute-or-and", And(Or(g, a), Or(g, b))
    if isinstance(f, Or) and isinstance(f.lhs, And):
        a, b, g = f.lhs.lhs, f.lhs.rhs, f.rhs
        return "distribute-or-and", And(Or(a, g), Or(b, g))
    if isinstance(f, Implies) and isinstance(f.lhs, Or):
        a, b, g = f.lhs.lhs, f.lhs.rhs, f.rhs
        return "distribute-imp-or", And(Implies(a, g), Implies(b, g))
    if isinstance(f, Implies) and isinstance(f.rhs, And):
        g, a, b = f.lhs, f.rhs.lhs, f.rhs.rhs
        return "distribute-imp-and", And(Implies(g, a), Implies(g, b))
    for i, c in enumerate(children(f)):
        found = _distribute_right(c)
        if found:
            rule, new = found
            subs = list(children(f))
            subs[i] = new
            return rule, rebuild(f, tuple(subs))
    return None


def preprocess(
    start: Inequality, alg: HeytingAlgebra, trace: list[TraceStep]
) -> list[Inequality]:
    """Exhaustive distribution, splitting and uniform-variable closure."""
    work = [start]
    done: list[Inequality] = []
    while work:
        ineq = work.pop(0)
        # distribution to fixpoint, left side then right side
        changed = True
        while changed:
            changed = False
            found = _distribute_left(ineq.lhs)
            if found:
                rule, new_lhs = found
                new = Inequality(new_lhs, ineq.rhs)
                trace.append(TraceStep("preprocess", rule, -1, (ineq,), (new,)))
                ineq, changed = new, True
                continue
            found = _distribute_right(ineq.rhs)
            if found:
                rule, new_rhs = found
                new = Inequality(ineq.lhs, new_rhs)
                trace.append(TraceStep("preprocess", rule, -1, (ineq,), (new,)))
                ineq, changed = new, True
        # splitting
        if isinstance(ineq.lhs, Or):
            parts = (
                Inequality(ineq.lhs.lhs, ineq.rhs),
                Inequality(ineq.lhs.rhs, ineq.rhs),
            )
            trace.append(TraceStep("preprocess", "split-join", -1, (ineq,), parts))
            work = list(parts) + work
            continue
        if isinstance(ineq.rhs, And):
            parts = (
                Inequality(ineq.lhs, ineq.rhs.lhs),
                Inequality(ineq.lhs, ineq.rhs.rhs),
            )
            trace.append(TraceStep("preprocess", "split-meet", -1, (ineq,), parts))
            work = list(parts) + work
            continue
        # uniform-polarity closure, once per settled inequality
        closed = _close_uniform_variables(ineq, alg, trace)
        if closed is not ineq:
            work.insert(0, closed)
            continue
        done.append(ineq)
    return done


def _close_uniform_variables(
    ineq: Inequality, alg: HeytingAlgebra, trace: list[TraceStep]
) -> Inequality:
    for var in sorted(prop_vars(ineq.lhs) | prop_vars(ineq.rhs)):
        sign = polarity(Implies(ineq.lhs, ineq.rhs), var)
        if sign == POSITIVE:
            value = Const(alg.element_name(alg.bot), alg.bot)
        elif sign == NEGATIVE:
            value = Const(alg.element_name(alg.top), alg.top)
        else:
            continue
        new = Inequality(
            substitute(ineq.lhs, var, value), substitute(ineq.rhs, var, value)
        )
        trace.append(
            TraceStep(
                "preprocess",
                "close-uniform-variable",
                -1,
                (ineq,),
                (new,),
                eliminated=(var,),
            )
        )
        return new
    return ineq


# -- phase 1b: first approximation ----------------------------------------------


def first_approximation(
    member: Inequality, a: int, alg: HeytingAlgebra, branch: int,
    trace: list[TraceStep],
) -> System:
    """`core & @a <= rhs` becomes `{i0 <= core, i0 <= @a, rhs <= m0}`."""
    a_const = Const(alg.element_name(a), a)
    assert isinstance(member.lhs, And) and member.lhs.rhs == a_const, (
        "preprocessing must keep the @a conjunct outermost"
    )
    core = member.lhs.lhs
    system = (
        Inequality(Nom(RESERVED_NOM), core),
        Inequality(Nom(RESERVED_NOM), a_const),
        Inequality(member.rhs, CoNom(RESERVED_CONOM)),
    )
    trace.append(
        TraceStep(
            "first-approx",
            "first-approximation",
            branch,
            (member,),
            system,
            introduced=(Nom(RESERVED_NOM), CoNom(RESERVED_CONOM)),
        )
    )
    return system


# -- phase 2: reduction ----------------------------------------------------------


@dataclass(frozen=True)
class _Move:
    rule: str
    system: System
    before: System
    after: System
    eliminated: tuple[str, ...] = ()
    introduced: tuple[Formula, ...] = ()
    fresh: tuple[int, int] = (0, 0)  # updated (nominal, co-nominal) counters


def _pinned(system: System, a_const: Const) -> Inequality:
    return Inequality(Nom(RESERVED_NOM), a_const)


def _replace(system: System, index: int, new: tuple[Inequality, ...]) -> System:
    return system[:index] + new + system[index + 1:]


def _trivially_true(ineq: Inequality) -> bool:
    if ineq.lhs == ineq.rhs:
        return True
    if isinstance(ineq.rhs, Const) and ineq.rhs.index == 1:
        return True
    if isinstance(ineq.lhs, Const) and ineq.lhs.index == 0:
        return True
    return False


def _moves(system: System, pinned: Inequality, jn: tuple[int, int],
           alg: HeytingAlgebra) -> Iterator[_Move]:
    """Applicable rule applications in strategy priority order."""
    free = [i for i, ineq in enumerate(system) if ineq != pinned]

    # 0: cleanup (discard duplicate or trivially true inequalities)
    seen: set[Inequality] = set()
    for i, ineq in enumerate(system):
        if ineq == pinned:
            seen.add(ineq)
            continue
        if ineq in seen or _trivially_true(ineq):
            rule = "discard-duplicate" if ineq in seen else "discard-true"
            yield _Move(rule, _replace(system, i, ()), (ineq,), (), fresh=jn)
            return  # cleanup is confluent; apply eagerly one at a time
        seen.add(ineq)

    # 1: splitting
    for i in free:
        ineq = system[i]
        if isinstance(ineq.rhs, And):
            parts = (
                Inequality(ineq.lhs, ineq.rhs.lhs),
                Inequality(ineq.lhs, ineq.rhs.rhs),
            )
            yield _Move("split-meet", _replace(system, i, parts), (ineq,), parts, fresh=jn)
        if isinstance(ineq.lhs, Or):
            parts = (
                Inequality(ineq.lhs.lhs, ineq.rhs),
                Inequality(ineq.lhs.rhs, ineq.rhs),
            )
            yield _Move("split-join", _replace(system, i, parts), (ineq,), parts, fresh=jn)

    # 2: variable elimination
    yield from _ackermann_moves(system, pinned, jn, alg)

    # 3: approximation
    yield from _approximation_moves(system, pinned, jn)

    # 4: residuation toward displayed variables
    yield from _residuation_moves(system, pinned, jn)


def _ackermann_moves(system: System, pinned: Inequality, jn,
                     alg: HeytingAlgebra) -> Iterator[_Move]:
    variables = sorted({v for ineq in system for v in prop_vars(ineq.lhs) | prop_vars(ineq.rhs)})
    for var in variables:
        for direction in ("right", "left"):
            move = _try_ackermann(system, pinned, var, direction, jn, alg)
            if move is not None:
                yield move


def _try_ackermann(
    system: System, pinned: Inequality, var: str, direction: str, jn,
    alg: HeytingAlgebra,
) -> Optional[_Move]:
    v = Var(var)
    bounds: list[Inequality] = []
    others: list[tuple[int, Inequality]] = []
    for i, ineq in enumerate(system):
        if var not in prop_vars(ineq.lhs) | prop_vars(ineq.rhs):
            continue
        if direction == "right" and ineq.rhs == v and var not in prop_vars(ineq.lhs):
            bounds.append(ineq)
            continue
        if direction == "left" and ineq.lhs == v and var not in prop_vars(ineq.rhs):
            bounds.append(ineq)
            continue
        others.append((i, ineq))
    if not bounds and not others:
        return None
    want_lhs = (POSITIVE, ABSENT) if direction == "right" else (NEGATIVE, ABSENT)
    want_rhs = (NEGATIVE, ABSENT) if direction == "right" else (POSITIVE, ABSENT)
    for _, ineq in others:
        if polarity(ineq.lhs, var) not in want_lhs:
            return None
        if polarity(ineq.rhs, var) not in want_rhs:
            return None
    if direction == "right":
        empty = Const(alg.element_name(alg.bot), alg.bot)
        replacement = _fold(Or, [b.lhs for b in bounds], empty)
    else:
        empty = Const(alg.element_name(alg.top), alg.top)
        replacement = _fold(And, [b.rhs for b in bounds], empty)
    out: list[Inequality] = []
    changed: list[Inequality] = []
    for ineq in system:
        if ineq in bounds:
            continue
        if any(ineq == o for _, o in others):
            new = Inequality(
                substitute(ineq.lhs, var, replacement),
                substitute(ineq.rhs, var, replacement),
            )
            out.append(new)
            changed.append(new)
        else:
            out.append(ineq)
    rule = f"ackermann-{direction}"
    return _Move(
        rule,
        tuple(out),
        tuple(bounds) + tuple(o for _, o in others),
        tuple(changed),
        eliminated=(var,),
        fresh=jn,
    )


def _fold(op, parts: list[Formula], empty: Formula) -> Formula:
    if not parts:
        return empty
    out = parts[0]
    for p in parts[1:]:
        out = op(out, p)
    return out


def _approximation_moves(system: System, pinned: Inequality, jn) -> Iterator[_Move]:
    j_count, n_count = jn
    for i, ineq in enumerate(system):
        if ineq == pinned:
            continue
        lhs, rhs = ineq.lhs, ineq.rhs
        if isinstance(lhs, Nom) and isinstance(rhs, Dia) and not is_pure(rhs.sub):
            j = Nom(f"j{j_count + 1}")
            parts = (Inequality(j, rhs.sub), Inequality(lhs, Dia(j)))
            yield _Move(
                "approx-dia",
                _replace(system, i, parts),
                (ineq,),
                parts,
                introduced=(j,),
                fresh=(j_count + 1, n_count),
            )
        if isinstance(rhs, CoNom) and isinstance(lhs, Box) and not is_pure(lhs.sub):
            n = CoNom(f"n{n_count + 1}")
            parts = (Inequality(lhs.sub, n), Inequality(Box(n), rhs))
            yield _Move(
                "approx-box",
                _replace(system, i, parts),
                (ineq,),
                parts,
                introduced=(n,),
                fresh=(j_count, n_count + 1),
            )
        if isinstance(rhs, CoNom) and isinstance(lhs, Implies):
            if not is_pure(lhs.lhs):
                j = Nom(f"j{j_count + 1}")
                parts = (
                    Inequality(j, lhs.lhs),
                    Inequality(Implies(j, lhs.rhs), rhs),
                )
                yield _Move(
                    "approx-imp-left",
                    _replace(system, i, parts),
                    (ineq,),
                    parts,
                    introduced=(j,),
                    fresh=(j_count + 1, n_count),
                )
            if not is_pure(lhs.rhs):
                n = CoNom(f"n{n_count + 1}")
                parts = (
                    Inequality(lhs.rhs, n),
                    Inequality(Implies(lhs.lhs, n), rhs),
                )
                yield _Move(
                    "approx-imp-right",
                    _replace(system, i, parts),
                    (ineq,),
                    parts,
                    introduced=(n,),
                    fresh=(j_count, n_count + 1),
                )


def _residuation_moves(system: System, pinned: Inequality, jn) -> Iterator[_Move]:
    for i, ineq in enumerate(system):
        if ineq == pinned:
            continue
        lhs, rhs = ineq.lhs, ineq.rhs
        # box on the right: adjoint moves the inverse diamond left
        if isinstance(rhs, Box) and not is_pure(rhs.sub):
            new = Inequality(DiaInv(lhs), rhs.sub)
            yield _Move("residuate-box", _replace(system, i, (new,)), (ineq,), (new,), fresh=jn)
        # diamond on the left: adjoint moves the inverse box right
        if isinstance(lhs, Dia) and not is_pure(lhs.sub):
            new = Inequality(lhs.sub, BoxInv(rhs))
            yield _Move("residuate-dia", _replace(system, i, (new,)), (ineq,), (new,), fresh=jn)
        # implication on the right: uncurry
        if isinstance(rhs, Implies) and not is_pure(rhs):
            new = Inequality(And(lhs, rhs.lhs), rhs.rhs)
            yield _Move(
                "residuate-imp", _replace(system, i, (new,)), (ineq,), (new,), fresh=jn
            )
        # conjunction on the left: move the variable-free (or chosen)
        # conjunct across as an implication
        if isinstance(lhs, And):
            options = []
            keep_l = not is_pure(lhs.lhs)
            keep_r = not is_pure(lhs.rhs)
            if keep_l or keep_r:
                if keep_l:
                    options.append(Inequality(lhs.lhs, Implies(lhs.rhs, rhs)))
                if keep_r:
                    options.append(Inequality(lhs.rhs, Implies(lhs.lhs, rhs)))
            for new in options:
                yield _Move(
                    "residuate-and",
                    _replace(system, i, (new,)),
                    (ineq,),
                    (new,),
                    fresh=jn,
                )
        # disjunction on the right: move a disjunct across as a difference
        if isinstance(rhs, Or):
            options = []
            if not is_pure(rhs.rhs):
                options.append(Inequality(Minus(lhs, rhs.lhs), rhs.rhs))
            if not is_pure(rhs.lhs):
                options.append(Inequality(Minus(lhs, rhs.rhs), rhs.lhs))
            for new in options:
                yield _Move(
                    "co-residuate-or",
                    _replace(system, i, (new,)),
                    (ineq,),
                    (new,),
                    fresh=jn,
                )


def _system_vars(system: System) -> set[str]:
    out: set[str] = set()
    for ineq in system:
        out |= prop_vars(ineq.lhs) | prop_vars(ineq.rhs)
    return out


def _canonical_key(system: System) -> tuple:
    # multiset key: a duplicate-discarding move must change the key
    return tuple(sorted(str(i) for i in system))


def reduce_system(
    system: System,
    pinned: Inequality,
    branch: int,
    alg: HeytingAlgebra,
    step_cap: int = 10_000,
) -> tuple[bool, System, list[TraceStep]]:
    """Depth-first search over rule applications; the preferred strategy is
    the first path explored.  Raises StepCapExceeded when the cap is hit."""
    visited: set[tuple] = set()
    stuck: list[System] = []
    steps_taken = 0

    def cleanup_tail(current: System) -> list[tuple[_Move, System]]:
        out: list[tuple[_Move, System]] = []
        while True:
            move = next(
                (m for m in _moves(current, pinned, (0, 0), alg)
                 if m.rule.startswith("discard-")),
                None,
            )
            if move is None:
                return out
            out.append((move, current))
            current = move.system

    def dfs(current: System, jn: tuple[int, int]) -> Optional[list[tuple[_Move, System]]]:
        nonlocal steps_taken
        if not _system_vars(current):
            return cleanup_tail(current)
        key = _canonical_key(current)
        if key in visited:
            return None
        visited.add(key)
        had_move = False
        for move in _moves(current, pinned, jn, alg):
            steps_taken += 1
            if steps_taken > step_cap:
                raise StepCapExceeded(
                    f"reduction exceeded the {step_cap}-step cap"
                )
            had_move = True
            tail = dfs(move.system, move.fresh)
            if tail is not None:
                return [(move, current)] + tail
        if not had_move:
            stuck.append(current)
        return None

    path = dfs(system, (0, 0))
    if path is None:
        final = stuck[0] if stuck else system
        return False, final, []
    steps = [
        TraceStep(
            "reduce",
            move.rule,
            branch,
            move.before,
            move.after,
            eliminated=move.eliminated,
            introduced=move.introduced,
        )
        for move, _ in path
    ]
    final = path[-1][0].system if path else system
    return True, final, steps


# -- phase 3: translation and output -----------------------------------------------


def branch_quasi(system: System) -> QuasiInequality:
    conclusion = Inequality(Nom(RESERVED_NOM), CoNom(RESERVED_CONOM))
    return QuasiInequality(tuple(system), conclusion)


def _fresh_symbols(system: System) -> tuple[list[str], list[str]]:
    noms: list[str] = []
    conoms: list[str] = []
    for ineq in system:
        for atom in sorted(atoms(ineq.lhs) | atoms(ineq.rhs), key=str):
            if isinstance(atom, Nom) and atom.name != RESERVED_NOM:
                if atom.name not in noms:
                    noms.append(atom.name)
            if isinstance(atom, CoNom) and atom.name != RESERVED_CONOM:
                if atom.name not in conoms:
                    conoms.append(atom.name)
    return noms, conoms


def branch_correspondent(system: System, free_var: FoVar = FoVar("x")) -> Fo:
    """First-order form of `system => i0 <= m0` with `c_i0` freed to x."""
    fresh = FreshVars()
    u, v = FoVar("x1"), FoVar("x2")
    premise_parts = [standard_translation(ineq, u, fresh) for ineq in system]
    premise = Forall(u, _fo_fold(premise_parts))
    conclusion = Forall(
        v,
        standard_translation(
            Inequality(Nom(RESERVED_NOM), CoNom(RESERVED_CONOM)), v, fresh
        ),
    )
    out: Fo = FoImplies(premise, conclusion)
    noms, conoms = _fresh_symbols(system)
    for name in reversed(conoms):
        out = Forall(CoNomConst(name), ForallTV(CoNomTV(name), out))
    for name in reversed(noms):
        out = Forall(NomConst(name), ForallTV(NomTV(name), out))
    out = ForallTV(
        NomTV(RESERVED_NOM),
        Forall(CoNomConst(RESERVED_CONOM), ForallTV(CoNomTV(RESERVED_CONOM), out)),
    )
    return subst_term(out, NomConst(RESERVED_NOM), free_var)


def _fo_fold(parts: list[Fo]) -> Fo:
    out = parts[0]
    for p in parts[1:]:
        out = FoAnd(out, p)
    return out


def _local_display(
    system: System, pinned: Inequality, alg: HeytingAlgebra, a: int
) -> Optional[Fo]:
    """Closed form `@a =< S(x)` for reduced systems whose non-pinned part
    bounds a join-preserving chain over i0 by m0.

    For such systems the quasi-inequality holds at w exactly when
    a <= S(w), where S is the first-order weight of the chain; the
    equivalence uses join-density and the kappa map, and the fragment
    guard keeps the rewriting sound.
    """
    x = FoVar("x")
    rest = [ineq for ineq in system if ineq != pinned]
    if not rest:
        return Preceq(TruthConst(alg.element_name(a), a), TruthConst("1", 1))
    parts: list[Fo] = []
    fresh = FreshVars(prefix="u")
    for ineq in rest:
        if ineq.rhs != CoNom(RESERVED_CONOM):
            return None
        part = _chain_weight(ineq.lhs, x, x, fresh)
        if part is None:
            return None
        parts.append(part)
    weight = parts[0]
    for p in parts[1:]:
        weight = FoOr(weight, p)
    return Preceq(
        TruthConst(alg.element_name(a), a), simplify_display(weight)
    )


def _chain_weight(f: Formula, state: Fo, x: FoVar, fresh: FreshVars) -> Optional[Fo]:
    """First-order weight S with value(f at state) = S & (value of i0);
    defined on the fragment built from i0 by diamonds and constant meets."""
    if isinstance(f, Nom) and f.name == RESERVED_NOM:
        return Eq(state, x)
    if isinstance(f, Dia):
        u = fresh.next()
        inner = _chain_weight(f.sub, u, x, fresh)
        if inner is None:
            return None
        return Exists(u, FoAnd(Rel(state, u), inner))
    if isinstance(f, DiaInv):
        u = fresh.next()
        inner = _chain_weight(f.sub, u, x, fresh)
        if inner is None:
            return None
        return Exists(u, FoAnd(Rel(u, state), inner))
    if isinstance(f, And):
        for const_side, chain_side in ((f.lhs, f.rhs), (f.rhs, f.lhs)):
            if isinstance(const_side, Const):
                inner = _chain_weight(chain_side, state, x, fresh)
                if inner is None:
                    return None
                return FoAnd(TruthConst(const_side.name, const_side.index), inner)
        return None
    return None


# -- driver --------------------------------------------------------------------------


def run_alba(
    target: Formula | Inequality,
    a: int,
    alg: HeytingAlgebra,
    step_cap: int = 10_000,
    want_global: bool = False,
) -> AlbaResult:
    source = input_inequality(target, alg)
    a_const = Const(alg.element_name(a), a)
    start = Inequality(And(source.lhs, a_const), source.rhs)

    pre_steps: list[TraceStep] = []
    pre = preprocess(start, alg, pre_steps)

    pinned = Inequality(Nom(RESERVED_NOM), a_const)
    branches: list[AlbaBranch] = []
    status = "success"
    for idx, member in enumerate(pre):
        steps: list[TraceStep] = []
        system = first_approximation(member, a, alg, idx, steps)
        try:
            ok, final, reduce_steps = reduce_system(system, pinned, idx, alg, step_cap)
        except StepCapExceeded:
            branches.append(AlbaBranch(idx, member, False, system, steps))
            status = "step-cap"
            continue
        steps.extend(reduce_steps)
        branches.append(AlbaBranch(idx, member, ok, final, steps))
        if not ok:
            status = "failure"

    result = AlbaResult(
        status=status,
        algebra=alg,
        value=a,
        source=source,
        pre=pre,
        pre_steps=pre_steps,
        branches=branches,
    )
    if status != "success":
        return result

    result.quasi = [branch_quasi(b.system) for b in branches]
    parts = [branch_correspondent(b.system) for b in branches]
    correspondent = parts[0]
    for p in parts[1:]:
        correspondent = FoAnd(correspondent, p)
    result.correspondent = correspondent
    result.correspondent_global = Forall(FoVar("x"), correspondent)

    displays: list[str] = []
    for b in branches:
        closed = _local_display(b.system, pinned, alg, a)
        if closed is not None:
            displays.append(print_fo(closed))
        else:
            displays.append(print_fo(simplify_display(branch_correspondent(b.system))))
    result.display = "  AND  ".join(displays)
    return result


# -- system comparison helpers ---------------------------------------------------------


def normalize_fresh_names(system: System) -> System:
    """Rename fresh nominals to j1, j2, ... and fresh co-nominals to
    n1, n2, ... by order of first appearance (reserved names fixed)."""
    order = sorted(system, key=str)
    mapping: dict[Formula, Formula] = {}
    j = n = 0
    for ineq in order:
        for atom in sorted(atoms(ineq.lhs) | atoms(ineq.rhs), key=str):
            if atom in mapping:
                continue
            if isinstance(atom, Nom) and atom.name != RESERVED_NOM:
                j += 1
                mapping[atom] = Nom(f"j{j}")
            elif isinstance(atom, CoNom) and atom.name != RESERVED_CONOM:
                n += 1
                mapping[atom] = CoNom(f"n{n}")

    def rename(f: Formula) -> Formula:
        if f in mapping:
            return mapping[f]
        subs = children(f)
        if not subs:
            return f
        return rebuild(f, tuple(rename(c) for c in subs))

    return tuple(Inequality(rename(i.lhs), rename(i.rhs)) for i in order)


def systems_equal(s1: System, s2: System) -> bool:
    """Multiset equality up to fresh-name normalization."""
    a = sorted(str(i) for i in normalize_fresh_names(s1))
    b = sorted(str(i) for i in normalize_fresh_names(s2))
    return a == b
