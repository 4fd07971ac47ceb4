"""First- and second-order correspondence language: syntax and evaluation.

Formulas are evaluated over frames into the same algebra as modal formulas.
Equality and the comparison connective `=<` are crisp (value bottom or
top); individual quantifiers take meets/joins over the state set, predicate
quantifiers enumerate all fuzzy subsets (budgeted), and truth-value
quantifiers range over the join- or meet-irreducibles.

`standard_translation` embeds modal formulas; the output is clean (no
variable occurs both free and bound, distinct quantifiers bind distinct
variables).  `simplify_display` is a bounded, sound rewriter used only for
presentation; verification always runs on unsimplified formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from .budget import Budget
from .errors import UnboundSymbol
from .heyting import HeytingAlgebra
from .semantics import Frame, Model
from . import syntax
from .syntax import Formula as ModalFormula


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        return print_term(self)


@dataclass(frozen=True)
class FoVar(Term):
    name: str


@dataclass(frozen=True)
class NomConst(Term):
    """Individual constant naming the state a nominal points at."""

    name: str


@dataclass(frozen=True)
class CoNomConst(Term):
    name: str


class Fo:
    """Base class for first-/second-order formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_fo(self)


@dataclass(frozen=True)
class Eq(Fo):
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Rel(Fo):
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Pred(Fo):
    name: str
    arg: Term


@dataclass(frozen=True)
class TruthConst(Fo):
    name: str
    index: int


@dataclass(frozen=True)
class NomTV(Fo):
    """Truth-value symbol recording a nominal's degree (a join-irreducible)."""

    name: str


@dataclass(frozen=True)
class CoNomTV(Fo):
    name: str


@dataclass(frozen=True)
class FoOr(Fo):
    lhs: Fo
    rhs: Fo


@dataclass(frozen=True)
class FoAnd(Fo):
    lhs: Fo
    rhs: Fo


@dataclass(frozen=True)
class FoImplies(Fo):
    lhs: Fo
    rhs: Fo


@dataclass(frozen=True)
class FoMinus(Fo):
    lhs: Fo
    rhs: Fo


@dataclass(frozen=True)
class Preceq(Fo):
    """Crisp comparison: top when lhs evaluates below rhs, else bottom."""

    lhs: Fo
    rhs: Fo


@dataclass(frozen=True)
class Forall(Fo):
    var: Term
    body: Fo


@dataclass(frozen=True)
class Exists(Fo):
    var: Term
    body: Fo


@dataclass(frozen=True)
class ForallPred(Fo):
    name: str
    body: Fo


@dataclass(frozen=True)
class ExistsPred(Fo):
    name: str
    body: Fo


@dataclass(frozen=True)
class ForallTV(Fo):
    sym: Fo  # NomTV or CoNomTV
    body: Fo


@dataclass(frozen=True)
class ExistsTV(Fo):
    sym: Fo
    body: Fo


BOT = TruthConst("0", 0)
TOP = TruthConst("1", 1)


def neq(lhs: Term, rhs: Term) -> Fo:
    """Crisp inequation, encoded as (lhs = rhs) -> @0."""
    return FoImplies(Eq(lhs, rhs), BOT)


def fo_children(f: Fo) -> tuple[Fo, ...]:
    if isinstance(f, (FoOr, FoAnd, FoImplies, FoMinus, Preceq)):
        return (f.lhs, f.rhs)
    if isinstance(f, (Forall, Exists, ForallPred, ExistsPred, ForallTV, ExistsTV)):
        return (f.body,)
    return ()


def fo_rebuild(f: Fo, subs: tuple[Fo, ...]) -> Fo:
    if isinstance(f, (FoOr, FoAnd, FoImplies, FoMinus, Preceq)):
        return type(f)(subs[0], subs[1])
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, subs[0])
    if isinstance(f, (ForallPred, ExistsPred)):
        return type(f)(f.name, subs[0])
    if isinstance(f, (ForallTV, ExistsTV)):
        return type(f)(f.sym, subs[0])
    return f


def terms_of(f: Fo) -> tuple[Term, ...]:
    if isinstance(f, (Eq, Rel)):
        return (f.lhs, f.rhs)
    if isinstance(f, Pred):
        return (f.arg,)
    return ()


def free_individual_symbols(f: Fo) -> set[Term]:
    """Free individual variables and nominal/co-nominal constants of f."""
    out: set[Term] = set()

    def walk(node: Fo, bound: frozenset[Term]) -> None:
        for t in terms_of(node):
            if t not in bound:
                out.add(t)
        if isinstance(node, (Forall, Exists)):
            walk(node.body, bound | {node.var})
        else:
            for c in fo_children(node):
                walk(c, bound)

    walk(f, frozenset())
    return out


def free_tv_symbols(f: Fo) -> set[Fo]:
    out: set[Fo] = set()

    def walk(node: Fo, bound: frozenset[Fo]) -> None:
        if isinstance(node, (NomTV, CoNomTV)) and node not in bound:
            out.add(node)
        if isinstance(node, (ForallTV, ExistsTV)):
            walk(node.body, bound | {node.sym})
        else:
            for c in fo_children(node):
                walk(c, bound)

    walk(f, frozenset())
    return out


def free_pred_names(f: Fo) -> set[str]:
    out: set[str] = set()

    def walk(node: Fo, bound: frozenset[str]) -> None:
        if isinstance(node, Pred) and node.name not in bound:
            out.add(node.name)
        if isinstance(node, (ForallPred, ExistsPred)):
            walk(node.body, bound | {node.name})
        else:
            for c in fo_children(node):
                walk(c, bound)

    walk(f, frozenset())
    return out


def has_pred_nodes(f: Fo) -> bool:
    """True when f lies outside the predicate-free frame fragment."""
    if isinstance(f, Pred):
        return True
    return any(has_pred_nodes(c) for c in fo_children(f))


def is_clean(f: Fo) -> bool:
    """No variable both free and bound; distinct quantifiers, distinct vars."""
    bound: list[Term] = []

    def collect(node: Fo) -> None:
        if isinstance(node, (Forall, Exists)):
            bound.append(node.var)
        for c in fo_children(node):
            collect(c)

    collect(f)
    if len(bound) != len(set(bound)):
        return False
    return not (set(bound) & free_individual_symbols(f))


# -- evaluation ----------------------------------------------------------------


@dataclass
class FoInterp:
    """Interpretation of the non-logical symbols over a frame."""

    frame: Frame
    preds: dict[str, tuple[int, ...]]
    consts: dict[Term, int]  # NomConst/CoNomConst -> state index
    tvs: dict[Fo, int]  # NomTV/CoNomTV -> algebra element


def interp_for_frame(frame: Frame) -> FoInterp:
    return FoInterp(frame, {}, {}, {})


def interp_for_model(model: Model) -> FoInterp:
    """The corresponding first-order model of a modal model."""
    alg = model.frame.algebra
    preds: dict[str, tuple[int, ...]] = {}
    consts: dict[Term, int] = {}
    tvs: dict[Fo, int] = {}
    for atom, row in model.valuation.items():
        if isinstance(atom, syntax.Var):
            preds[atom.name] = row
        elif isinstance(atom, syntax.Nom):
            w = next(i for i, v in enumerate(row) if v != alg.bot)
            consts[NomConst(atom.name)] = w
            tvs[NomTV(atom.name)] = row[w]
        elif isinstance(atom, syntax.CoNom):
            w = next(i for i, v in enumerate(row) if v != alg.top)
            consts[CoNomConst(atom.name)] = w
            tvs[CoNomTV(atom.name)] = row[w]
    return FoInterp(model.frame, preds, consts, tvs)


def fo_eval(
    interp: FoInterp,
    f: Fo,
    env: dict | None = None,
    budget: Budget | None = None,
) -> int:
    """Truth value of f under an assignment of its free symbols.

    `env` maps individual symbols to state indices, truth-value symbols to
    algebra elements, and (shadowing interp.preds) predicate names to rows.
    """
    alg = interp.frame.algebra
    n = interp.frame.size
    env = {} if env is None else dict(env)

    def term_value(t: Term) -> int:
        if t in env:
            return env[t]
        if t in interp.consts:
            return interp.consts[t]
        raise UnboundSymbol(f"individual symbol {t} is unbound")

    def pred_row(name: str) -> tuple[int, ...]:
        if name in env:
            return env[name]
        if name in interp.preds:
            return interp.preds[name]
        raise UnboundSymbol(f"predicate {name} is unbound")

    def go(node: Fo) -> int:
        if budget is not None:
            budget.charge()
        if isinstance(node, Eq):
            return alg.top if term_value(node.lhs) == term_value(node.rhs) else alg.bot
        if isinstance(node, Rel):
            return interp.frame.rel[term_value(node.lhs)][term_value(node.rhs)]
        if isinstance(node, Pred):
            return pred_row(node.name)[term_value(node.arg)]
        if isinstance(node, TruthConst):
            return node.index
        if isinstance(node, (NomTV, CoNomTV)):
            if node in env:
                return env[node]
            if node in interp.tvs:
                return interp.tvs[node]
            raise UnboundSymbol(f"truth-value symbol {node} is unbound")
        if isinstance(node, FoOr):
            left = go(node.lhs)
            if left == alg.top:
                return left
            return alg.join(left, go(node.rhs))
        if isinstance(node, FoAnd):
            left = go(node.lhs)
            if left == alg.bot:
                return left
            return alg.meet(left, go(node.rhs))
        if isinstance(node, FoImplies):
            left = go(node.lhs)
            if left == alg.bot:
                return alg.top
            return alg.imp(left, go(node.rhs))
        if isinstance(node, FoMinus):
            return alg.coimp(go(node.lhs), go(node.rhs))
        if isinstance(node, Preceq):
            return alg.top if alg.le(go(node.lhs), go(node.rhs)) else alg.bot
        if isinstance(node, Forall):
            out = alg.top
            saved = env.get(node.var, _MISSING)
            for w in range(n):
                env[node.var] = w
                out = alg.meet(out, go(node.body))
                if out == alg.bot:
                    break
            _restore(env, node.var, saved)
            return out
        if isinstance(node, Exists):
            out = alg.bot
            saved = env.get(node.var, _MISSING)
            for w in range(n):
                env[node.var] = w
                out = alg.join(out, go(node.body))
                if out == alg.top:
                    break
            _restore(env, node.var, saved)
            return out
        if isinstance(node, (ForallPred, ExistsPred)):
            is_forall = isinstance(node, ForallPred)
            out = alg.top if is_forall else alg.bot
            saved = env.get(node.name, _MISSING)
            for row in product(range(alg.n), repeat=n):
                if budget is not None:
                    budget.charge()
                env[node.name] = row
                v = go(node.body)
                out = alg.meet(out, v) if is_forall else alg.join(out, v)
                if out == (alg.bot if is_forall else alg.top):
                    break
            _restore(env, node.name, saved)
            return out
        if isinstance(node, (ForallTV, ExistsTV)):
            is_forall = isinstance(node, ForallTV)
            domain = (
                alg.join_irreducibles
                if isinstance(node.sym, NomTV)
                else alg.meet_irreducibles
            )
            out = alg.top if is_forall else alg.bot
            saved = env.get(node.sym, _MISSING)
            for v in domain:
                env[node.sym] = v
                value = go(node.body)
                out = alg.meet(out, value) if is_forall else alg.join(out, value)
                if out == (alg.bot if is_forall else alg.top):
                    break
            _restore(env, node.sym, saved)
            return out
        raise TypeError(f"not a first-order formula: {node!r}")

    return go(f)


_MISSING = object()


def _restore(env: dict, key, saved) -> None:
    if saved is _MISSING:
        env.pop(key, None)
    else:
        env[key] = saved


class CompiledFo:
    """Slot-compiled evaluator for one (interpretation, formula) pair.

    Every free or bound symbol gets a slot in a positional environment;
    each quantifier-bearing subformula memoizes its value on the projection
    of the environment to the slots it reads.  Produces the same values as
    fo_eval, much faster under assignment sweeps.
    """

    def __init__(self, interp: FoInterp, f: Fo, budget: Budget | None = None):
        self.interp = interp
        self.alg = interp.frame.algebra
        self.budget = budget
        self.slots: dict = {}
        self._memos: list[dict] = []
        self.fn = self._compile(f)

    def _slot(self, sym) -> int:
        if sym not in self.slots:
            self.slots[sym] = len(self.slots)
        return self.slots[sym]

    def value(self, env: dict | None = None) -> int:
        values = [None] * len(self.slots)
        if env:
            for sym, v in env.items():
                if sym in self.slots:
                    values[self.slots[sym]] = v
        return self.fn(values)

    def reset(self) -> None:
        for memo in self._memos:
            memo.clear()

    def _term(self, t: Term):
        if isinstance(t, (NomConst, CoNomConst)) and t in self.interp.consts:
            fixed = self.interp.consts[t]
            return lambda env: fixed
        slot = self._slot(t)

        def read(env):
            v = env[slot]
            if v is None:
                raise UnboundSymbol(f"individual symbol {t} is unbound")
            return v

        return read

    def _free_slots(self, f: Fo) -> tuple[int, ...]:
        free: set[int] = set()

        def walk(node: Fo, bound: frozenset) -> None:
            for t in terms_of(node):
                if t not in bound and t in self.slots:
                    free.add(self.slots[t])
            if isinstance(node, Pred) and node.name not in bound:
                if node.name in self.slots:
                    free.add(self.slots[node.name])
            if isinstance(node, (NomTV, CoNomTV)) and node not in bound:
                if node in self.slots:
                    free.add(self.slots[node])
            if isinstance(node, (Forall, Exists)):
                walk(node.body, bound | {node.var})
            elif isinstance(node, (ForallPred, ExistsPred)):
                walk(node.body, bound | {node.name})
            elif isinstance(node, (ForallTV, ExistsTV)):
                walk(node.body, bound | {node.sym})
            else:
                for c in fo_children(node):
                    walk(c, bound)

        walk(f, frozenset())
        return tuple(sorted(free))

    def _has_quantifier(self, f: Fo) -> bool:
        if isinstance(f, (Forall, Exists, ForallPred, ExistsPred, ForallTV, ExistsTV)):
            return True
        return any(self._has_quantifier(c) for c in fo_children(f))

    def _compile(self, f: Fo):
        alg = self.alg
        fn = self._compile_raw(f)
        if self._has_quantifier(f):
            slots = self._free_slots(f)
            memo: dict = {}
            self._memos.append(memo)

            def memoized(env, fn=fn, slots=slots, memo=memo):
                key = tuple(env[s] for s in slots)
                hit = memo.get(key, -1)
                if hit < 0:
                    hit = fn(env)
                    memo[key] = hit
                return hit

            return memoized
        return fn

    def _compile_raw(self, f: Fo):
        alg = self.alg
        interp = self.interp
        top, bot = alg.top, alg.bot
        if isinstance(f, Eq):
            lt, rt = self._term(f.lhs), self._term(f.rhs)
            return lambda env: top if lt(env) == rt(env) else bot
        if isinstance(f, Rel):
            lt, rt = self._term(f.lhs), self._term(f.rhs)
            rel = interp.frame.rel
            return lambda env: rel[lt(env)][rt(env)]
        if isinstance(f, Pred):
            at = self._term(f.arg)
            if f.name in interp.preds:
                row = interp.preds[f.name]
                return lambda env: row[at(env)]
            slot = self._slot(f.name)

            def pred(env):
                row = env[slot]
                if row is None:
                    raise UnboundSymbol(f"predicate {f.name} is unbound")
                return row[at(env)]

            return pred
        if isinstance(f, TruthConst):
            idx = f.index
            return lambda env: idx
        if isinstance(f, (NomTV, CoNomTV)):
            if f in interp.tvs:
                fixed = interp.tvs[f]
                return lambda env: fixed
            slot = self._slot(f)

            def tv(env, f=f):
                v = env[slot]
                if v is None:
                    raise UnboundSymbol(f"truth-value symbol {f} is unbound")
                return v

            return tv
        if isinstance(f, FoOr):
            lf, rf = self._compile(f.lhs), self._compile(f.rhs)
            join = alg.join

            def disj(env):
                left = lf(env)
                if left == top:
                    return left
                return join(left, rf(env))

            return disj
        if isinstance(f, FoAnd):
            lf, rf = self._compile(f.lhs), self._compile(f.rhs)
            meet = alg.meet

            def conj(env):
                left = lf(env)
                if left == bot:
                    return left
                return meet(left, rf(env))

            return conj
        if isinstance(f, FoImplies):
            lf, rf = self._compile(f.lhs), self._compile(f.rhs)
            imp = alg.imp

            def impl(env):
                left = lf(env)
                if left == bot:
                    return top
                return imp(left, rf(env))

            return impl
        if isinstance(f, FoMinus):
            lf, rf = self._compile(f.lhs), self._compile(f.rhs)
            coimp = alg.coimp
            return lambda env: coimp(lf(env), rf(env))
        if isinstance(f, Preceq):
            lf, rf = self._compile(f.lhs), self._compile(f.rhs)
            le = alg.le
            return lambda env: top if le(lf(env), rf(env)) else bot
        if isinstance(f, (Forall, Exists)):
            slot = self._slot(f.var)
            body = self._compile(f.body)
            size = interp.frame.size
            is_forall = isinstance(f, Forall)
            meet, join = alg.meet, alg.join
            budget = self.budget

            def quant(env):
                if budget is not None:
                    budget.charge(size)
                out = top if is_forall else bot
                saved = env[slot]
                for w in range(size):
                    env[slot] = w
                    v = body(env)
                    out = meet(out, v) if is_forall else join(out, v)
                    if out == (bot if is_forall else top):
                        break
                env[slot] = saved
                return out

            return quant
        if isinstance(f, (ForallPred, ExistsPred)):
            slot = self._slot(f.name)
            body = self._compile(f.body)
            size = interp.frame.size
            is_forall = isinstance(f, ForallPred)
            meet, join = alg.meet, alg.join
            budget = self.budget

            def pquant(env):
                out = top if is_forall else bot
                saved = env[slot]
                for row in product(range(alg.n), repeat=size):
                    if budget is not None:
                        budget.charge()
                    env[slot] = row
                    v = body(env)
                    out = meet(out, v) if is_forall else join(out, v)
                    if out == (bot if is_forall else top):
                        break
                env[slot] = saved
                return out

            return pquant
        if isinstance(f, (ForallTV, ExistsTV)):
            slot = self._slot(f.sym)
            body = self._compile(f.body)
            domain = (
                alg.join_irreducibles
                if isinstance(f.sym, NomTV)
                else alg.meet_irreducibles
            )
            is_forall = isinstance(f, ForallTV)
            meet, join = alg.meet, alg.join

            def tvquant(env):
                out = top if is_forall else bot
                saved = env[slot]
                for v in domain:
                    env[slot] = v
                    value = body(env)
                    out = meet(out, value) if is_forall else join(out, value)
                    if out == (bot if is_forall else top):
                        break
                env[slot] = saved
                return out

            return tvquant
        raise TypeError(f"not a first-order formula: {f!r}")


def fo_a_truth(
    interp: FoInterp,
    f: Fo,
    a: int,
    fixed: dict | None = None,
    budget: Budget | None = None,
) -> bool:
    """a-truth: value at least a under every assignment extending `fixed`.

    Free individual symbols not covered by `fixed` or the interpretation
    range over all states.
    """
    alg = interp.frame.algebra
    fixed = dict(fixed) if fixed else {}
    open_syms = sorted(
        (
            t
            for t in free_individual_symbols(f)
            if t not in fixed and t not in interp.consts
        ),
        key=str,
    )
    evaluator = CompiledFo(interp, f, budget)
    for combo in product(range(interp.frame.size), repeat=len(open_syms)):
        env = dict(fixed)
        env.update(zip(open_syms, combo))
        if not alg.le(a, evaluator.value(env)):
            return False
    return True


# -- standard translation -------------------------------------------------------


class FreshVars:
    """Counter-backed fresh individual variables y1, y2, ..."""

    def __init__(self, prefix: str = "y"):
        self.prefix = prefix
        self.count = 0

    def next(self) -> FoVar:
        self.count += 1
        return FoVar(f"{self.prefix}{self.count}")


def standard_translation(
    f: ModalFormula | syntax.Inequality,
    x: Term | None = None,
    fresh: FreshVars | None = None,
) -> Fo:
    """Translate a modal formula (or inequality) into the FO language.

    The free variable defaults to `x`; every quantifier binds a fresh
    variable drawn from a shared counter, so the output is clean.
    """
    x = FoVar("x") if x is None else x
    fresh = FreshVars() if fresh is None else fresh

    if isinstance(f, syntax.Inequality):
        return Preceq(
            standard_translation(f.lhs, x, fresh),
            standard_translation(f.rhs, x, fresh),
        )

    def st(node: ModalFormula, cur: Term) -> Fo:
        if isinstance(node, syntax.Var):
            return Pred(node.name, cur)
        if isinstance(node, syntax.Const):
            return TruthConst(node.name, node.index)
        if isinstance(node, syntax.Nom):
            return FoAnd(Eq(NomConst(node.name), cur), NomTV(node.name))
        if isinstance(node, syntax.CoNom):
            return FoOr(neq(CoNomConst(node.name), cur), CoNomTV(node.name))
        if isinstance(node, syntax.Or):
            return FoOr(st(node.lhs, cur), st(node.rhs, cur))
        if isinstance(node, syntax.And):
            return FoAnd(st(node.lhs, cur), st(node.rhs, cur))
        if isinstance(node, syntax.Implies):
            return FoImplies(st(node.lhs, cur), st(node.rhs, cur))
        if isinstance(node, syntax.Minus):
            return FoMinus(st(node.lhs, cur), st(node.rhs, cur))
        if isinstance(node, syntax.Dia):
            y = fresh.next()
            return Exists(y, FoAnd(Rel(cur, y), st(node.sub, y)))
        if isinstance(node, syntax.Box):
            y = fresh.next()
            return Forall(y, FoImplies(Rel(cur, y), st(node.sub, y)))
        if isinstance(node, syntax.DiaInv):
            y = fresh.next()
            return Exists(y, FoAnd(Rel(y, cur), st(node.sub, y)))
        if isinstance(node, syntax.BoxInv):
            y = fresh.next()
            return Forall(y, FoImplies(Rel(y, cur), st(node.sub, y)))
        raise TypeError(f"not a modal formula: {node!r}")

    return st(f, x)


def st_faithfulness_check(model: Model, f, budget: Budget | None = None) -> bool:
    """Dual-path check: the modal value at every state equals the value of
    the translation in the corresponding first-order model."""
    from .semantics import eval_formula

    interp = interp_for_model(model)
    translated = standard_translation(f)
    x = FoVar("x")
    return all(
        eval_formula(model, f, w) == fo_eval(interp, translated, {x: w}, budget)
        for w in range(model.frame.size)
    )


# -- frame property library ------------------------------------------------------

_X = FoVar("x")
_Y = FoVar("y")
_Z = FoVar("z")

FRAME_PROPERTIES: dict[str, Fo] = {
    # local first-order conditions with one free variable x
    "reflexive": Rel(_X, _X),
    "symmetric": Forall(_Y, FoImplies(Rel(_X, _Y), Rel(_Y, _X))),
    "transitive": Forall(
        _Y,
        Forall(
            _Z, FoImplies(FoAnd(Rel(_X, _Y), Rel(_Y, _Z)), Rel(_X, _Z))
        ),
    ),
    "dense": Forall(
        _Y,
        FoImplies(Rel(_X, _Y), Exists(_Z, FoAnd(Rel(_X, _Z), Rel(_Z, _Y)))),
    ),
    "serial": Exists(_Y, Rel(_X, _Y)),
}


def frame_property(name: str) -> Fo:
    return FRAME_PROPERTIES[name]


# -- substitution -----------------------------------------------------------------


def subst_term(f: Fo, old: Term, new: Term) -> Fo:
    """Rename free occurrences of an individual symbol."""
    if isinstance(f, (Forall, Exists)):
        if f.var == old:
            return f
        return type(f)(f.var, subst_term(f.body, old, new))
    if isinstance(f, (Eq, Rel)):
        repl = lambda t: new if t == old else t
        return type(f)(repl(f.lhs), repl(f.rhs))
    if isinstance(f, Pred):
        return Pred(f.name, new if f.arg == old else f.arg)
    subs = fo_children(f)
    if not subs:
        return f
    return fo_rebuild(f, tuple(subst_term(c, old, new) for c in subs))


def subst_pred(f: Fo, name: str, make_body, conjoin_tv: Fo | None = None) -> Fo:
    """Replace each atom name(t) by make_body(t), optionally conjoined with
    a truth-value symbol (the decorated variant of the substitution)."""
    if isinstance(f, Pred) and f.name == name:
        body = make_body(f.arg)
        if conjoin_tv is not None:
            body = FoAnd(body, conjoin_tv)
        return body
    if isinstance(f, (ForallPred, ExistsPred)) and f.name == name:
        return f
    subs = fo_children(f)
    if not subs:
        return f
    return fo_rebuild(f, tuple(subst_pred(c, name, make_body, conjoin_tv) for c in subs))


# -- printing ----------------------------------------------------------------------


def print_term(t: Term) -> str:
    if isinstance(t, FoVar):
        return t.name
    if isinstance(t, NomConst):
        return f"c_{t.name}"
    if isinstance(t, CoNomConst):
        return f"c_{t.name}"
    raise TypeError(f"not a term: {t!r}")


_P_IMP, _P_OR, _P_AND, _P_ATOM = 0, 1, 2, 3


def _fo_level(f: Fo) -> int:
    if isinstance(f, (FoImplies, FoMinus, Preceq, Forall, Exists,
                      ForallPred, ExistsPred, ForallTV, ExistsTV)):
        return _P_IMP
    if isinstance(f, FoOr):
        return _P_OR
    if isinstance(f, FoAnd):
        return _P_AND
    return _P_ATOM


def print_fo(f: Fo) -> str:
    def wrap(sub: Fo, minimum: int) -> str:
        text = print_fo(sub)
        if _fo_level(sub) < minimum:
            return f"({text})"
        return text

    def qbody(sub: Fo) -> str:
        # parenthesize binary bodies; quantifier chains stay bare
        if isinstance(sub, (FoOr, FoAnd, FoImplies, FoMinus, Preceq)):
            return f"({print_fo(sub)})"
        return print_fo(sub)

    if isinstance(f, Eq):
        return f"{print_term(f.lhs)} = {print_term(f.rhs)}"
    if isinstance(f, Rel):
        return f"R({print_term(f.lhs)}, {print_term(f.rhs)})"
    if isinstance(f, Pred):
        return f"{f.name}({print_term(f.arg)})"
    if isinstance(f, TruthConst):
        return f"@{f.name}"
    if isinstance(f, NomTV):
        return f"C_{f.name}"
    if isinstance(f, CoNomTV):
        return f"C_{f.name}"
    if isinstance(f, FoImplies):
        if isinstance(f.lhs, Eq) and _is_bot(f.rhs):
            return f"{print_term(f.lhs.lhs)} != {print_term(f.lhs.rhs)}"
        return f"{wrap(f.lhs, _P_OR)} -> {wrap(f.rhs, _P_IMP)}"
    if isinstance(f, FoOr):
        return f"{wrap(f.lhs, _P_OR)} | {wrap(f.rhs, _P_AND)}"
    if isinstance(f, FoAnd):
        return f"{wrap(f.lhs, _P_AND)} & {wrap(f.rhs, _P_ATOM)}"
    if isinstance(f, FoMinus):
        return f"{wrap(f.lhs, _P_OR)} - {wrap(f.rhs, _P_OR)}"
    if isinstance(f, Preceq):
        return f"{wrap(f.lhs, _P_OR)} =< {wrap(f.rhs, _P_OR)}"
    if isinstance(f, Forall):
        return f"A {print_term(f.var)}. {qbody(f.body)}"
    if isinstance(f, Exists):
        return f"E {print_term(f.var)}. {qbody(f.body)}"
    if isinstance(f, ForallPred):
        return f"A {f.name}:pred. {qbody(f.body)}"
    if isinstance(f, ExistsPred):
        return f"E {f.name}:pred. {qbody(f.body)}"
    if isinstance(f, ForallTV):
        return f"A {print_fo(f.sym)}. {qbody(f.body)}"
    if isinstance(f, ExistsTV):
        return f"E {print_fo(f.sym)}. {qbody(f.body)}"
    raise TypeError(f"not a first-order formula: {f!r}")


def to_dict(f: Fo | Term) -> dict:
    """Machine-readable structured dump."""
    if isinstance(f, (FoVar, NomConst, CoNomConst)):
        return {"kind": type(f).__name__, "name": f.name}
    if isinstance(f, (Eq, Rel)):
        return {
            "kind": type(f).__name__,
            "lhs": to_dict(f.lhs),
            "rhs": to_dict(f.rhs),
        }
    if isinstance(f, Pred):
        return {"kind": "Pred", "name": f.name, "arg": to_dict(f.arg)}
    if isinstance(f, TruthConst):
        return {"kind": "TruthConst", "name": f.name}
    if isinstance(f, (NomTV, CoNomTV)):
        return {"kind": type(f).__name__, "name": f.name}
    if isinstance(f, (FoOr, FoAnd, FoImplies, FoMinus, Preceq)):
        return {
            "kind": type(f).__name__,
            "lhs": to_dict(f.lhs),
            "rhs": to_dict(f.rhs),
        }
    if isinstance(f, (Forall, Exists)):
        return {
            "kind": type(f).__name__,
            "var": to_dict(f.var),
            "body": to_dict(f.body),
        }
    if isinstance(f, (ForallPred, ExistsPred)):
        return {"kind": type(f).__name__, "name": f.name, "body": to_dict(f.body)}
    if isinstance(f, (ForallTV, ExistsTV)):
        return {"kind": type(f).__name__, "sym": to_dict(f.sym), "body": to_dict(f.body)}
    raise TypeError(f"not dumpable: {f!r}")


# -- display simplifier -------------------------------------------------------------


def _flat_conjuncts(f: Fo) -> list[Fo]:
    if isinstance(f, FoAnd):
        return _flat_conjuncts(f.lhs) + _flat_conjuncts(f.rhs)
    return [f]


def _conjoin(parts: list[Fo]) -> Fo:
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = FoAnd(out, p)
    return out


def _is_bot(f: Fo) -> bool:
    return isinstance(f, TruthConst) and f.index == 0


def _is_top(f: Fo) -> bool:
    return isinstance(f, TruthConst) and f.index == 1


def _occurs(term: Term, f: Fo) -> bool:
    return term in free_individual_symbols(f)


def _simplify_once(f: Fo) -> Fo:
    subs = fo_children(f)
    if subs:
        f = fo_rebuild(f, tuple(_simplify_once(c) for c in subs))

    if isinstance(f, Eq) and f.lhs == f.rhs:
        return TOP
    if isinstance(f, FoAnd):
        if _is_top(f.lhs):
            return f.rhs
        if _is_top(f.rhs):
            return f.lhs
        if _is_bot(f.lhs) or _is_bot(f.rhs):
            return BOT
        if f.lhs == f.rhs:
            return f.lhs
    if isinstance(f, FoOr):
        if _is_bot(f.lhs):
            return f.rhs
        if _is_bot(f.rhs):
            return f.lhs
        if _is_top(f.lhs) or _is_top(f.rhs):
            return TOP
        if f.lhs == f.rhs:
            return f.lhs
    if isinstance(f, FoImplies):
        if _is_top(f.lhs):
            return f.rhs
        if _is_bot(f.lhs) or _is_top(f.rhs):
            return TOP
        if f.lhs == f.rhs:
            return TOP
        # curry nested implications and pull universal quantifiers out
        if isinstance(f.rhs, Forall) and not _occurs(f.rhs.var, f.lhs):
            return Forall(f.rhs.var, FoImplies(f.lhs, f.rhs.body))
        if isinstance(f.rhs, FoImplies) and not isinstance(f.rhs.lhs, Eq):
            return FoImplies(FoAnd(f.lhs, f.rhs.lhs), f.rhs.rhs)
    if isinstance(f, FoMinus) and _is_bot(f.rhs):
        return f.lhs
    if isinstance(f, Preceq):
        if _is_bot(f.lhs) or _is_top(f.rhs) or f.lhs == f.rhs:
            return TOP
    if isinstance(f, Exists):
        # E v. (... & v = t & ...)  collapses to the substituted matrix
        parts = _flat_conjuncts(f.body)
        for i, part in enumerate(parts):
            target = _eq_solution(part, f.var)
            if target is not None:
                rest = parts[:i] + parts[i + 1:]
                return _conjoin([subst_term(p, f.var, target) for p in rest])
        if not _occurs(f.var, f.body):
            return f.body
    if isinstance(f, Forall):
        if isinstance(f.body, FoImplies):
            parts = _flat_conjuncts(f.body.lhs)
            for i, part in enumerate(parts):
                target = _eq_solution(part, f.var)
                if target is not None:
                    rest = parts[:i] + parts[i + 1:]
                    prem = [subst_term(p, f.var, target) for p in rest]
                    concl = subst_term(f.body.rhs, f.var, target)
                    if prem:
                        return FoImplies(_conjoin(prem), concl)
                    return concl
        if not _occurs(f.var, f.body):
            return f.body
    return f


def _eq_solution(part: Fo, var: Term) -> Optional[Term]:
    """If part pins `var` to another term, return that term."""
    if isinstance(part, Eq):
        if part.lhs == var and part.rhs != var:
            return part.rhs
        if part.rhs == var and part.lhs != var:
            return part.lhs
    return None


def simplify_display(f: Fo, max_rounds: int = 40) -> Fo:
    """Sound bounded rewriting toward textbook shapes; display only."""
    for _ in range(max_rounds):
        nxt = _simplify_once(f)
        if nxt == f:
            return f
        f = nxt
    return f


# -- parsing ------------------------------------------------------------------

import re as _re

_FO_TOKEN = _re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<comma>,)
  | (?P<dot>\.)
  | (?P<preceq>=<)
  | (?P<arrow>->)
  | (?P<neq>!=)
  | (?P<eq>=)
  | (?P<or>\|)
  | (?P<and>&)
  | (?P<minus>-)
  | (?P<const>@[A-Za-z0-9_]+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
    """,
    _re.VERBOSE,
)


def _fo_tokenize(text: str):
    from .errors import FormulaSyntaxError

    out, pos = [], 0
    while pos < len(text):
        m = _FO_TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


def _term_from_name(name: str) -> Term:
    if name.startswith("c_"):
        base = name[2:]
        if base[:1] in ("m", "n"):
            return CoNomConst(base)
        return NomConst(base)
    return FoVar(name)


def _tv_from_name(name: str) -> Fo:
    base = name[2:]
    if base[:1] in ("m", "n"):
        return CoNomTV(base)
    return NomTV(base)


class _FoParser:
    """Recursive-descent parser matching print_fo output.

    Naming conventions resolve lexical classes: `c_<name>` is an individual
    constant (co-nominal flavour when <name> starts with m or n), `C_<name>`
    a truth-value symbol, `@<name>` an algebra constant; `R` is the
    accessibility relation, any other applied identifier a predicate.
    """

    def __init__(self, tokens, alg: Optional[HeytingAlgebra]):
        self.toks = tokens
        self.alg = alg
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg: str):
        from .errors import FormulaSyntaxError

        raise FormulaSyntaxError(msg, self.peek()[2])

    def formula(self) -> Fo:
        kind, text, _ = self.peek()
        if kind == "ident" and text in ("A", "E"):
            return self.quantified()
        lhs = self.disjunction()
        kind, _, _ = self.peek()
        if kind == "arrow":
            self.next()
            return FoImplies(lhs, self.formula())
        if kind == "preceq":
            self.next()
            return Preceq(lhs, self.disjunction())
        if kind == "minus":
            self.next()
            return FoMinus(lhs, self.disjunction())
        return lhs

    def quantified(self) -> Fo:
        _, which, _ = self.next()
        kind, name, _ = self.next()
        if kind != "ident":
            self.error("expected a quantified symbol")
        if self.peek()[0] != "dot":
            self.error("expected '.' after quantified symbol")
        self.next()
        body = self.formula()
        if name.startswith("C_"):
            sym = _tv_from_name(name)
            return ForallTV(sym, body) if which == "A" else ExistsTV(sym, body)
        return (
            Forall(_term_from_name(name), body)
            if which == "A"
            else Exists(_term_from_name(name), body)
        )

    def disjunction(self) -> Fo:
        out = self.conjunction()
        while self.peek()[0] == "or":
            self.next()
            out = FoOr(out, self.conjunction())
        return out

    def conjunction(self) -> Fo:
        out = self.atom()
        while self.peek()[0] == "and":
            self.next()
            out = FoAnd(out, self.atom())
        return out

    def atom(self) -> Fo:
        kind, text, pos = self.next()
        if kind == "lparen":
            inner = self.formula()
            if self.peek()[0] != "rparen":
                self.error("expected ')'")
            self.next()
            return inner
        if kind == "const":
            name = text[1:]
            if self.alg is not None:
                idx = self.alg.element(name)
                return TruthConst(self.alg.element_name(idx), idx)
            if name in ("0", "bot"):
                return BOT
            if name in ("1", "top"):
                return TOP
            self.error(f"unknown truth constant @{name}")
        if kind == "ident":
            if text.startswith("C_"):
                return _tv_from_name(text)
            if self.peek()[0] == "lparen":
                self.next()
                first = self._term()
                if self.peek()[0] == "comma":
                    self.next()
                    second = self._term()
                    if self.peek()[0] != "rparen":
                        self.error("expected ')'")
                    self.next()
                    if text != "R":
                        self.error("only R takes two arguments")
                    return Rel(first, second)
                if self.peek()[0] != "rparen":
                    self.error("expected ')'")
                self.next()
                return Pred(text, first)
            lhs = _term_from_name(text)
            kind2, _, _ = self.peek()
            if kind2 == "eq":
                self.next()
                return Eq(lhs, self._term())
            if kind2 == "neq":
                self.next()
                return neq(lhs, self._term())
            self.error("expected a relation, equation or predicate")
        self.error(f"unexpected token {text!r}")

    def _term(self) -> Term:
        kind, text, _ = self.next()
        if kind != "ident":
            self.error("expected a term")
        return _term_from_name(text)

    def done(self):
        if self.peek()[0] != "eof":
            self.error(f"trailing input {self.peek()[1]!r}")


def parse_fo(text: str, alg: Optional[HeytingAlgebra] = None) -> Fo:
    """Parse an ASCII first-order formula (the print_fo dialect)."""
    p = _FoParser(_fo_tokenize(text), alg)
    out = p.formula()
    p.done()
    return out
