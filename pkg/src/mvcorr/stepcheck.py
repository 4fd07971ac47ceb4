"""Independent per-step verification of rewriting traces.

Each recorded step is replayed over a set of finite frames: the consumed
and produced inequalities must have the same satisfying assignments of the
symbols they share, with an existential over symbols private to one side
(a closed variable on the consumed side, fresh nominals/co-nominals on the
produced side).  The first-approximation step ties local validity of the
input inequality at a state to the system with the reserved atoms based at
that state, and is checked by its own routine.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .alba import RESERVED_CONOM, RESERVED_NOM, TraceStep
from .budget import Budget
from .semantics import (
    Frame,
    Valuation,
    compile_eval,
    iter_valuations,
)
from .syntax import (
    And,
    CoNom,
    Const,
    Formula,
    Inequality,
    Nom,
    Var,
    atoms,
)


@dataclass
class StepFailure:
    step: TraceStep
    frame: Frame
    message: str

    def describe(self) -> str:
        rel = [
            [self.frame.algebra.element_name(v) for v in row]
            for row in self.frame.rel
        ]
        return f"{self.step.describe()} | frame {rel}: {self.message}"


class _SystemChecker:
    """Global truth of a fixed inequality list over one frame."""

    def __init__(self, frame: Frame, ineqs: Iterable[Inequality]):
        self.frame = frame
        self.alg = frame.algebra
        self.pairs = [
            (compile_eval(i.lhs, frame), compile_eval(i.rhs, frame))
            for i in ineqs
        ]

    def holds(self, val: Valuation) -> bool:
        le = self.alg.le
        for lf, rf in self.pairs:
            for w in range(self.frame.size):
                if not le(lf(val, w), rf(val, w)):
                    return False
        return True


def _satisfiable_extension(
    checker: _SystemChecker,
    base: Valuation,
    private: list[Formula],
    budget: Budget | None,
    universal: bool = False,
) -> bool:
    if not private:
        return checker.holds(base)
    for val in iter_valuations(checker.frame, private, budget, fixed=base):
        if checker.holds(val) != universal:
            return not universal
    return universal


def verify_step(
    step: TraceStep, frames: Iterable[Frame], budget: Budget | None = None
) -> Optional[StepFailure]:
    """None when the step is equivalence-preserving on every frame."""
    if step.rule == "first-approximation":
        return _verify_first_approximation(step, frames, budget)

    before_atoms = set()
    for ineq in step.before:
        before_atoms |= atoms(ineq.lhs) | atoms(ineq.rhs)
    after_atoms = set()
    for ineq in step.after:
        after_atoms |= atoms(ineq.lhs) | atoms(ineq.rhs)
    eliminated = {Var(v) for v in step.eliminated}
    introduced = set(step.introduced)
    shared = (before_atoms | after_atoms) - eliminated - introduced
    private_before = sorted(before_atoms & eliminated, key=str)
    private_after = sorted(after_atoms & introduced, key=str)

    # a closed uniform variable ranges universally (the rule keeps the
    # extremal instance); an eliminated variable ranges existentially
    # (the elimination lemma trades the variable for its bound)
    universal_before = step.rule == "close-uniform-variable"

    for frame in frames:
        before = _SystemChecker(frame, step.before)
        after = _SystemChecker(frame, step.after)
        for val in iter_valuations(frame, shared, budget):
            lhs = _satisfiable_extension(
                before, val, private_before, budget, universal=universal_before
            )
            rhs = _satisfiable_extension(after, val, private_after, budget)
            if lhs != rhs:
                return StepFailure(
                    step,
                    frame,
                    f"consumed side {lhs}, produced side {rhs} under {_show(val, frame)}",
                )
    return None


def _verify_first_approximation(
    step: TraceStep, frames: Iterable[Frame], budget: Budget | None
) -> Optional[StepFailure]:
    # consumed: core & @a <= rhs, judged locally at each state;
    # produced: the three-inequality system with i0 based at that state
    (source,) = step.before
    assert isinstance(source.lhs, And)
    alg_const = source.lhs.rhs
    assert isinstance(alg_const, Const)
    conclusion = Inequality(Nom(RESERVED_NOM), CoNom(RESERVED_CONOM))

    for frame in frames:
        alg = frame.algebra
        n = frame.size
        lhs_fn = compile_eval(source.lhs, frame)
        rhs_fn = compile_eval(source.rhs, frame)
        premises = _SystemChecker(frame, step.after)
        concl = _SystemChecker(frame, (conclusion,))
        variables = sorted(
            atoms(source.lhs) | atoms(source.rhs), key=str
        )
        for w in range(n):
            local = all(
                alg.le(lhs_fn(val, w), rhs_fn(val, w))
                for val in iter_valuations(frame, variables, budget)
            )
            system = True
            for val in iter_valuations(
                frame, variables + [CoNom(RESERVED_CONOM)], budget
            ):
                for j in alg.join_irreducibles:
                    row = [alg.bot] * n
                    row[w] = j
                    candidate = dict(val)
                    candidate[Nom(RESERVED_NOM)] = tuple(row)
                    if premises.holds(candidate) and not concl.holds(candidate):
                        system = False
                        break
                if not system:
                    break
            if local != system:
                return StepFailure(
                    step,
                    frame,
                    f"local validity {local} at state {w}, system validity {system}",
                )
    return None


def verify_trace(
    steps: Iterable[TraceStep],
    frames: list[Frame],
    budget: Budget | None = None,
) -> Optional[StepFailure]:
    for step in steps:
        failure = verify_step(step, frames, budget)
        if failure is not None:
            return failure
    return None


def _show(val: Valuation, frame: Frame) -> str:
    alg = frame.algebra
    parts = []
    for atom, row in sorted(val.items(), key=lambda kv: str(kv[0])):
        parts.append(f"{atom}=({','.join(alg.element_name(v) for v in row)})")
    return "{" + ", ".join(parts) + "}"
