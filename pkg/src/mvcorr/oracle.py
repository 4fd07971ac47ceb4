"""Exhaustive finite-frame correspondence checking.

The oracle enumerates every frame of the requested sizes (all accessibility
matrices over the algebra, in lexicographic order) plus optional seeded
random samples, and compares modal a-validity against first-order a-truth
at every state.  It returns either a pass report or the first
counterexample in enumeration order, never a silently partial verdict.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Optional

from .budget import Budget
from .errors import MvcorrError
from .fol import (
    CompiledFo,
    Fo,
    FoInterp,
    FoVar,
    Term,
    free_individual_symbols,
    has_pred_nodes,
    interp_for_frame,
)
from .heyting import HeytingAlgebra
from .randomgen import random_frame
from .semantics import Frame, valid_at
from .syntax import Formula, Inequality


def iter_frames(alg: HeytingAlgebra, size: int) -> Iterator[Frame]:
    """All frames with `size` states, lexicographic in the matrix entries."""
    states = tuple(f"w{i}" for i in range(size))
    for flat in product(range(alg.n), repeat=size * size):
        rel = tuple(
            tuple(flat[i * size + j] for j in range(size)) for i in range(size)
        )
        yield Frame(alg, states, rel)


def sample_frames(
    alg: HeytingAlgebra, size: int, count: int, seed: int
) -> list[Frame]:
    rng = random.Random(seed)
    return [random_frame(rng, alg, size) for _ in range(count)]


@dataclass
class Counterexample:
    frame: Frame
    state: int
    modal_verdict: bool
    fo_verdict: bool

    def describe(self) -> str:
        rel = [
            [self.frame.algebra.element_name(v) for v in row]
            for row in self.frame.rel
        ]
        return (
            f"state {self.frame.states[self.state]} of frame {rel}: "
            f"modal side {self.modal_verdict}, first-order side {self.fo_verdict}"
        )


@dataclass
class OracleReport:
    passed: bool
    frames_checked: int
    states_checked: int
    counterexample: Optional[Counterexample] = None

    def describe(self) -> str:
        if self.passed:
            return (
                f"PASS ({self.frames_checked} frames, "
                f"{self.states_checked} state checks)"
            )
        assert self.counterexample is not None
        return f"FAIL at {self.counterexample.describe()}"


def correspondence_oracle(
    alg: HeytingAlgebra,
    target: Formula | Inequality,
    a: int,
    alpha: Fo,
    sizes: Iterable[int],
    samples: int = 0,
    sample_size: int = 3,
    seed: int = 0,
    budget: Budget | None = None,
    free_var: Term = FoVar("x"),
    fo_threshold: int | None = None,
) -> OracleReport:
    """Check that `alpha[x := w]` tracks local a-validity of `target`.

    `fo_threshold` overrides the degree demanded of the first-order side;
    it defaults to `a` and is set to top for crisp formulas produced by
    translation pipelines.
    """
    if has_pred_nodes(alpha):
        raise MvcorrError("correspondent must not contain free predicate symbols")
    threshold = a if fo_threshold is None else fo_threshold
    budget = Budget() if budget is None else budget

    frames: list[Frame] = []
    for size in sizes:
        frames.extend(iter_frames(alg, size))
    if samples:
        frames.extend(sample_frames(alg, sample_size, samples, seed))

    states_checked = 0
    for idx, frame in enumerate(frames):
        interp = interp_for_frame(frame)
        checker = _LocalTruth(interp, alpha, free_var, budget)
        for w in range(frame.size):
            states_checked += 1
            modal = valid_at(frame, target, w, a, budget)
            fo = checker.holds(w, threshold)
            if modal != fo:
                return OracleReport(
                    False,
                    idx + 1,
                    states_checked,
                    Counterexample(frame, w, modal, fo),
                )
    return OracleReport(True, len(frames), states_checked)


class _LocalTruth:
    """a-truth of a one-free-variable condition, cached per frame."""

    def __init__(self, interp: FoInterp, alpha: Fo, free_var: Term,
                 budget: Budget | None):
        self.interp = interp
        self.free_var = free_var
        self.evaluator = CompiledFo(interp, alpha, budget)
        self.open_syms = sorted(
            (
                t
                for t in free_individual_symbols(alpha)
                if t != free_var and t not in interp.consts
            ),
            key=str,
        )

    def holds(self, w: int, threshold: int) -> bool:
        alg = self.interp.frame.algebra
        for combo in product(
            range(self.interp.frame.size), repeat=len(self.open_syms)
        ):
            env = {self.free_var: w}
            env.update(zip(self.open_syms, combo))
            if not alg.le(threshold, self.evaluator.value(env)):
                return False
        return True


def fo_agree(
    alg: HeytingAlgebra,
    alpha: Fo,
    beta: Fo,
    sizes: Iterable[int],
    threshold_alpha: int,
    threshold_beta: int,
    samples: int = 0,
    sample_size: int = 3,
    seed: int = 0,
    budget: Budget | None = None,
    free_var: Term = FoVar("x"),
) -> OracleReport:
    """Pointwise agreement of two local first-order conditions."""
    budget = Budget() if budget is None else budget
    frames: list[Frame] = []
    for size in sizes:
        frames.extend(iter_frames(alg, size))
    if samples:
        frames.extend(sample_frames(alg, sample_size, samples, seed))
    states_checked = 0
    for idx, frame in enumerate(frames):
        interp = interp_for_frame(frame)
        ca = _LocalTruth(interp, alpha, free_var, budget)
        cb = _LocalTruth(interp, beta, free_var, budget)
        for w in range(frame.size):
            states_checked += 1
            va = ca.holds(w, threshold_alpha)
            vb = cb.holds(w, threshold_beta)
            if va != vb:
                return OracleReport(
                    False, idx + 1, states_checked, Counterexample(frame, w, va, vb)
                )
    return OracleReport(True, len(frames), states_checked)
