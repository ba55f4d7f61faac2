"""The substitution procedure: find epsilon-term values making a proof true.

Start with every epsilon term set to zero.  While some critical formula
A(t) -> A(e) is false, pick the one whose epsilon term has minimal rank
(ties broken by printed text), set e to the least n making A(n) true —
the search is bounded by the value of t, which must be a witness since
A(t) is true and A(e) is false — and reset every assigned epsilon term
of strictly greater rank back to zero.  Repeat until everything is true
or the step budget runs out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .epsilonizer import CriticalFormula, rank
from .evaluator import Assignment, eval_qf, eval_term, DEFAULT_BUDGET
from .syntax import Eps, Formula, Signature, closed_eps_subterms, instantiate, numeral, to_text

DEFAULT_MAX_STEPS = 10 ** 6


class FalseAxiom(Exception):
    """An epsilon-free axiom is false: no assignment can fix it."""

    def __init__(self, formula):
        self.formula = formula
        super().__init__(f"epsilon-free axiom is false: {to_text(formula)}")


@dataclass(frozen=True)
class SolveStep:
    violated: CriticalFormula
    eps_term: Eps
    old: int
    new: int
    resets: tuple


@dataclass
class SolveTrace:
    steps: List[SolveStep] = field(default_factory=list)
    terminated: bool = False
    note: str = ""

    @property
    def step_count(self) -> int:
        return len(self.steps)

    def dump(self) -> str:
        """One step per line: step number, eps term, old->new, resets."""
        out = []
        for i, s in enumerate(self.steps, 1):
            resets = ", ".join(to_text(e) for e in s.resets) if s.resets else "-"
            out.append(f"{i}\t{to_text(s.eps_term)}\t{s.old}->{s.new}\tresets: {resets}")
        status = "terminated" if self.terminated else f"gave up ({self.note or 'step budget'})"
        out.append(f"# {status} after {self.step_count} step(s)")
        return "\n".join(out) + "\n"


@dataclass
class SolveResult:
    assignment: Optional[Assignment]
    trace: SolveTrace

    @property
    def ok(self) -> bool:
        return self.assignment is not None


@dataclass(frozen=True)
class Problem:
    """Closed QF axioms plus critical formulas, the solver's input."""

    axioms: tuple
    criticals: tuple

    @staticmethod
    def make(axioms, criticals) -> "Problem":
        return Problem(tuple(axioms), tuple(criticals))

    def formulas(self):
        return list(self.axioms) + [c.formula for c in self.criticals]


def verify(assignment: Assignment, problem: Problem, sig: Signature,
           budget: int = DEFAULT_BUDGET) -> bool:
    """True iff every axiom and critical formula holds under the assignment."""
    return all(eval_qf(f, sig, assignment, budget) for f in problem.formulas())


def _has_eps(f: Formula) -> bool:
    return bool(closed_eps_subterms(f))


def solve(problem: Problem, sig: Signature,
          max_steps: int = DEFAULT_MAX_STEPS,
          budget: int = DEFAULT_BUDGET) -> SolveResult:
    """Run the substitution procedure from the all-zero assignment.

    Returns a SolveResult whose assignment is None when the step budget
    was exhausted (the trace is kept either way).  Raises FalseAxiom for
    an epsilon-free false axiom.
    """
    for ax in problem.axioms:
        if not _has_eps(ax) and not eval_qf(ax, sig, Assignment(), budget):
            raise FalseAxiom(ax)

    assignment = Assignment()
    trace = SolveTrace()
    # deterministic candidate order: rank of the epsilon term, then text
    ordered = sorted(problem.criticals,
                     key=lambda c: (rank(c.eps_term), to_text(c.formula)))
    for _ in range(max_steps + 1):
        false_axiom = next(
            (ax for ax in problem.axioms if not eval_qf(ax, sig, assignment, budget)),
            None)
        violated = next(
            (c for c in ordered if not eval_qf(c.formula, sig, assignment, budget)),
            None)
        if violated is None:
            if false_axiom is None:
                trace.terminated = True
                return SolveResult(assignment, trace)
            # Only critical formulas drive updates; a false epsilon-bearing
            # axiom with nothing left to repair cannot be fixed by this
            # procedure.
            trace.note = "false axiom with no violated critical formula"
            return SolveResult(None, trace)
        if trace.step_count >= max_steps:
            trace.note = "max steps exhausted"
            return SolveResult(None, trace)

        e = violated.eps_term
        cap = eval_term(violated.term, sig, assignment, budget)
        new = None
        for n in range(cap + 1):
            if eval_qf(instantiate(e.body, numeral(n)), sig, assignment, budget):
                new = n
                break
        if new is None:
            # cannot happen for a genuinely false critical formula: A(t)
            # is true and value(t) <= cap
            trace.note = "no witness below the violating term"
            return SolveResult(None, trace)
        old = assignment.value(e)
        e_rank = rank(e)
        resets = tuple(sorted(
            (x for x in assignment.assigned() if rank(x) > e_rank),
            key=to_text))
        for x in resets:
            assignment.set(x, 0)
        assignment.set(e, new)
        trace.steps.append(SolveStep(violated, e, old, new, resets))
    trace.note = "max steps exhausted"
    return SolveResult(None, trace)
