"""Witness extraction: from an epsilon proof of A(e) to a numeral instance.

Given an accepted proof whose final line asserts A(e) for a designated
epsilon term e = eps x. A(x), build the substitution problem from the
proof's lines, run the solver, and read off n = assignment(e).  The
instance A(n) is then true, and when it is epsilon-free a formal proof
of it is generated and checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .epsilonizer import critical_instances
from .evaluator import Assignment, eval_qf, DEFAULT_BUDGET
from .kernel import check_eps_proof, prove_true_pr_sentence
from .solver import Problem, SolveTrace, solve, DEFAULT_MAX_STEPS
from .syntax import (
    Eps, EpsProof, NonLogicalAxiom, Signature, _dangling, _map_terms,
    _term_map, closed_eps_subterms, free_vars, instantiate, numeral, to_text,
)


class ExtractionError(Exception):
    pass


class SolverNonTermination(ExtractionError):
    def __init__(self, trace: SolveTrace):
        self.trace = trace
        super().__init__(f"substitution procedure gave up after {trace.step_count} step(s)")


@dataclass
class WitnessResult:
    witness: int
    instance: object                     # the formula A(n)
    instance_proof: Optional[EpsProof]   # None when A(n) kept epsilon terms
    note: str = ""


def proof_problem(proof: EpsProof, axioms: Sequence) -> Problem:
    """The solver problem a proof induces: its non-logical axiom lines plus
    every critical instance generated from its lines."""
    lines = [ln.formula for ln in proof.lines]
    used_axioms = []
    seen = set()
    for ln in proof.lines:
        if isinstance(ln.justification, NonLogicalAxiom):
            f = ln.formula
            if f not in seen:
                seen.add(f)
                used_axioms.append(f)
    return Problem.make(used_axioms, critical_instances(lines))


def extract_witness(proof: EpsProof, eps_term: Eps, sig: Signature,
                    axioms: Sequence, max_steps: int = DEFAULT_MAX_STEPS,
                    budget: int = DEFAULT_BUDGET) -> WitnessResult:
    """Witness for the existential statement proved by an epsilon proof.

    The proof's final line must be A(e) for the designated e = eps x. A;
    several epsilon terms can occur in one line, so the intended one is
    an explicit input rather than inferred.
    """
    if not isinstance(eps_term, Eps):
        raise ExtractionError("designated term must be an epsilon term")
    verdict = check_eps_proof(proof, sig, axioms)
    if not verdict:
        raise ExtractionError(
            f"proof rejected at line {verdict.line}: {verdict.reason}")
    expected = instantiate(eps_term.body, eps_term)
    if proof.final() != expected:
        raise ExtractionError(
            f"final line is not the designated shape {to_text(expected)}")

    problem = proof_problem(proof, axioms)
    result = solve(problem, sig, max_steps, budget)
    if not result.ok:
        raise SolverNonTermination(result.trace)
    assignment = result.assignment
    n = assignment.value(eps_term)
    instance = instantiate(eps_term.body, numeral(n))
    if not eval_qf(instance, sig, assignment, budget):
        raise ExtractionError("solver produced a non-witness; this is a bug")

    remaining = closed_eps_subterms(instance)
    note = ""
    if remaining:
        # The minimal claim stops at the numeral; going on to a formal
        # instance proof needs the remaining epsilon terms replaced by
        # their solved values as well (the stronger reading).
        instance = _strip_eps(instance, assignment)
        note = "nested epsilon terms instantiated from the solver assignment"
        if closed_eps_subterms(instance):
            return WitnessResult(n, instance, None,
                                 "instance still contains epsilon terms")
    if not eval_qf(instance, sig, Assignment(), budget):
        raise ExtractionError("instantiated instance is not true; this is a bug")
    instance_proof = prove_true_pr_sentence(instance, sig, axioms, budget)
    return WitnessResult(n, instance, instance_proof, note)


def _strip_eps(f, assignment: Assignment):
    """Replace maximal closed epsilon subterms by their assigned numerals;
    epsilon terms nested inside a replaced one disappear with it."""

    def go(t, depth):
        if isinstance(t, Eps) and _dangling(t, 0) == 0 and not free_vars(t):
            return numeral(assignment.value(t))
        return _term_map(t, go, depth)

    return _map_terms(f, go, 0)
