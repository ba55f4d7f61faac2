"""Epsilon-calculus toolkit: quantifier elimination, the substitution
procedure, witness extraction, and the arithmetized star sentences."""

from .syntax import (
    App, BoundedExists, BoundedForall, BVar, CriticalAxiom, Eps, EpsProof,
    Eq, Exists, Forall, IdentityAxiom, Implies, NonLogicalAxiom, Not, Num,
    Or, And, ParseError, ProofLine, RecursionAxiom, Signature, SignatureError,
    Succ, TautConsequence, Var, Zero, bexists, bforall, eps, exists, forall,
    format_proof, instantiate, numeral, parse_formula, parse_proof,
    parse_term, prelude, subst_free, succ, to_text,
)
from .evaluator import (
    Assignment, BudgetExceeded, DEFAULT_BUDGET, EvalError, eval_qf,
    eval_term, least_witness,
)
from .epsilonizer import (
    CriticalFormula, critical_formula, critical_instances, epsilon_translate,
    rank, rewrite_axiom,
)
from .solver import (
    DEFAULT_MAX_STEPS, FalseAxiom, Problem, SolveResult, SolveStep,
    SolveTrace, solve, verify,
)
from .kernel import (
    AtomLimitExceeded, NotTrue, ProofBuilder, ProofConstructionError,
    Verdict, check_eps_proof, default_axioms, is_taut_consequence,
    prove_true_pr_sentence, successor_axioms,
)
from .extractor import (
    ExtractionError, SolverNonTermination, WitnessResult, extract_witness,
    proof_problem,
)
from .goedelizer import (
    DecodeError, InstanceReport, Pi2Shape, StarFormula, build_doublestar,
    build_star, build_triplestar, check_instances, contract_quantifiers,
    decode, encode, example_pi2_proof, example_pi2_sentence, pi2_recognizer,
    proof_pred, star_matrix_instance, untranslate_pi2,
)

__version__ = "0.1.0"
