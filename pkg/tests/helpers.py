"""Seeded random generators shared by the test suite."""

from __future__ import annotations

import random

from epscalc import (
    And, Eq, Implies, Not, Or, ProofBuilder, TautConsequence, ProofLine,
    EpsProof, Eps, bexists, bforall, eps, exists, forall, instantiate,
    least_witness, numeral, subst_free, succ, to_text,
)
from epscalc.syntax import App, Num, Var, bind


NAMES = ["a", "b", "c", "d", "m", "n", "p", "q"]


def rand_term(rng: random.Random, depth: int, scope: list) -> object:
    """A term over variables in scope, arbitrary symbols, small numerals."""
    leaf = depth <= 0 or rng.random() < 0.35
    if leaf:
        if scope and rng.random() < 0.5:
            return Var(rng.choice(scope))
        return numeral(rng.randrange(0, 9))
    k = rng.random()
    if k < 0.3:
        return succ(rand_term(rng, depth - 1, scope))
    if k < 0.85:
        sym = rng.choice(["plus", "times", "monus", "f", "g"])
        arity = 2 if sym in ("plus", "times", "monus", "g") else 1
        return App(sym, tuple(rand_term(rng, depth - 1, scope) for _ in range(arity)))
    name = rng.choice([n for n in NAMES if n not in scope] or ["w"])
    return eps(name, rand_formula(rng, depth - 1, scope + [name]))


def rand_formula(rng: random.Random, depth: int, scope: list) -> object:
    """A formula over variables in scope, quantifiers included."""
    if depth <= 0 or rng.random() < 0.3:
        return Eq(rand_term(rng, depth - 1, scope), rand_term(rng, depth - 1, scope))
    k = rng.random()
    if k < 0.2:
        return Not(rand_formula(rng, depth - 1, scope))
    if k < 0.55:
        cls = rng.choice([And, Or, Implies])
        return cls(rand_formula(rng, depth - 1, scope),
                   rand_formula(rng, depth - 1, scope))
    name = rng.choice([n for n in NAMES if n not in scope] or ["w"])
    inner = rand_formula(rng, depth - 1, scope + [name])
    k = rng.random()
    if k < 0.25:
        return forall(name, inner)
    if k < 0.5:
        return exists(name, inner)
    bound = rand_term(rng, depth - 2, scope)
    if k < 0.75:
        return bforall(name, bound, inner)
    return bexists(name, bound, inner)


# -- generators over the default signature, for evaluation-level tests --

_PR_UNARY = ["pred", "sg", "nsg"]
_PR_BINARY = ["plus", "times", "monus"]


def rand_pr_term(rng: random.Random, depth: int, var: str) -> object:
    if depth <= 0 or rng.random() < 0.45:
        if rng.random() < 0.5:
            return Var(var)
        return numeral(rng.randrange(0, 13))
    if rng.random() < 0.3:
        return App(rng.choice(_PR_UNARY), (rand_pr_term(rng, depth - 1, var),))
    return App(rng.choice(_PR_BINARY),
               (rand_pr_term(rng, depth - 1, var), rand_pr_term(rng, depth - 1, var)))


def rand_pr_matrix(rng: random.Random, var: str = "x") -> object:
    """A quantifier-free PR formula in which var actually occurs."""
    from epscalc.syntax import free_vars

    while True:
        f = _rand_pr_matrix(rng, var)
        if free_vars(f) == {var}:
            return f


def _rand_pr_matrix(rng: random.Random, var: str) -> object:
    k = rng.random()
    if k < 0.55:
        sym = rng.choice(["eq", "lt", "le"])
        atom = Eq(App(sym, (rand_pr_term(rng, 2, var), rand_pr_term(rng, 2, var))),
                  numeral(1))
    else:
        atom = Eq(rand_pr_term(rng, 2, var), rand_pr_term(rng, 2, var))
    k = rng.random()
    if k < 0.6:
        return atom
    if k < 0.75:
        return Not(atom)
    other = _rand_pr_matrix(rng, var)
    return rng.choice([And, Or])(atom, other)


def rand_true_sigma1(rng: random.Random, sig, cap: int = 50):
    """(matrix with free x, least witness <= cap), rejection-sampled."""
    while True:
        a = rand_pr_matrix(rng)
        w = least_witness(a, sig, cap)
        if w is not None:
            return a, w


def rand_true_forall(rng: random.Random, sig, cap: int = 50):
    """A matrix whose universal closure is true below any bound we test."""
    while True:
        a = rand_pr_matrix(rng)
        if least_witness(Not(a), sig, cap) is None:
            return a


def sigma1_proof(matrix, sig, axioms, witness: int):
    """An epsilon proof of matrix[e/x] for e = eps x. matrix, via the
    instance at the witness and one critical axiom."""
    body = bind("x", matrix)
    e = Eps(body)
    builder = ProofBuilder(sig, axioms)
    i_inst = builder.prove(subst_free(matrix, "x", numeral(witness)), True)
    i_crit = builder.critical(numeral(witness), e)
    goal = instantiate(body, e)
    idx = builder.taut(goal, [i_inst, i_crit])
    if builder.lines[-1].formula != goal:
        builder.lines.append(ProofLine(goal, TautConsequence((idx,))))
    return builder.proof(), e


def rand_prop_formula(rng: random.Random, atoms: list, depth: int) -> object:
    if depth <= 0 or rng.random() < 0.35:
        return rng.choice(atoms)
    k = rng.random()
    if k < 0.25:
        return Not(rand_prop_formula(rng, atoms, depth - 1))
    cls = rng.choice([And, Or, Implies])
    return cls(rand_prop_formula(rng, atoms, depth - 1),
               rand_prop_formula(rng, atoms, depth - 1))
