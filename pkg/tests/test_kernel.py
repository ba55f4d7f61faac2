import itertools
import random

import pytest

from epscalc import (
    And, Assignment, AtomLimitExceeded, CriticalAxiom, Eps, EpsProof, Eq,
    IdentityAxiom, Implies, NonLogicalAxiom, Not, NotTrue, Or, ProofBuilder,
    ProofLine, RecursionAxiom, TautConsequence, check_eps_proof,
    critical_formula, default_axioms, eval_qf, is_taut_consequence, numeral,
    parse_formula, parse_term, prove_true_pr_sentence, subst_free,
    successor_axioms, to_text,
)
from epscalc.epsilonizer import epsilon_translate
from epscalc.syntax import BoundedExists, BoundedForall, Num, bind, instantiate
import helpers


# -- independent oracle: valuation enumeration with recursive evaluation --

def _oracle_atoms(f, acc):
    if isinstance(f, (Eq, BoundedForall, BoundedExists)):
        if f not in acc:
            acc.append(f)
    elif isinstance(f, Not):
        _oracle_atoms(f.body, acc)
    elif isinstance(f, (And, Or, Implies)):
        _oracle_atoms(f.lhs, acc)
        _oracle_atoms(f.rhs, acc)
    else:
        raise TypeError(f)
    return acc


def _oracle_eval(f, env):
    if isinstance(f, (Eq, BoundedForall, BoundedExists)):
        return env[f]
    if isinstance(f, Not):
        return not _oracle_eval(f.body, env)
    if isinstance(f, And):
        return _oracle_eval(f.lhs, env) and _oracle_eval(f.rhs, env)
    if isinstance(f, Or):
        return _oracle_eval(f.lhs, env) or _oracle_eval(f.rhs, env)
    if isinstance(f, Implies):
        return (not _oracle_eval(f.lhs, env)) or _oracle_eval(f.rhs, env)
    raise TypeError(f)


def taut_oracle(premises, conclusion):
    atoms = []
    for f in list(premises) + [conclusion]:
        _oracle_atoms(f, atoms)
    for values in itertools.product([False, True], repeat=len(atoms)):
        env = dict(zip(atoms, values))
        if all(_oracle_eval(p, env) for p in premises) \
                and not _oracle_eval(conclusion, env):
            return False
    return True


ATOM_POOL = [Eq(numeral(i), numeral(j)) for i in range(3) for j in range(3)]


def test_taut_examples():
    a = parse_formula("0 = 0")
    b = parse_formula("S(0) = S(0)")
    assert is_taut_consequence([a, Implies(a, b)], b)
    assert is_taut_consequence([], Or(a, Not(a)))
    assert not is_taut_consequence([], a)


def test_taut_agrees_with_oracle():
    rng = random.Random(59)
    for _ in range(300):
        atoms = rng.sample(ATOM_POOL, rng.randrange(1, 6))
        premises = [helpers.rand_prop_formula(rng, atoms, 3)
                    for _ in range(rng.randrange(0, 3))]
        conclusion = helpers.rand_prop_formula(rng, atoms, 3)
        assert is_taut_consequence(premises, conclusion) == \
            taut_oracle(premises, conclusion)


def test_taut_atom_cap():
    atoms = [Eq(numeral(i), numeral(i)) for i in range(30)]
    big = atoms[0]
    for a in atoms[1:]:
        big = And(big, a)
    with pytest.raises(AtomLimitExceeded):
        is_taut_consequence([], big)


def test_bounded_atoms_are_opaque():
    bf = parse_formula("all x < 5. x = x")
    inside = parse_formula("0 = 0")
    # the bounded formula is an atom; its instances do not follow
    assert not is_taut_consequence([bf], inside)


def test_check_accepts_identity_line(sig, axioms):
    p = EpsProof((ProofLine(parse_formula("0 = 0"), IdentityAxiom()),))
    assert check_eps_proof(p, sig, axioms)


def test_check_recursion_and_taut(sig, axioms):
    f1 = parse_formula("plus(0, 0) = 0", sig)
    f2 = parse_formula("plus(0, 0) = 0 or 0 = S(0)", sig)
    p = EpsProof((
        ProofLine(f1, RecursionAxiom()),
        ProofLine(f2, TautConsequence((0,))),
    ))
    assert check_eps_proof(p, sig, axioms)


def test_check_rejects_forward_reference(sig, axioms):
    f = parse_formula("0 = 0")
    p = EpsProof((
        ProofLine(f, IdentityAxiom()),
        ProofLine(f, IdentityAxiom()),
        ProofLine(f, TautConsequence((4,))),
    ))
    v = check_eps_proof(p, sig, axioms)
    assert not v and v.line == 3 and v.reason == "forward-reference"


def test_check_rejects_each_bad_shape(sig, axioms):
    bad_rec = EpsProof((ProofLine(parse_formula("plus(0, 0) = S(0)", sig),
                                  RecursionAxiom()),))
    assert check_eps_proof(bad_rec, sig, axioms).reason == "bad-recursion-instance"

    bad_id = EpsProof((ProofLine(parse_formula("0 = S(0)"), IdentityAxiom()),))
    assert check_eps_proof(bad_id, sig, axioms).reason == "bad-identity-instance"

    e = parse_term("eps x. x = S(0)", sig)
    wrong = parse_formula("0 = 0 -> (eps x. x = S(0)) = S(0)", sig)
    bad_crit = EpsProof((ProofLine(wrong, CriticalAxiom(numeral(1), e)),))
    assert check_eps_proof(bad_crit, sig, axioms).reason == "bad-critical-instance"

    bad_ax = EpsProof((ProofLine(parse_formula("0 = 0"), NonLogicalAxiom(0)),))
    assert check_eps_proof(bad_ax, sig, axioms).reason == "axiom-mismatch"

    out_of_range = EpsProof((ProofLine(parse_formula("0 = 0"), NonLogicalAxiom(9)),))
    assert check_eps_proof(out_of_range, sig, axioms).reason == "bad-axiom-index"

    open_line = EpsProof((ProofLine(parse_formula("x = x"), IdentityAxiom()),))
    assert check_eps_proof(open_line, sig, axioms).reason == "not-closed"

    quantified = EpsProof((ProofLine(parse_formula("all x. x = x"), IdentityAxiom()),))
    assert check_eps_proof(quantified, sig, axioms).reason == "not-quantifier-free"

    not_taut = EpsProof((
        ProofLine(parse_formula("0 = 0"), IdentityAxiom()),
        ProofLine(parse_formula("0 = S(0)"), TautConsequence((0,))),
    ))
    assert check_eps_proof(not_taut, sig, axioms).reason == "not-tautological-consequence"


def test_critical_axiom_line(sig, axioms):
    e = parse_term("eps x. x = S(0)", sig)
    c = critical_formula(numeral(1), e)
    p = EpsProof((ProofLine(c.formula, CriticalAxiom(numeral(1), e)),))
    assert check_eps_proof(p, sig, axioms)


def test_identity_congruence_shapes(sig, axioms):
    lines = [
        parse_formula("S(0) = S(0)"),
        parse_formula("0 = S(0) -> S(0) = S(S(0))"),
        parse_formula("0 = S(0) -> (0 = 0 -> S(0) = 0)"),
        parse_formula("plus(0, 0) = 0 -> times(plus(0, 0), 0) = times(0, 0)", sig),
    ]
    p = EpsProof(tuple(ProofLine(f, IdentityAxiom()) for f in lines))
    assert check_eps_proof(p, sig, axioms)


def test_identity_does_not_rewrite_inside_eps(sig, axioms):
    # replacing inside an epsilon term would change which name it is
    f = parse_formula(
        "0 = plus(0, 0) -> (eps x. x = 0) = (eps x. x = plus(0, 0))", sig)
    p = EpsProof((ProofLine(f, IdentityAxiom()),))
    assert check_eps_proof(p, sig, axioms).reason == "bad-identity-instance"


def test_successor_axiom_instances(sig, axioms):
    b = ProofBuilder(sig, axioms)
    i = b.p1_instance(numeral(4))
    j = b.p2_instance(numeral(2), numeral(5))
    k = b.numerals_distinct(3, 7)
    proof = b.proof()
    assert check_eps_proof(proof, sig, axioms)
    assert proof.lines[i].formula == parse_formula("not S(S(S(S(S(0))))) = 0")
    assert proof.lines[k].formula == Not(Eq(numeral(3), numeral(7)))


def test_prove_true_examples(sig, axioms):
    one_line = prove_true_pr_sentence(parse_formula("S(0) = S(0)"), sig, axioms)
    assert len(one_line.lines) == 1
    plus_proof = prove_true_pr_sentence(
        parse_formula("plus(S(0), S(0)) = S(S(0))", sig), sig, axioms)
    assert check_eps_proof(plus_proof, sig, axioms)
    with pytest.raises(NotTrue):
        prove_true_pr_sentence(parse_formula("0 = S(0)"), sig, axioms)
    with pytest.raises(ValueError):
        prove_true_pr_sentence(parse_formula("(eps x. x = 0) = 0", sig), sig, axioms)


def test_prove_true_round_trip_random(sig, axioms):
    rng = random.Random(61)
    proved = 0
    for _ in range(40):
        a = helpers.rand_pr_matrix(rng)
        f = subst_free(a, "x", numeral(rng.randrange(0, 9)))
        if not eval_qf(f, sig):
            f = Not(f)
        proof = prove_true_pr_sentence(f, sig, axioms)
        assert proof.final() == f
        assert check_eps_proof(proof, sig, axioms)
        proved += 1
    assert proved == 40


def test_prove_true_bounded_sentences(sig, axioms):
    for text in ["all x < 4. lt(x, 4) = 1",
                 "ex x < 9. eq(times(x, x), 16) = 1",
                 "not (ex x < 3. eq(x, 5) = 1)",
                 "not (all x < 4. lt(x, 2) = 1)",
                 "all x < 0. 0 = S(0)",
                 "all x < plus(S(0), S(0)). lt(x, S(S(0))) = 1"]:
        f = parse_formula(text, sig)
        proof = prove_true_pr_sentence(f, sig, axioms)
        v = check_eps_proof(proof, sig, axioms)
        assert v, (text, v.reason, v.line)
        assert proof.final() == f


def test_soundness_under_interpretation(sig, axioms):
    # an accepted proof all of whose axiom, recursion, identity and
    # critical lines are true under an assignment has every line true
    rng = random.Random(67)
    for _ in range(10):
        a, w = helpers.rand_true_sigma1(rng, sig, cap=20)
        proof, e = helpers.sigma1_proof(a, sig, axioms, w)
        assert check_eps_proof(proof, sig, axioms)
        assignment = Assignment({e: w})
        base_true = all(
            eval_qf(ln.formula, sig, assignment) for ln in proof.lines
            if not isinstance(ln.justification, TautConsequence))
        if base_true:
            for ln in proof.lines:
                assert eval_qf(ln.formula, sig, assignment)


def test_default_axioms_are_translations(sig):
    quantified = successor_axioms()
    translated = default_axioms()
    assert [epsilon_translate(q) for q in quantified] == translated
    for ax in translated:
        assert to_text(ax)  # printable, hence well-formed
