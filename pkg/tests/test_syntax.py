import random

import pytest

from epscalc import (
    And, Eps, Eq, Implies, Not, ParseError, SignatureError, Var, Zero,
    bforall, eps, exists, forall, numeral, parse_formula, parse_proof,
    parse_term, succ, to_text,
)
from epscalc.syntax import (
    App, BVar, Num, Signature, Succ, closed_eps_subterms, closed_subterms,
    format_proof, free_vars, instantiate, is_closed, is_quantifier_free,
    subst_free,
)
import helpers


def test_numerals_are_canonical():
    assert succ(succ(Zero)) == Num(2)
    assert parse_term("S(S(0))") == Num(2)
    assert parse_term("2") == Num(2)
    assert succ(Var("x")) == Succ(Var("x"))
    assert succ(succ(Var("x"))) == Succ(Succ(Var("x")))


def test_parse_term_examples(sig):
    assert parse_term("S(S(0))") == Num(2)
    e = parse_term("eps x. x = S(0)")
    assert e == Eps(Eq(BVar(0), Num(1)))
    with pytest.raises(ParseError):
        parse_term("plus(0)", sig)
    with pytest.raises(ParseError):
        parse_term("unknownfn(0)", sig)
    with pytest.raises(ParseError):
        parse_term("S(0")


def test_parse_formula_examples(sig):
    assert parse_formula("0 = S(0)") == Eq(Zero, Num(1))
    f = parse_formula("all x. ex y. lt(x, y) = 1", sig)
    assert f == forall("x", exists("y", Eq(App("lt", (Var("x"), Var("y"))), Num(1))))
    g = parse_formula("all x < S(0). x = 0")
    assert g == bforall("x", Num(1), Eq(Var("x"), Zero))


def test_precedence_and_associativity():
    f = parse_formula("not 0 = 0 and 0 = 0 or 0 = 0 -> 0 = 0 -> 0 = 0")
    a = Eq(Zero, Zero)
    from epscalc import Or
    assert f == Implies(Or(And(Not(a), a), a), Implies(a, a))


def test_print_examples():
    assert to_text(Num(1)) == "S(0)"
    assert to_text(eps("x", Eq(Var("x"), Zero))) == "eps x. x = 0"
    assert to_text(numeral(123456789)) == "123456789"


def test_alpha_normalization_makes_binders_structural():
    a = eps("x", Eq(Var("x"), Num(1)))
    b = eps("y", Eq(Var("y"), Num(1)))
    assert a == b
    assert hash(a) == hash(b)
    assert to_text(a) == to_text(b)


def test_eps_in_formula_spec_reading(sig):
    # the unparenthesized form binds the first equation into the eps body
    f = parse_formula("eps x. x = S(0) = S(0)", sig)
    e = parse_term("eps x. x = S(0)", sig)
    assert f == Eq(e, Num(1))


def test_round_trip_random_formulas():
    rng = random.Random(20250809)
    for _ in range(1000):
        f = helpers.rand_formula(rng, 4, ["x"])
        assert parse_formula(to_text(f)) == f


def test_round_trip_random_terms():
    rng = random.Random(20250810)
    for _ in range(500):
        t = helpers.rand_term(rng, 4, ["x"])
        assert parse_term(to_text(t)) == t


def test_qf_stable_under_substitution():
    rng = random.Random(3)
    for _ in range(200):
        f = helpers.rand_formula(rng, 3, ["x"])
        qf = is_quantifier_free(f)
        g = subst_free(f, "x", numeral(4))
        assert is_quantifier_free(g) == qf


def test_free_vars_and_closedness():
    f = parse_formula("all x. lt(x, y) = 1")
    assert free_vars(f) == {"y"}
    assert not is_closed(f)
    assert is_closed(parse_formula("all x. lt(x, S(x)) = 1"))


def test_closed_subterm_collection():
    f = parse_formula("plus(S(0), x) = (eps y. y = S(S(0)))")
    closed = closed_subterms(f)
    assert Num(1) in closed and Num(2) in closed
    assert Var("x") not in closed
    es = closed_eps_subterms(f)
    assert es == [parse_term("eps y. y = S(S(0))")]


def test_instantiate_shifts_correctly():
    # substituting a term with its own binder under a second binder
    inner = eps("y", Eq(Var("y"), Var("x")))
    f = forall("x", Eq(inner, Var("x")))
    g = instantiate(f.body, Num(3))
    assert g == Eq(eps("y", Eq(Var("y"), Num(3))), Num(3))


def test_signature_parsing_and_validation(sig):
    assert sig.arity("plus") == 2
    assert "pair" in sig
    with pytest.raises(SignatureError):
        Signature.parse("f/2: f(x, x) = x")
    with pytest.raises(SignatureError):
        Signature.parse("f/1: f(0) = g(0) ; f(S(x)) = f(x)")
    with pytest.raises(SignatureError):
        Signature.parse("f/1: f(0) = 0 ; f(S(x)) = f(S(x))")
    round_tripped = Signature.parse(sig.dump())
    assert round_tripped.dump() == sig.dump()


def test_signature_rejects_eps():
    with pytest.raises(SignatureError):
        Signature.parse("f/1: f(x) = eps y. y = x")


def test_proof_file_round_trip(sig, axioms, demo_dir):
    text = (demo_dir / "sigma1.prf").read_text()
    proof = parse_proof(text, sig)
    assert format_proof(proof) == text
    assert parse_proof(format_proof(proof), sig) == proof


def test_proof_file_errors(sig):
    with pytest.raises(ParseError):
        parse_proof("1 | 0 = 0 | nonsense", sig)
    with pytest.raises(ParseError):
        parse_proof("2 | 0 = 0 | identity", sig)  # wrong index
    with pytest.raises(ParseError):
        parse_proof("1 | 0 = 0 | critical S(0)", sig)
