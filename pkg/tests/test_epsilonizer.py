import random

import pytest

from epscalc import (
    Assignment, Eps, Not, critical_formula, critical_instances,
    epsilon_translate, eval_qf, least_witness, numeral, parse_formula,
    parse_term, rank, rewrite_axiom, subst_free, to_text,
)
from epscalc.syntax import (
    bind, closed_eps_subterms, instantiate, is_closed, is_quantifier_free,
)
import helpers


def test_translate_exists(sig):
    f = parse_formula("ex x. x = S(0)", sig)
    assert to_text(epsilon_translate(f)) == "(eps x. x = S(0)) = S(0)"


def test_translate_forall(sig):
    f = parse_formula("all x. lt(x, S(x)) = 1", sig)
    out = epsilon_translate(f)
    e = parse_term("eps x. not lt(x, S(x)) = S(0)", sig)
    body = parse_formula("lt(x, S(x)) = 1", sig)
    assert out == subst_free(body, "x", e)


def test_translate_nested_quantifiers(sig):
    # built by hand, innermost-out: first the inner existential, then the
    # outer universal over the partially translated body
    f = parse_formula("all x. ex y. lt(x, y) = 1", sig)
    inner_matrix = parse_formula("lt(x, y) = 1", sig)
    e_y = Eps(bind("y", inner_matrix))                      # eps y. lt(x, y) = 1
    b = subst_free(inner_matrix, "y", e_y)                  # lt(x, e_y(x)) = 1
    e_x = Eps(bind("x", Not(b)))
    expected = subst_free(b, "x", e_x)
    out = epsilon_translate(f)
    assert out == expected
    assert is_quantifier_free(out) and is_closed(out)
    ranks = sorted(rank(e) for e in closed_eps_subterms(out))
    assert ranks == [2, 3]  # epsilon terms embedded in epsilon terms


def test_bounded_quantifiers_pass_through(sig):
    f = parse_formula("all x < 5. ex y. lt(x, y) = 1", sig)
    out = epsilon_translate(f)
    assert is_quantifier_free(out)
    assert to_text(out).startswith("all x < S(S(S(S(S(0))))).")
    assert out.bound == numeral(5)


def test_idempotence_on_qf(sig):
    rng = random.Random(17)
    for _ in range(100):
        f = helpers.rand_pr_matrix(rng)
        assert epsilon_translate(f) == f


def test_rank_examples(sig):
    assert rank(parse_term("eps x. x = 0")) == 1
    assert rank(parse_term("eps x. (eps y. y = x) = x")) == 2
    rng = random.Random(23)
    for _ in range(100):
        t = helpers.rand_term(rng, 4, [])
        if isinstance(t, Eps):
            assert rank(t) >= 1


def test_rank_monotone_on_subterms(sig):
    e = parse_term("eps x. (eps y. plus(y, eps z. z = x) = x) = x")
    r = rank(e)
    for sub in closed_eps_subterms(e.body):
        assert rank(sub) < r


def test_critical_instances_examples(sig):
    line = parse_formula("(eps x. x = S(0)) = S(0)", sig)
    crits = critical_instances([line])
    texts = {to_text(c.formula) for c in crits}
    assert "S(0) = S(0) -> (eps x. x = S(0)) = S(0)" in texts
    assert critical_instances([parse_formula("0 = 0")]) == []
    # duplicates collapse
    assert len(critical_instances([line, line])) == len(crits)


def test_critical_instances_shape(sig):
    line = epsilon_translate(parse_formula("ex x. times(x, x) = 9", sig))
    for c in critical_instances([line]):
        f = c.formula
        assert is_closed(f) and is_quantifier_free(f)
        assert f == critical_formula(c.term, c.eps_term).formula
        assert f.rhs == instantiate(c.eps_term.body, c.eps_term)


def test_rewrite_axiom_is_translation(sig):
    f = parse_formula("all x. lt(x, S(x)) = 1", sig)
    assert rewrite_axiom(f) == epsilon_translate(f)
    with pytest.raises(ValueError):
        rewrite_axiom(parse_formula("lt(x, S(x)) = 1", sig))


def test_truth_preservation_under_witness(sig):
    rng = random.Random(29)
    for _ in range(50):
        a, w = helpers.rand_true_sigma1(rng, sig)
        sentence_matrix = bind("x", a)
        e = Eps(sentence_matrix)
        translated = instantiate(sentence_matrix, e)
        assert eval_qf(translated, sig, Assignment({e: w}))
