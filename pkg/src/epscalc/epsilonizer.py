"""Epsilon translation, epsilon-term rank, and critical axiom generation.

The translation removes unbounded quantifiers innermost-out:

    ex x. A   becomes  A'[eps x. A' / x]
    all x. A  becomes  A'[eps x. not A' / x]

where A' is the translated body.  Bounded quantifiers are decidable and
stay as they are.  The only quantificational principle left afterwards
is the critical axiom scheme  A(t) -> A(eps x. A(x)).
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    And, App, BoundedExists, BoundedForall, BVar, Eps, Eq, Exists, Forall,
    Implies, Formula, Not, Num, Or, Succ, Term, Var,
    closed_eps_subterms, closed_subterms, instantiate, is_closed,
    is_quantifier_free, iter_nodes, to_text,
)


@dataclass(frozen=True)
class CriticalFormula:
    """A(t) -> A(e) for a witness term t and epsilon term e = eps x. A(x)."""

    term: Term
    eps_term: Eps

    @property
    def formula(self) -> Implies:
        return Implies(instantiate(self.eps_term.body, self.term),
                       instantiate(self.eps_term.body, self.eps_term))


def critical_formula(t: Term, e: Eps) -> CriticalFormula:
    if not isinstance(e, Eps):
        raise TypeError("second argument must be an epsilon term")
    return CriticalFormula(t, e)


def _translate_term(t: Term) -> Term:
    if isinstance(t, (Num, Var, BVar)):
        return t
    if isinstance(t, Succ):
        return Succ(_translate_term(t.arg))
    if isinstance(t, App):
        return App(t.sym, tuple(_translate_term(a) for a in t.args))
    if isinstance(t, Eps):
        return Eps(epsilon_translate(t.body))
    raise TypeError(f"not a term: {t!r}")


def epsilon_translate(f: Formula) -> Formula:
    """Quantifier-free epsilon form of f, built innermost-out."""
    if isinstance(f, Eq):
        return Eq(_translate_term(f.lhs), _translate_term(f.rhs))
    if isinstance(f, Not):
        return Not(epsilon_translate(f.body))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(epsilon_translate(f.lhs), epsilon_translate(f.rhs))
    if isinstance(f, (BoundedForall, BoundedExists)):
        # decidable, so they need not be quantifiers
        return type(f)(_translate_term(f.bound), epsilon_translate(f.body))
    if isinstance(f, Exists):
        body = epsilon_translate(f.body)
        return instantiate(body, Eps(body))
    if isinstance(f, Forall):
        body = epsilon_translate(f.body)
        return instantiate(body, Eps(Not(body)))
    raise TypeError(f"not a formula: {f!r}")


def rewrite_axiom(f: Formula) -> Formula:
    """Epsilon form of a (possibly quantified) closed axiom."""
    if not is_closed(f):
        raise ValueError("axioms must be closed")
    return epsilon_translate(f)


def rank(e: Eps) -> int:
    """Nesting depth of epsilon terms: 1 + max rank of proper Eps subterms."""
    if not isinstance(e, Eps):
        raise TypeError("rank is defined on epsilon terms")
    deepest = 0
    for node in iter_nodes(e.body):
        if isinstance(node, Eps):
            deepest = max(deepest, rank(node))
    return 1 + deepest


def critical_instances(lines) -> list:
    """All critical formulas relevant to a list of closed QF formulas.

    Witness terms range over the closed terms occurring in the lines (a
    fixed proof only ever uses finitely many instances), epsilon terms
    over the closed epsilon subterms.  Output is deduplicated and sorted
    by printed text.
    """
    for f in lines:
        if not is_closed(f):
            raise ValueError(f"line is not closed: {to_text(f)}")
        if not is_quantifier_free(f):
            raise ValueError(f"line is not quantifier-free: {to_text(f)}")
    eps_terms = []
    seen_eps = set()
    terms = []
    seen_terms = set()
    for f in lines:
        for e in closed_eps_subterms(f):
            if e not in seen_eps:
                seen_eps.add(e)
                eps_terms.append(e)
        for t in closed_subterms(f):
            if t not in seen_terms:
                seen_terms.add(t)
                terms.append(t)
    out = {}
    for e in eps_terms:
        for t in terms:
            c = CriticalFormula(t, e)
            out.setdefault(to_text(c.formula), c)
    return [out[k] for k in sorted(out)]
