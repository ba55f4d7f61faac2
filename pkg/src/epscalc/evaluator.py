"""Decidable evaluation of closed terms and quantifier-free formulas.

Evaluation happens in the standard model relative to an assignment of
natural numbers to closed epsilon terms (unmapped terms default to 0).
Epsilon terms are opaque names: evaluation never looks inside their
bodies, it just replaces each maximal closed epsilon subterm by its
assigned value.  Bounded quantifiers are evaluated by finite
enumeration below the value of their bound.
"""

from __future__ import annotations

from typing import Dict, Optional

from .syntax import (
    And, App, BoundedExists, BoundedForall, BVar, Eps, Eq, Exists, Forall,
    Implies, Not, Num, Or, Signature, Succ, Var,
    free_vars, instantiate, numeral, subst_free,
)

DEFAULT_BUDGET = 10 ** 8


class BudgetExceeded(Exception):
    """The step budget ran out; a desk-scale limit, not a semantic failure."""


class EvalError(Exception):
    """Evaluation applied to something outside its domain (open term, quantifier)."""


class Assignment:
    """Finite map from closed epsilon terms to naturals, defaulting to 0."""

    def __init__(self, values: Optional[Dict[Eps, int]] = None):
        self._values: Dict[Eps, int] = dict(values) if values else {}

    def value(self, e: Eps) -> int:
        return self._values.get(e, 0)

    def set(self, e: Eps, n: int) -> None:
        if n == 0:
            self._values.pop(e, None)
        else:
            self._values[e] = n

    def assigned(self):
        """Eps terms currently holding a nonzero value."""
        return list(self._values)

    def copy(self) -> "Assignment":
        return Assignment(self._values)

    def items(self):
        return list(self._values.items())

    def __eq__(self, other):
        return isinstance(other, Assignment) and self._values == other._values

    def __repr__(self):
        return f"Assignment({self._values!r})"


EMPTY = Assignment()


class _Context:
    """Per-call evaluation state: memo table and step budget."""

    def __init__(self, sig: Signature, assignment: Assignment, budget: int):
        self.sig = sig
        self.assignment = assignment
        self.remaining = budget
        self.memo: Dict[tuple, int] = {}

    def tick(self, n: int = 1):
        self.remaining -= n
        if self.remaining < 0:
            raise BudgetExceeded("evaluation step budget exceeded")

    def term(self, t) -> int:
        if isinstance(t, Num):
            return t.value
        if isinstance(t, Succ):
            return self.term(t.arg) + 1
        if isinstance(t, Eps):
            return self.assignment.value(t)
        if isinstance(t, App):
            args = tuple(self.term(a) for a in t.args)
            return self.apply(t.sym, args)
        if isinstance(t, (Var, BVar)):
            raise EvalError(f"cannot evaluate open term (variable {t!r})")
        raise EvalError(f"not a term: {t!r}")

    def apply(self, sym: str, args: tuple) -> int:
        decl = self.sig.lookup(sym)
        if len(args) != decl.arity:
            raise EvalError(f"{sym} expects {decl.arity} arguments, got {len(args)}")
        key = (sym, args)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.tick()
        if decl.kind == "opaque":
            val = decl.fn(*args)
        elif decl.kind == "explicit":
            eq = decl.equations[0]
            env = {v.name: n for v, n in zip(eq.lhs.args, args)}
            val = self.rhs(eq.rhs, env)
        else:
            val = self._apply_recursive(decl, args)
        self.memo[key] = val
        return val

    def _apply_recursive(self, decl, args: tuple) -> int:
        # Fill the memo table bottom-up along the recursion argument so the
        # step equation's self-call always hits the table; avoids deep
        # Python recursion for large arguments.
        base_eq, step_eq = decl.equations
        r = decl.recursion_pos
        n = args[r]
        env = {v.name: a for i, (v, a) in enumerate(zip(base_eq.lhs.args, args)) if i != r}
        lo = n
        while lo > 0 and (decl.name, args[:r] + (lo - 1,) + args[r + 1:]) not in self.memo:
            lo -= 1
        if lo == 0:
            acc = self.rhs(base_eq.rhs, env)
            self.memo[(decl.name, args[:r] + (0,) + args[r + 1:])] = acc
            lo = 1
            self.tick()
        step_env_base = {
            v.name: a for i, (v, a) in enumerate(zip(step_eq.lhs.args, args)) if i != r}
        rec_name = step_eq.lhs.args[r].arg.name
        for k in range(lo, n + 1):
            env2 = dict(step_env_base)
            env2[rec_name] = k - 1
            val = self.rhs(step_eq.rhs, env2)
            self.memo[(decl.name, args[:r] + (k,) + args[r + 1:])] = val
            self.tick()
        return self.memo[(decl.name, args)]

    def rhs(self, t, env: Dict[str, int]) -> int:
        if isinstance(t, Num):
            return t.value
        if isinstance(t, Succ):
            return self.rhs(t.arg, env) + 1
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, App):
            return self.apply(t.sym, tuple(self.rhs(a, env) for a in t.args))
        raise EvalError(f"unexpected term in definition: {t!r}")

    def formula(self, f) -> bool:
        if isinstance(f, Eq):
            return self.term(f.lhs) == self.term(f.rhs)
        if isinstance(f, Not):
            return not self.formula(f.body)
        if isinstance(f, And):
            return self.formula(f.lhs) and self.formula(f.rhs)
        if isinstance(f, Or):
            return self.formula(f.lhs) or self.formula(f.rhs)
        if isinstance(f, Implies):
            return (not self.formula(f.lhs)) or self.formula(f.rhs)
        if isinstance(f, BoundedForall):
            b = self.term(f.bound)
            return all(self.formula(instantiate(f.body, numeral(k))) for k in range(b))
        if isinstance(f, BoundedExists):
            b = self.term(f.bound)
            return any(self.formula(instantiate(f.body, numeral(k))) for k in range(b))
        if isinstance(f, (Forall, Exists)):
            raise EvalError("formula is not quantifier-free")
        raise EvalError(f"not a formula: {f!r}")


def eval_term(t, sig: Signature, assignment: Assignment = EMPTY,
              budget: int = DEFAULT_BUDGET) -> int:
    """Value of a closed term in the standard model."""
    return _Context(sig, assignment, budget).term(t)


def eval_qf(f, sig: Signature, assignment: Assignment = EMPTY,
            budget: int = DEFAULT_BUDGET) -> bool:
    """Truth value of a closed quantifier-free formula."""
    return _Context(sig, assignment, budget).formula(f)


def least_witness(f, sig: Signature, cap: int,
                  assignment: Assignment = EMPTY,
                  budget: int = DEFAULT_BUDGET) -> Optional[int]:
    """Least n <= cap making the one-free-variable formula true, else None.

    This brute-force search is the independent oracle against which
    witness extraction is checked.
    """
    names = free_vars(f)
    if len(names) != 1:
        raise EvalError(f"least_witness needs exactly one free variable, found {sorted(names)}")
    (x,) = names
    ctx = _Context(sig, assignment, budget)
    for n in range(cap + 1):
        if ctx.formula(subst_free(f, x, numeral(n))):
            return n
    return None
