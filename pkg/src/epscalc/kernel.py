"""Quantifier-free proof checking over propositional consequence.

A proof is a list of closed quantifier-free lines, each justified as an
axiom instance or a tautological consequence of earlier lines.  The
checker needs no quantifier rules: critical axioms carry the whole of
quantification theory.

Justification semantics:

  recursion — an instance of a defining equation of the signature
      (one-step unfolding), an opaque symbol's graph at numerals, or a
      one-step unfolding axiom for a bounded quantifier (bounded
      quantifiers are decidable arithmetic, so their finite expansion
      laws sit with the recursion apparatus);
  identity  — reflexivity t = t, or a congruence conditional replacing
      occurrences of a closed term by another (never inside an epsilon
      term: epsilon terms are names);
  critical  — A(t) -> A(eps x. A(x)) for the recorded t and eps term;
  axiom k   — textual match against the supplied non-logical axiom list;
  taut ...  — tautological consequence of the cited earlier lines.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

from .epsilonizer import CriticalFormula, epsilon_translate
from .evaluator import Assignment, eval_qf, DEFAULT_BUDGET
from .syntax import (
    And, App, BoundedExists, BoundedForall, BVar, CriticalAxiom, Eps, EpsProof,
    Eq, Exists, Forall, IdentityAxiom, Implies, NonLogicalAxiom, Not, Num, Or,
    ProofLine, RecursionAxiom, Signature, Succ, TautConsequence, Term, Var,
    bind, forall, instantiate, is_closed, is_quantifier_free, iter_nodes,
    numeral, succ, to_text,
)

ATOM_LIMIT = 24


class AtomLimitExceeded(Exception):
    """Too many distinct atoms for the exhaustive valuation table."""


class NotTrue(Exception):
    """The sentence to be proved is false in the standard model."""


class ProofConstructionError(Exception):
    """The deterministic prover cannot handle this input."""


# ---------------------------------------------------------------------------
# Tautological consequence

def _collect_atoms(formulas, limit: int) -> List:
    atoms: List = []
    seen = set()

    def walk(f):
        if isinstance(f, (Eq, BoundedForall, BoundedExists)):
            if f not in seen:
                if len(atoms) >= limit:
                    raise AtomLimitExceeded(
                        f"more than {limit} distinct atoms in tautology check")
                seen.add(f)
                atoms.append(f)
            return
        if isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, (And, Or, Implies)):
            walk(f.lhs)
            walk(f.rhs)
        else:
            raise TypeError(f"not a quantifier-free formula: {f!r}")

    for f in formulas:
        walk(f)
    return atoms


def _atom_mask(i: int, k: int) -> int:
    rows = 1 << k
    period = 1 << (i + 1)
    half = 1 << i
    block = ((1 << half) - 1) << half
    return block * (((1 << rows) - 1) // ((1 << period) - 1))


def is_taut_consequence(premises: Sequence, conclusion,
                        atom_limit: int = ATOM_LIMIT) -> bool:
    """True iff every valuation of the atoms satisfying all premises
    satisfies the conclusion.

    Atoms are the maximal non-boolean subformulas (equations and bounded
    quantifications), identified up to structural equality.  The check
    runs the full valuation table as bit-parallel masks.
    """
    atoms = _collect_atoms(list(premises) + [conclusion], atom_limit)
    k = len(atoms)
    rows = 1 << k
    full = (1 << rows) - 1
    index = {a: i for i, a in enumerate(atoms)}

    def mask(f) -> int:
        if isinstance(f, (Eq, BoundedForall, BoundedExists)):
            return _atom_mask(index[f], k)
        if isinstance(f, Not):
            return full ^ mask(f.body)
        if isinstance(f, And):
            return mask(f.lhs) & mask(f.rhs)
        if isinstance(f, Or):
            return mask(f.lhs) | mask(f.rhs)
        if isinstance(f, Implies):
            return (full ^ mask(f.lhs)) | mask(f.rhs)
        raise TypeError(f"not a quantifier-free formula: {f!r}")

    good = full
    for p in premises:
        good &= mask(p)
    return good & ~mask(conclusion) & full == 0


# ---------------------------------------------------------------------------
# Axiom shape recognizers

def _succ_split(t: Term) -> Optional[Term]:
    """t as S(u): numerals split arithmetically, Succ nodes structurally."""
    if isinstance(t, Num) and t.value >= 1:
        return Num(t.value - 1)
    if isinstance(t, Succ):
        return t.arg
    return None


def _match_pattern(pattern: Term, t: Term, binding: dict) -> bool:
    if isinstance(pattern, Var):
        if pattern.name in binding:
            return binding[pattern.name] == t
        binding[pattern.name] = t
        return True
    if isinstance(pattern, Num):
        return pattern == t
    if isinstance(pattern, Succ):
        u = _succ_split(t)
        return u is not None and _match_pattern(pattern.arg, u, binding)
    if isinstance(pattern, App):
        return (isinstance(t, App) and t.sym == pattern.sym
                and len(t.args) == len(pattern.args)
                and all(_match_pattern(p, a, binding)
                        for p, a in zip(pattern.args, t.args)))
    return False


def _subst_pattern(t: Term, binding: dict) -> Term:
    if isinstance(t, Var):
        return binding[t.name]
    if isinstance(t, Num):
        return t
    if isinstance(t, Succ):
        return succ(_subst_pattern(t.arg, binding))
    if isinstance(t, App):
        return App(t.sym, tuple(_subst_pattern(a, binding) for a in t.args))
    raise TypeError(f"unexpected pattern term: {t!r}")


def unfold_once(sig: Signature, t: Term) -> Optional[Term]:
    """One-step unfolding of an application by its defining equation."""
    if not isinstance(t, App):
        return None
    decl = sig.get(t.sym)
    if decl is None or decl.kind == "opaque":
        return None
    for eq in decl.equations:
        binding: dict = {}
        if _match_pattern(eq.lhs, t, binding):
            return _subst_pattern(eq.rhs, binding)
    return None


def _is_recursion_equation_instance(f, sig: Signature) -> bool:
    if not isinstance(f, Eq) or not isinstance(f.lhs, App):
        return False
    decl = sig.get(f.lhs.sym)
    if decl is None:
        return False
    if decl.kind == "opaque":
        # graph instance at numerals: the defining equations of an opaque
        # symbol are its recursion equations, not spelled out term by term
        if all(isinstance(a, Num) for a in f.lhs.args) and isinstance(f.rhs, Num):
            return decl.fn(*(a.value for a in f.lhs.args)) == f.rhs.value
        return False
    return unfold_once(sig, f.lhs) == f.rhs


def _instance_index(body, inst) -> "tuple[bool, Optional[int]]":
    """If inst == body[0^k / bound var], return (True, k); (True, None)
    when the bound variable does not occur; else (False, None)."""
    found: List[int] = []

    def walk(b, i, depth) -> bool:
        if isinstance(b, BVar):
            if b.index == depth:
                if not isinstance(i, Num):
                    return False
                found.append(i.value)
                return True
            target = BVar(b.index - 1) if b.index > depth else b
            return i == target
        if isinstance(b, Num):
            return b == i
        if isinstance(b, Succ):
            u = _succ_split(i)
            return u is not None and walk(b.arg, u, depth)
        if isinstance(b, Var):
            return b == i
        if isinstance(b, App):
            return (isinstance(i, App) and i.sym == b.sym
                    and len(i.args) == len(b.args)
                    and all(walk(x, y, depth) for x, y in zip(b.args, i.args)))
        if isinstance(b, Eps):
            return isinstance(i, Eps) and walk(b.body, i.body, depth + 1)
        if isinstance(b, Eq):
            return (isinstance(i, Eq) and walk(b.lhs, i.lhs, depth)
                    and walk(b.rhs, i.rhs, depth))
        if isinstance(b, Not):
            return isinstance(i, Not) and walk(b.body, i.body, depth)
        if isinstance(b, (And, Or, Implies)):
            return (type(b) is type(i) and walk(b.lhs, i.lhs, depth)
                    and walk(b.rhs, i.rhs, depth))
        if isinstance(b, (BoundedForall, BoundedExists)):
            return (type(b) is type(i) and walk(b.bound, i.bound, depth)
                    and walk(b.body, i.body, depth + 1))
        if isinstance(b, (Forall, Exists)):
            return type(b) is type(i) and walk(b.body, i.body, depth + 1)
        return False

    if not walk(body, inst, 0):
        return False, None
    if not found:
        return True, None
    k = found[0]
    if any(x != k for x in found):
        return False, None
    return True, k


def _is_bounded_axiom(f) -> bool:
    """One-step unfolding and instance axioms for bounded quantifiers."""
    # all x < 0. A   and   not (ex x < 0. A)  are outright true
    if isinstance(f, BoundedForall) and f.bound == Num(0):
        return True
    if isinstance(f, Not) and isinstance(f.body, BoundedExists) and f.body.bound == Num(0):
        return True
    if not isinstance(f, Implies):
        return False
    lhs, rhs = f.lhs, f.rhs

    def step_pair(bq, conj):
        """bq over S(t) against conj(bq over t, instance at t)."""
        if not isinstance(bq, (BoundedForall, BoundedExists)):
            return False
        t = _succ_split(bq.bound)
        if t is None or not isinstance(conj, (And, Or)):
            return False
        want_conj = And if isinstance(bq, BoundedForall) else Or
        if type(conj) is not want_conj:
            return False
        smaller = type(bq)(t, bq.body)
        inst = instantiate(bq.body, t)
        return conj.lhs == smaller and conj.rhs == inst

    # elimination / introduction, one step at the top of the bound
    if isinstance(lhs, (BoundedForall, BoundedExists)) and step_pair(lhs, rhs):
        return True
    if isinstance(rhs, (BoundedForall, BoundedExists)) and step_pair(rhs, lhs):
        return True
    # witness introduction (ex) and instance elimination (all) at numerals,
    # usable at bounds far too large to unfold stepwise
    if isinstance(rhs, BoundedExists) and isinstance(rhs.bound, Num):
        ok, k = _instance_index(rhs.body, lhs)
        if ok and (k if k is not None else 0) < rhs.bound.value:
            return True
    if isinstance(lhs, BoundedForall) and isinstance(lhs.bound, Num):
        ok, k = _instance_index(lhs.body, rhs)
        if ok and (k if k is not None else 0) < lhs.bound.value:
            return True
    return False


def _is_recursion_axiom(f, sig: Signature) -> bool:
    return _is_recursion_equation_instance(f, sig) or _is_bounded_axiom(f)


def _replaceable(u, v, t, s) -> bool:
    """v obtainable from u by replacing some occurrences of t by s.

    Never descends into epsilon terms: they are opaque names, and
    rewriting inside one would change its identity (and its assigned
    value) rather than its arguments.
    """
    if u == v:
        return True
    if u == t and v == s:
        return True
    if isinstance(u, (Num, Succ)) and isinstance(v, (Num, Succ)):
        a, b = _succ_split(u), _succ_split(v)
        if a is not None and b is not None and (isinstance(u, Succ) or isinstance(v, Succ)
                                                or isinstance(t, Num)):
            if _replaceable(a, b, t, s):
                return True
    if isinstance(u, Succ) and isinstance(v, Succ):
        return _replaceable(u.arg, v.arg, t, s)
    if isinstance(u, App) and isinstance(v, App) and u.sym == v.sym \
            and len(u.args) == len(v.args):
        return all(_replaceable(x, y, t, s) for x, y in zip(u.args, v.args))
    if isinstance(u, Eq) and isinstance(v, Eq):
        return _replaceable(u.lhs, v.lhs, t, s) and _replaceable(u.rhs, v.rhs, t, s)
    if isinstance(u, Not) and isinstance(v, Not):
        return _replaceable(u.body, v.body, t, s)
    if isinstance(u, (And, Or, Implies)) and type(u) is type(v):
        return _replaceable(u.lhs, v.lhs, t, s) and _replaceable(u.rhs, v.rhs, t, s)
    if isinstance(u, (BoundedForall, BoundedExists)) and type(u) is type(v):
        return (_replaceable(u.bound, v.bound, t, s)
                and _replaceable(u.body, v.body, t, s))
    return False


_ATOM_TYPES = (Eq, BoundedForall, BoundedExists)


def _is_identity_axiom(f) -> bool:
    if isinstance(f, Eq) and f.lhs == f.rhs:
        return True
    if not isinstance(f, Implies) or not isinstance(f.lhs, Eq):
        return False
    t, s = f.lhs.lhs, f.lhs.rhs
    if not (is_closed(t) and is_closed(s)):
        return False
    rhs = f.rhs
    if isinstance(rhs, Eq):
        return _replaceable(rhs.lhs, rhs.rhs, t, s)
    if isinstance(rhs, Implies) and isinstance(rhs.lhs, _ATOM_TYPES) \
            and isinstance(rhs.rhs, _ATOM_TYPES):
        return _replaceable(rhs.lhs, rhs.rhs, t, s)
    return False


# ---------------------------------------------------------------------------
# Proof checking

@dataclass(frozen=True)
class Verdict:
    accepted: bool
    line: Optional[int] = None  # 1-based, first failing line
    reason: Optional[str] = None

    def __bool__(self):
        return self.accepted


def check_eps_proof(proof: EpsProof, sig: Signature, axioms: Sequence) -> Verdict:
    """Check every line's justification; accepted or rejected(line, reason)."""
    axioms = list(axioms)
    for i, line in enumerate(proof.lines):
        f = line.formula
        if not is_closed(f):
            return Verdict(False, i + 1, "not-closed")
        if not is_quantifier_free(f):
            return Verdict(False, i + 1, "not-quantifier-free")
        j = line.justification
        if isinstance(j, RecursionAxiom):
            if not _is_recursion_axiom(f, sig):
                return Verdict(False, i + 1, "bad-recursion-instance")
        elif isinstance(j, IdentityAxiom):
            if not _is_identity_axiom(f):
                return Verdict(False, i + 1, "bad-identity-instance")
        elif isinstance(j, CriticalAxiom):
            if not isinstance(j.eps_term, Eps) \
                    or f != CriticalFormula(j.term, j.eps_term).formula:
                return Verdict(False, i + 1, "bad-critical-instance")
        elif isinstance(j, NonLogicalAxiom):
            if not 0 <= j.index < len(axioms):
                return Verdict(False, i + 1, "bad-axiom-index")
            if axioms[j.index] != f:
                return Verdict(False, i + 1, "axiom-mismatch")
        elif isinstance(j, TautConsequence):
            if any(p >= i or p < 0 for p in j.premises):
                return Verdict(False, i + 1, "forward-reference")
            try:
                ok = is_taut_consequence(
                    [proof.lines[p].formula for p in j.premises], f)
            except AtomLimitExceeded:
                return Verdict(False, i + 1, "taut-atom-limit")
            if not ok:
                return Verdict(False, i + 1, "not-tautological-consequence")
        else:
            return Verdict(False, i + 1, "bad-justification")
    return Verdict(True)


# ---------------------------------------------------------------------------
# Default non-logical axioms: the successor apparatus, in epsilon form.

def successor_axioms() -> list:
    """Zero is no successor; the successor function is injective."""
    x, y = Var("x"), Var("y")
    p1 = forall("x", Not(Eq(succ(x), Num(0))))
    p2 = forall("x", forall("y", Implies(Eq(succ(x), succ(y)), Eq(x, y))))
    return [p1, p2]


def default_axioms() -> list:
    """Epsilon forms of the successor axioms; instances are recovered
    through critical axioms, the way the substitution method rewrites
    every axiom of the source system."""
    return [epsilon_translate(a) for a in successor_axioms()]


def _inj_matrix(xt: Term, yt: Term):
    return Implies(Eq(succ(xt), succ(yt)), Eq(xt, yt))


def _inj_eps_y(xt: Term) -> Eps:
    return Eps(bind("y", Not(_inj_matrix(xt, Var("y")))))


# ---------------------------------------------------------------------------
# Proof construction

BOUND_EXPAND_LIMIT = 4096


class ProofBuilder:
    """Grow an epsilon proof line by line, deduplicating by formula."""

    def __init__(self, sig: Signature, axioms: Sequence):
        self.sig = sig
        self.axioms = list(axioms)
        self.lines: List[ProofLine] = []
        self._index: dict = {}
        self._reduce_memo: dict = {}

    def proof(self) -> EpsProof:
        return EpsProof(tuple(self.lines))

    def emit(self, formula, justification) -> int:
        hit = self._index.get(formula)
        if hit is not None:
            return hit
        self.lines.append(ProofLine(formula, justification))
        idx = len(self.lines) - 1
        self._index[formula] = idx
        return idx

    def recursion(self, formula) -> int:
        return self.emit(formula, RecursionAxiom())

    def identity(self, formula) -> int:
        return self.emit(formula, IdentityAxiom())

    def critical(self, t: Term, e: Eps) -> int:
        return self.emit(CriticalFormula(t, e).formula, CriticalAxiom(t, e))

    def axiom(self, index: int) -> int:
        return self.emit(self.axioms[index], NonLogicalAxiom(index))

    def taut(self, formula, premises) -> int:
        hit = self._index.get(formula)
        if hit is not None:
            return hit
        return self.emit(formula, TautConsequence(tuple(dict.fromkeys(premises))))

    # -- identity plumbing --

    def refl(self, t: Term) -> int:
        return self.identity(Eq(t, t))

    def sym(self, i: int, a: Term, c: Term) -> int:
        """From line i: a = c, derive c = a."""
        cond = self.identity(Implies(Eq(a, c), Implies(Eq(a, a), Eq(c, a))))
        return self.taut(Eq(c, a), [i, cond, self.refl(a)])

    def trans(self, i_ab: int, a: Term, b: Term, i_bc: int, c: Term) -> int:
        """From a = b and b = c, derive a = c."""
        if a == b:
            return i_bc
        if b == c:
            return i_ab
        cond = self.identity(Implies(Eq(b, c), Implies(Eq(a, b), Eq(a, c))))
        return self.taut(Eq(a, c), [i_bc, cond, i_ab])

    # -- derived successor-axiom instances --

    def p1_instance(self, t: Term) -> int:
        """not (S(t) = 0), via the translated axiom and a critical axiom."""
        ax = self.axioms[0]
        if not (isinstance(ax, Not) and isinstance(ax.body, Eq)
                and isinstance(ax.body.lhs, (Succ, Num))):
            raise ProofConstructionError("axiom 1 is not the successor axiom")
        e1 = ax.body.lhs.arg if isinstance(ax.body.lhs, Succ) else None
        if not isinstance(e1, Eps):
            raise ProofConstructionError("axiom 1 is not in epsilon form")
        i_ax = self.axiom(0)
        i_crit = self.critical(t, e1)
        return self.taut(Not(Eq(succ(t), Num(0))), [i_ax, i_crit])

    def p2_instance(self, t: Term, u: Term) -> int:
        """S(t) = S(u) -> t = u, via two nested critical axioms."""
        def b_of(xt):
            return _inj_matrix(xt, _inj_eps_y(xt))
        e_x = Eps(bind("x", Not(b_of(Var("x")))))
        if self.axioms[1] != b_of(e_x):
            raise ProofConstructionError("axiom 2 is not the injectivity axiom")
        i_ax = self.axiom(1)
        i1 = self.critical(t, e_x)
        i_bt = self.taut(b_of(t), [i_ax, i1])
        i2 = self.critical(u, _inj_eps_y(t))
        return self.taut(_inj_matrix(t, u), [i_bt, i2])

    def neg_flip(self, i: int, a: Term, c: Term) -> int:
        """From not (a = c), derive not (c = a)."""
        cond = self.identity(Implies(Eq(c, a), Implies(Eq(c, c), Eq(a, c))))
        return self.taut(Not(Eq(c, a)), [i, cond, self.refl(c)])

    def numerals_distinct(self, m: int, n: int) -> int:
        """not (0^(m) = 0^(n)) for m != n."""
        if m == n:
            raise ProofConstructionError("equal numerals are not distinct")
        if m > n:
            return self.neg_flip(self.numerals_distinct(n, m), Num(n), Num(m))
        d = n - m
        base = self.p1_instance(Num(d - 1))          # not (0^(d) = 0)
        cur = self.neg_flip(base, Num(d), Num(0))    # not (0 = 0^(d))
        for k in range(1, m + 1):
            inj = self.p2_instance(Num(k - 1), Num(d + k - 1))
            cur = self.taut(Not(Eq(Num(k), Num(d + k))), [cur, inj])
        return cur

    # -- term normalization with proof --

    def reduce_term(self, t: Term) -> "tuple[Term, int]":
        """Normal form of a closed term plus a line proving t = nf.

        Unfolds defining equations innermost-first; epsilon terms are
        inert, so the normal form need not be a numeral.
        """
        hit = self._reduce_memo.get(t)
        if hit is not None:
            return hit
        nf, idx = self._reduce(t)
        self._reduce_memo[t] = (nf, idx)
        return nf, idx

    def _reduce(self, t: Term) -> "tuple[Term, int]":
        if isinstance(t, (Num, Eps)):
            return t, self.refl(t)
        if isinstance(t, Succ):
            nf_a, i_a = self.reduce_term(t.arg)
            v = succ(nf_a)
            if v == t:
                return t, self.refl(t)
            cond = self.identity(Implies(Eq(t.arg, nf_a), Eq(t, v)))
            return v, self.taut(Eq(t, v), [i_a, cond])
        if not isinstance(t, App):
            raise ProofConstructionError(f"cannot reduce open term {to_text(t)}")
        cur = t
        i_cur = self.refl(t)
        args = list(t.args)
        for k, a in enumerate(args):
            nf_a, i_a = self.reduce_term(a)
            if nf_a == a:
                continue
            nxt = App(t.sym, tuple(args[:k] + [nf_a] + args[k + 1:]))
            cond = self.identity(Implies(Eq(a, nf_a), Eq(cur, nxt)))
            i_step = self.taut(Eq(cur, nxt), [i_a, cond])
            i_cur = self.trans(i_cur, t, cur, i_step, nxt)
            args[k] = nf_a
            cur = nxt
        decl = self.sig.get(cur.sym)
        if decl is None:
            raise ProofConstructionError(f"unknown symbol {cur.sym}")
        if decl.kind == "opaque":
            if all(isinstance(a, Num) for a in cur.args):
                val = Num(decl.fn(*(a.value for a in cur.args)))
                i_rec = self.recursion(Eq(cur, val))
                return val, self.trans(i_cur, t, cur, i_rec, val)
            return cur, i_cur
        inst = unfold_once(self.sig, cur)
        if inst is None:
            return cur, i_cur
        i_rec = self.recursion(Eq(cur, inst))
        i_to_inst = self.trans(i_cur, t, cur, i_rec, inst)
        nf, i_nf = self.reduce_term(inst)
        return nf, self.trans(i_to_inst, t, inst, i_nf, nf)

    # -- formula proving --

    def prove_eq(self, u: Term, v: Term, want: bool) -> int:
        nu, i_u = self.reduce_term(u)
        nv, i_v = self.reduce_term(v)
        if want:
            if nu != nv:
                raise ProofConstructionError(
                    f"normal forms differ: {to_text(nu)} vs {to_text(nv)}")
            if u == v:
                return self.refl(u)
            i_v_sym = self.sym(i_v, v, nv)
            return self.trans(i_u, u, nu, i_v_sym, v)
        if not (isinstance(nu, Num) and isinstance(nv, Num) and nu != nv):
            raise ProofConstructionError(
                f"cannot refute {to_text(Eq(u, v))}: normal forms "
                f"{to_text(nu)} vs {to_text(nv)}")
        i_ne = self.numerals_distinct(nu.value, nv.value)
        cond1 = self.identity(Implies(Eq(u, nu), Implies(Eq(u, v), Eq(nu, v))))
        cond2 = self.identity(Implies(Eq(v, nv), Implies(Eq(nu, v), Eq(nu, nv))))
        return self.taut(Not(Eq(u, v)), [i_u, i_v, cond1, cond2, i_ne])

    def _bridge_bound(self, f, nb: Num, i_b: int, want: bool, inner: int) -> int:
        """Lift a result about the numeral-bound atom to the original atom."""
        kind = type(f)
        if f.bound == nb:
            return inner
        at_nb = kind(nb, f.body)
        if want:
            i_sym = self.sym(i_b, f.bound, nb)
            cond = self.identity(Implies(Eq(nb, f.bound), Implies(at_nb, f)))
            return self.taut(f, [inner, i_sym, cond])
        cond = self.identity(Implies(Eq(f.bound, nb), Implies(f, at_nb)))
        return self.taut(Not(f), [inner, i_b, cond])

    def prove_bounded(self, f, want: bool) -> int:
        nb, i_b = self.reduce_term(f.bound)
        if not isinstance(nb, Num):
            raise ProofConstructionError(
                f"bound does not reduce to a numeral: {to_text(f.bound)}")
        b = nb.value
        kind = type(f)
        at = lambda k: instantiate(f.body, numeral(k))
        is_all = kind is BoundedForall
        truth = want  # truth of the numeral-bound atom we must establish
        if is_all and truth:
            if b > BOUND_EXPAND_LIMIT:
                raise ProofConstructionError(f"bound {b} too large to expand")
            cur = self.recursion(BoundedForall(Num(0), f.body))
            for k in range(b):
                i_k = self.prove(at(k), True)
                conj = And(BoundedForall(Num(k), f.body), at(k))
                i_conj = self.taut(conj, [cur, i_k])
                step = self.recursion(Implies(conj, BoundedForall(Num(k + 1), f.body)))
                cur = self.taut(BoundedForall(Num(k + 1), f.body), [i_conj, step])
            return self._bridge_bound(f, nb, i_b, True, cur)
        if is_all and not truth:
            k = self._find_counterexample(f, b, want_true=False)
            i_not = self.prove(at(k), False)
            elim = self.recursion(Implies(BoundedForall(nb, f.body), at(k)))
            inner = self.taut(Not(BoundedForall(nb, f.body)), [i_not, elim])
            return self._bridge_bound(f, nb, i_b, False, inner)
        if not is_all and truth:
            k = self._find_counterexample(f, b, want_true=True)
            i_k = self.prove(at(k), True)
            intro = self.recursion(Implies(at(k), BoundedExists(nb, f.body)))
            inner = self.taut(BoundedExists(nb, f.body), [i_k, intro])
            return self._bridge_bound(f, nb, i_b, True, inner)
        # refuting a bounded existential: walk the bound down to zero
        if b > BOUND_EXPAND_LIMIT:
            raise ProofConstructionError(f"bound {b} too large to expand")
        cur = self.recursion(Not(BoundedExists(Num(0), f.body)))
        for k in range(b):
            i_k = self.prove(at(k), False)
            elim = self.recursion(Implies(
                BoundedExists(Num(k + 1), f.body),
                Or(BoundedExists(Num(k), f.body), at(k))))
            cur = self.taut(Not(BoundedExists(Num(k + 1), f.body)), [cur, i_k, elim])
        return self._bridge_bound(f, nb, i_b, False, cur)

    def _find_counterexample(self, f, b: int, want_true: bool) -> int:
        for k in range(b):
            inst = instantiate(f.body, numeral(k))
            if eval_qf(inst, self.sig, Assignment(), DEFAULT_BUDGET) == want_true:
                return k
        raise ProofConstructionError("no deciding instance below the bound")

    def prove(self, f, want: bool = True) -> int:
        """Emit lines proving f (want) or not f (not want); returns the line."""
        if isinstance(f, Eq):
            return self.prove_eq(f.lhs, f.rhs, want)
        if isinstance(f, Not):
            if want:
                return self.prove(f.body, False)
            i = self.prove(f.body, True)
            return self.taut(Not(f), [i])
        if isinstance(f, And):
            if want:
                i = self.prove(f.lhs, True)
                j = self.prove(f.rhs, True)
                return self.taut(f, [i, j])
            side = f.lhs if not self._truth(f.lhs) else f.rhs
            i = self.prove(side, False)
            return self.taut(Not(f), [i])
        if isinstance(f, Or):
            if want:
                side = f.lhs if self._truth(f.lhs) else f.rhs
                i = self.prove(side, True)
                return self.taut(f, [i])
            i = self.prove(f.lhs, False)
            j = self.prove(f.rhs, False)
            return self.taut(Not(f), [i, j])
        if isinstance(f, Implies):
            if want:
                if not self._truth(f.lhs):
                    i = self.prove(f.lhs, False)
                else:
                    i = self.prove(f.rhs, True)
                return self.taut(f, [i])
            i = self.prove(f.lhs, True)
            j = self.prove(f.rhs, False)
            return self.taut(Not(f), [i, j])
        if isinstance(f, (BoundedForall, BoundedExists)):
            return self.prove_bounded(f, want)
        raise ProofConstructionError(f"cannot prove {f!r}")

    def _truth(self, f) -> bool:
        return eval_qf(f, self.sig, Assignment(), DEFAULT_BUDGET)


def prove_true_pr_sentence(f, sig: Signature, axioms: Optional[Sequence] = None,
                           budget: int = DEFAULT_BUDGET) -> EpsProof:
    """A checkable proof of a true closed PR sentence.

    Recursion equations are unfolded step by step until every atom's
    sides are numerals, bounded quantifiers are expanded or witnessed,
    and the sentence is closed by a tautological consequence.
    """
    if axioms is None:
        axioms = default_axioms()
    if not is_closed(f):
        raise ValueError("sentence must be closed")
    if not is_quantifier_free(f):
        raise ValueError("sentence must be quantifier-free")
    if any(isinstance(n, Eps) for n in iter_nodes(f)):
        raise ValueError("sentence must not contain epsilon terms")
    if not eval_qf(f, sig, Assignment(), budget):
        raise NotTrue(f"not true in the standard model: {to_text(f)}")
    b = ProofBuilder(sig, axioms)
    idx = b.prove(f, True)
    if b.lines[-1].formula != f:
        b.lines.append(ProofLine(f, TautConsequence((idx,))))
    return b.proof()
