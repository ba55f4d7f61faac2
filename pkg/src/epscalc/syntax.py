"""Abstract syntax, parsing and printing for arithmetic with epsilon terms.

Terms and formulas are immutable trees.  Binders (epsilon terms, bounded
and unbounded quantifiers) use de Bruijn indices internally: the factory
functions ``eps``, ``forall``, ... bind a named variable, and printing
re-invents display names.  Alpha-equivalent objects are therefore
structurally equal, which is what lets closed epsilon terms serve
directly as assignment keys.

Numerals are stored as a compact count (``Num``); ``succ`` collapses
``S`` applied to a numeral so that every numeral has exactly one
representation.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Union

# Goedel codes of desk-scale proofs run to tens of thousands of decimal
# digits; lift CPython's int<->str conversion guard accordingly.
if hasattr(sys, "set_int_max_str_digits") and sys.get_int_max_str_digits() < 400_000:
    sys.set_int_max_str_digits(400_000)


class ParseError(Exception):
    """Syntax error with a position into the source text."""

    def __init__(self, message: str, pos: int = -1, text: str = ""):
        self.pos = pos
        if pos >= 0 and text:
            line = text.count("\n", 0, pos) + 1
            col = pos - (text.rfind("\n", 0, pos) + 1) + 1
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)


class SignatureError(Exception):
    """Ill-formed primitive recursive declaration."""


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Num:
    """Canonical numeral S^n(0), stored as the count n."""

    value: int


@dataclass(frozen=True)
class Succ:
    """Successor applied to a non-numeral term (numerals collapse to Num)."""

    arg: "Term"


@dataclass(frozen=True)
class Var:
    """Free variable."""

    name: str


@dataclass(frozen=True)
class BVar:
    """Bound variable occurrence; index counts binders up to its binder."""

    index: int


@dataclass(frozen=True)
class App:
    """Application of a declared primitive recursive function symbol."""

    sym: str
    args: tuple


@dataclass(frozen=True)
class Eps:
    """Epsilon term: a name for some witness of its body formula."""

    body: "Formula"


Term = Union[Num, Succ, Var, BVar, App, Eps]

Zero = Num(0)


def numeral(n: int) -> Num:
    if n < 0:
        raise ValueError("numerals are non-negative")
    return Num(n)


def succ(t: Term) -> Term:
    """S(t), collapsing onto the compact numeral representation."""
    if isinstance(t, Num):
        return Num(t.value + 1)
    return Succ(t)


def app(sym: str, args) -> App:
    return App(sym, tuple(args))


# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Or:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class BoundedForall:
    """all x < bound. body — the bound term is outside the binder's scope."""

    bound: Term
    body: "Formula"


@dataclass(frozen=True)
class BoundedExists:
    bound: Term
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    body: "Formula"


Formula = Union[Eq, Not, And, Or, Implies, BoundedForall, BoundedExists, Forall, Exists]

BINDERS = (Eps, BoundedForall, BoundedExists, Forall, Exists)


# ---------------------------------------------------------------------------
# Binding helpers

def _map_terms(obj, f: Callable[[Term, int], Term], depth: int = 0):
    """Rebuild obj applying f to every term node, tracking binder depth."""
    if isinstance(obj, (Num, Succ, Var, BVar, App, Eps)):
        return f(obj, depth)
    if isinstance(obj, Eq):
        return Eq(f(obj.lhs, depth), f(obj.rhs, depth))
    if isinstance(obj, Not):
        return Not(_map_terms(obj.body, f, depth))
    if isinstance(obj, (And, Or, Implies)):
        return type(obj)(_map_terms(obj.lhs, f, depth), _map_terms(obj.rhs, f, depth))
    if isinstance(obj, (BoundedForall, BoundedExists)):
        return type(obj)(f(obj.bound, depth), _map_terms(obj.body, f, depth + 1))
    if isinstance(obj, (Forall, Exists)):
        return type(obj)(_map_terms(obj.body, f, depth + 1))
    raise TypeError(f"not a syntax object: {obj!r}")


def _term_map(t: Term, f: Callable[[Term, int], Term], depth: int) -> Term:
    if isinstance(t, (Num, Var, BVar)):
        return t
    if isinstance(t, Succ):
        return succ(f(t.arg, depth))
    if isinstance(t, App):
        return App(t.sym, tuple(f(a, depth) for a in t.args))
    if isinstance(t, Eps):
        return Eps(_map_terms(t.body, f, depth + 1))
    raise TypeError(f"not a term: {t!r}")


def bind(name: str, obj):
    """Turn free occurrences of Var(name) into the innermost bound variable."""

    def go(t, depth):
        if isinstance(t, Var) and t.name == name:
            return BVar(depth)
        return _term_map(t, go, depth)

    return _map_terms(obj, go, 0)


def shift(obj, amount: int):
    """Shift dangling de Bruijn indices by amount."""
    if amount == 0:
        return obj

    def go(t, depth):
        if isinstance(t, BVar) and t.index >= depth:
            return BVar(t.index + amount)
        return _term_map(t, go, depth)

    return _map_terms(obj, go, 0) if not isinstance(obj, (Num, Succ, Var, BVar, App, Eps)) else go(obj, 0)


def instantiate(body, replacement: Term):
    """Substitute a term for the binder one level above body, removing it."""

    def go(t, depth):
        if isinstance(t, BVar):
            if t.index == depth:
                return shift(replacement, depth)
            if t.index > depth:
                return BVar(t.index - 1)
            return t
        return _term_map(t, go, depth)

    if isinstance(body, (Num, Succ, Var, BVar, App, Eps)):
        return go(body, 0)
    return _map_terms(body, go, 0)


def subst_free(obj, name: str, replacement: Term):
    """Substitute a term for a free named variable."""

    def go(t, depth):
        if isinstance(t, Var) and t.name == name:
            return shift(replacement, depth)
        return _term_map(t, go, depth)

    if isinstance(obj, (Num, Succ, Var, BVar, App, Eps)):
        return go(obj, 0)
    return _map_terms(obj, go, 0)


def eps(name: str, body: Formula) -> Eps:
    return Eps(bind(name, body))


def forall(name: str, body: Formula) -> Forall:
    return Forall(bind(name, body))


def exists(name: str, body: Formula) -> Exists:
    return Exists(bind(name, body))


def bforall(name: str, bound: Term, body: Formula) -> BoundedForall:
    return BoundedForall(bound, bind(name, body))


def bexists(name: str, bound: Term, body: Formula) -> BoundedExists:
    return BoundedExists(bound, bind(name, body))


def implies(a: Formula, b: Formula) -> Implies:
    return Implies(a, b)


# ---------------------------------------------------------------------------
# Structure queries

def iter_nodes(obj) -> Iterator:
    """All syntax nodes of obj, preorder."""
    stack = [obj]
    while stack:
        x = stack.pop()
        yield x
        if isinstance(x, Succ):
            stack.append(x.arg)
        elif isinstance(x, App):
            stack.extend(x.args)
        elif isinstance(x, Eps):
            stack.append(x.body)
        elif isinstance(x, Eq):
            stack.append(x.lhs)
            stack.append(x.rhs)
        elif isinstance(x, Not):
            stack.append(x.body)
        elif isinstance(x, (And, Or, Implies)):
            stack.append(x.lhs)
            stack.append(x.rhs)
        elif isinstance(x, (BoundedForall, BoundedExists)):
            stack.append(x.bound)
            stack.append(x.body)
        elif isinstance(x, (Forall, Exists)):
            stack.append(x.body)


def free_vars(obj) -> set:
    return {n.name for n in iter_nodes(obj) if isinstance(n, Var)}


def _dangling(obj, depth: int) -> int:
    """Max dangling index + 1 relative to depth binders above (0 if none)."""
    if isinstance(obj, BVar):
        return obj.index - depth + 1 if obj.index >= depth else 0
    if isinstance(obj, (Num, Var)):
        return 0
    if isinstance(obj, Succ):
        return _dangling(obj.arg, depth)
    if isinstance(obj, App):
        return max((_dangling(a, depth) for a in obj.args), default=0)
    if isinstance(obj, Eps):
        return _dangling(obj.body, depth + 1)
    if isinstance(obj, Eq):
        return max(_dangling(obj.lhs, depth), _dangling(obj.rhs, depth))
    if isinstance(obj, Not):
        return _dangling(obj.body, depth)
    if isinstance(obj, (And, Or, Implies)):
        return max(_dangling(obj.lhs, depth), _dangling(obj.rhs, depth))
    if isinstance(obj, (BoundedForall, BoundedExists)):
        return max(_dangling(obj.bound, depth), _dangling(obj.body, depth + 1))
    if isinstance(obj, (Forall, Exists)):
        return _dangling(obj.body, depth + 1)
    raise TypeError(f"not a syntax object: {obj!r}")


def is_closed(obj) -> bool:
    return not free_vars(obj) and _dangling(obj, 0) == 0


def is_quantifier_free(f) -> bool:
    """No unbounded quantifier anywhere, including inside epsilon bodies."""
    return not any(isinstance(n, (Forall, Exists)) for n in iter_nodes(f))


def closed_eps_subterms(obj) -> list:
    """Closed Eps subterms of obj (all nesting depths), deduplicated."""
    seen = []
    seen_set = set()
    for n in iter_nodes(obj):
        if isinstance(n, Eps) and _dangling(n, 0) == 0 and not free_vars(n):
            if n not in seen_set:
                seen_set.add(n)
                seen.append(n)
    return seen


def closed_subterms(obj) -> list:
    """Closed term subterms of obj, deduplicated."""
    out = []
    out_set = set()
    for n in iter_nodes(obj):
        if isinstance(n, (Num, Succ, Var, BVar, App, Eps)):
            if n not in out_set and _dangling(n, 0) == 0 and not free_vars(n):
                out_set.add(n)
                out.append(n)
    return out


# ---------------------------------------------------------------------------
# Signatures

@dataclass(frozen=True)
class Equation:
    """One defining equation f(patterns...) = rhs over named variables."""

    lhs: App
    rhs: Term


class Declaration:
    """A primitive recursive function symbol.

    kind is one of:
      "explicit"  — single equation  f(x1..xk) = rhs
      "recursive" — base and step equations over one recursion position
      "opaque"    — semantics delegated to a Python callable (flagged;
                    used for the arithmetized proof predicate)
    """

    def __init__(self, name, arity, kind, equations=(), recursion_pos=None,
                 fn=None, note=""):
        self.name = name
        self.arity = arity
        self.kind = kind
        self.equations = tuple(equations)
        self.recursion_pos = recursion_pos
        self.fn = fn
        self.note = note

    def __repr__(self):
        return f"Declaration({self.name}/{self.arity}, {self.kind})"


class Signature:
    """Ordered registry of PR symbol declarations, well-founded by position."""

    def __init__(self):
        self._decls: dict = {}

    def __contains__(self, name):
        return name in self._decls

    def __iter__(self):
        return iter(self._decls.values())

    def get(self, name) -> Optional[Declaration]:
        return self._decls.get(name)

    def lookup(self, name) -> Declaration:
        d = self._decls.get(name)
        if d is None:
            raise SignatureError(f"unknown function symbol: {name}")
        return d

    def arity(self, name) -> int:
        return self.lookup(name).arity

    def _check_rhs(self, rhs: Term, params: set, allowed: set):
        for n in iter_nodes(rhs):
            if isinstance(n, Var) and n.name not in params:
                raise SignatureError(f"undeclared variable {n.name} in definition")
            if isinstance(n, Eps):
                raise SignatureError("epsilon terms are not allowed in definitions")
            if isinstance(n, App):
                if n.sym not in allowed:
                    raise SignatureError(f"definition refers to undeclared symbol {n.sym}")
                want = self._decls[n.sym].arity if n.sym in self._decls else None
                if want is not None and len(n.args) != want:
                    raise SignatureError(f"{n.sym} expects {want} arguments")

    def declare_explicit(self, name, arity, equation: Equation):
        if name in self._decls:
            raise SignatureError(f"duplicate declaration of {name}")
        lhs = equation.lhs
        if lhs.sym != name or len(lhs.args) != arity:
            raise SignatureError(f"equation head must be {name}/{arity}")
        params = []
        for a in lhs.args:
            if not isinstance(a, Var) or a in params:
                raise SignatureError("explicit definition takes distinct variables")
            params.append(a)
        self._check_rhs(equation.rhs, {v.name for v in params}, set(self._decls))
        self._decls[name] = Declaration(name, arity, "explicit", (equation,))

    def declare_recursive(self, name, arity, base: Equation, step: Equation):
        if name in self._decls:
            raise SignatureError(f"duplicate declaration of {name}")
        rpos = None
        for i, (b, s) in enumerate(zip(base.lhs.args, step.lhs.args)):
            if b == Zero and isinstance(s, Succ) and isinstance(s.arg, Var):
                rpos = i
                break
        if rpos is None:
            raise SignatureError(f"{name}: need 0 / S(y) at one shared position")
        if base.lhs.sym != name or step.lhs.sym != name:
            raise SignatureError(f"equation heads must be {name}")
        if len(base.lhs.args) != arity or len(step.lhs.args) != arity:
            raise SignatureError(f"{name} declared with arity {arity}")
        for i, (b, s) in enumerate(zip(base.lhs.args, step.lhs.args)):
            if i == rpos:
                continue
            if not isinstance(b, Var) or not isinstance(s, Var):
                raise SignatureError(f"{name}: non-recursion arguments must be variables")
        base_params = {a.name for i, a in enumerate(base.lhs.args) if i != rpos}
        if len(base_params) != arity - 1:
            raise SignatureError(f"{name}: base pattern variables must be distinct")
        step_vars = [a for i, a in enumerate(step.lhs.args) if i != rpos]
        rec_var = step.lhs.args[rpos].arg
        step_params = {v.name for v in step_vars} | {rec_var.name}
        if len(step_params) != arity:
            raise SignatureError(f"{name}: step pattern variables must be distinct")
        allowed = set(self._decls)
        self._check_rhs(base.rhs, base_params, allowed)
        # the step may call itself, but only on the predecessor with the
        # other arguments unchanged (ordinary primitive recursion)
        self._check_rhs(step.rhs, step_params, allowed | {name})
        expected_self = App(name, tuple(
            rec_var if i == rpos else a for i, a in enumerate(step.lhs.args)))
        for n in iter_nodes(step.rhs):
            if isinstance(n, App) and n.sym == name and n != expected_self:
                raise SignatureError(
                    f"{name}: recursive call must be {to_text(expected_self)}")
        self._decls[name] = Declaration(name, arity, "recursive", (base, step), rpos)

    def declare_opaque(self, name, arity, fn, note="opaque-PR"):
        """Register a PR symbol whose recursion equations are not spelled out.

        The symbol is flagged and its object-language semantics is the
        callable; used for the arithmetized proof predicate, where writing
        literal base/step equations is possible but enormous.
        """
        if name in self._decls:
            raise SignatureError(f"duplicate declaration of {name}")
        self._decls[name] = Declaration(name, arity, "opaque", fn=fn, note=note)

    def declare_bounded_min(self, name, pred: str, note=""):
        """Bounded search schema: name(b, xs) = least y < b with pred(y, xs) = 1,
        and b if there is none.  Expands to two ordinary recursive symbols."""
        p = self.lookup(pred)
        k = p.arity
        xs = [Var(f"x{i}") for i in range(1, k)]
        y, b = Var("y"), Var("b")
        nf = name + "__nf"
        # nf(b, xs) = 1 while no witness below b exists, else 0
        self.declare_recursive(
            nf, k,
            Equation(App(nf, (Zero, *xs)), Num(1)),
            Equation(App(nf, (Succ(y), *xs)),
                     app("times", [App(nf, (y, *xs)), app("nsg", [App(pred, (y, *xs))])])))
        self.declare_recursive(
            name, k,
            Equation(App(name, (Zero, *xs)), Zero),
            Equation(App(name, (Succ(y), *xs)),
                     app("plus", [App(name, (y, *xs)), App(nf, (Succ(y), *xs))])))

    # -- text format --------------------------------------------------------

    def dump(self) -> str:
        out = []
        for d in self._decls.values():
            if d.kind == "opaque":
                out.append(f"{d.name}/{d.arity}: opaque")
            elif d.kind == "explicit":
                eq = d.equations[0]
                out.append(f"{d.name}/{d.arity}: {to_text(eq.lhs)} = {to_text(eq.rhs)}")
            else:
                b, s = d.equations
                out.append(f"{d.name}/{d.arity}: {to_text(b.lhs)} = {to_text(b.rhs)} ; "
                           f"{to_text(s.lhs)} = {to_text(s.rhs)}")
        return "\n".join(out) + "\n"

    @staticmethod
    def parse(text: str) -> "Signature":
        sig = Signature()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m = re.match(r"^([A-Za-z_][A-Za-z0-9_]*)\s*/\s*(\d+)\s*:\s*(.*)$", line)
            if m is None:
                raise SignatureError(f"line {lineno}: expected name/arity: ...")
            name, arity, body = m.group(1), int(m.group(2)), m.group(3).strip()
            bm = re.match(r"^boundedmin\s+([A-Za-z_][A-Za-z0-9_]*)$", body)
            if bm:
                sig.declare_bounded_min(name, bm.group(1))
                continue
            parts = body.split(";")
            try:
                eqs = [_parse_equation(p) for p in parts]
            except ParseError as e:
                raise SignatureError(f"line {lineno}: {e}") from e
            if len(eqs) == 1:
                sig.declare_explicit(name, arity, eqs[0])
            elif len(eqs) == 2:
                sig.declare_recursive(name, arity, eqs[0], eqs[1])
            else:
                raise SignatureError(f"line {lineno}: at most two equations")
        return sig


def _parse_equation(text: str) -> Equation:
    f = parse_formula(text)
    if not isinstance(f, Eq) or not isinstance(f.lhs, App):
        raise ParseError("defining equation must have shape f(...) = term")
    return Equation(f.lhs, f.rhs)


PRELUDE_TEXT = """\
# Default signature: base arithmetic, comparisons as characteristic
# functions, Cantor-style pairing, and a bounded-search schema instance
# used by the unpairing functions.
pred/1: pred(0) = 0 ; pred(S(x)) = x
plus/2: plus(x, 0) = x ; plus(x, S(y)) = S(plus(x, y))
times/2: times(x, 0) = 0 ; times(x, S(y)) = plus(times(x, y), x)
monus/2: monus(x, 0) = x ; monus(x, S(y)) = pred(monus(x, y))
sg/1: sg(0) = 0 ; sg(S(x)) = S(0)
nsg/1: nsg(0) = S(0) ; nsg(S(x)) = 0
lt/2: lt(x, y) = sg(monus(y, x))
le/2: le(x, y) = nsg(monus(x, y))
eq/2: eq(x, y) = nsg(plus(monus(x, y), monus(y, x)))
tri/1: tri(0) = 0 ; tri(S(x)) = plus(tri(x), S(x))
pair/2: pair(x, y) = plus(tri(plus(x, y)), x)
trigt/2: trigt(w, z) = lt(z, tri(S(w)))
rowsearch/2: boundedmin trigt
row/1: row(z) = rowsearch(S(z), z)
left/1: left(z) = monus(z, tri(row(z)))
right/1: right(z) = monus(row(z), left(z))
"""


def prelude() -> Signature:
    """The default signature shipped with the package."""
    return Signature.parse(PRELUDE_TEXT)


# ---------------------------------------------------------------------------
# Proof objects

@dataclass(frozen=True)
class RecursionAxiom:
    pass


@dataclass(frozen=True)
class IdentityAxiom:
    pass


@dataclass(frozen=True)
class CriticalAxiom:
    term: Term
    eps_term: Eps


@dataclass(frozen=True)
class NonLogicalAxiom:
    index: int


@dataclass(frozen=True)
class TautConsequence:
    premises: tuple  # 0-based indices of earlier lines


Justification = Union[RecursionAxiom, IdentityAxiom, CriticalAxiom,
                      NonLogicalAxiom, TautConsequence]


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class EpsProof:
    lines: tuple

    def final(self) -> Formula:
        if not self.lines:
            raise ValueError("empty proof")
        return self.lines[-1].formula


# ---------------------------------------------------------------------------
# Printing

_PRETTY = "xyzuvw"


def _display_names(obj):
    avoid = free_vars(obj) | {n.sym for n in iter_nodes(obj) if isinstance(n, App)}
    names = []
    i = 0
    while len(names) < 64:
        cand = _PRETTY[i] if i < len(_PRETTY) else f"x{i - len(_PRETTY) + 1}"
        i += 1
        if cand not in avoid:
            names.append(cand)
    return names


def to_text(item) -> str:
    """Render a term, formula, assignment problem piece, or proof as text.

    parse_term / parse_formula / parse_proof invert this on their
    respective syntactic classes.
    """
    if isinstance(item, EpsProof):
        return format_proof(item)
    names = _display_names(item)
    if isinstance(item, (Num, Succ, Var, BVar, App, Eps)):
        return _fmt_term(item, names, 0, top=True)
    return _fmt_formula(item, names, 0, 0)


def _binder_name(names, depth):
    return names[depth] if depth < len(names) else f"v{depth}"


def _fmt_term(t, names, depth, top=False):
    if isinstance(t, Num):
        if t.value <= 5:
            return "S(" * t.value + "0" + ")" * t.value
        return str(t.value)
    if isinstance(t, Succ):
        return f"S({_fmt_term(t.arg, names, depth)})"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, BVar):
        level = depth - 1 - t.index
        return _binder_name(names, level) if level >= 0 else f"?{t.index - depth}"
    if isinstance(t, App):
        return f"{t.sym}({', '.join(_fmt_term(a, names, depth) for a in t.args)})"
    if isinstance(t, Eps):
        body = _fmt_formula(t.body, names, depth + 1, 0)
        s = f"eps {_binder_name(names, depth)}. {body}"
        return s if top else f"({s})"
    raise TypeError(f"not a term: {t!r}")


# precedence: atoms 4, not 3, and 2, or 1, -> 0; quantifiers wrap as children
def _fmt_formula(f, names, depth, prec):
    if isinstance(f, Eq):
        return f"{_fmt_term(f.lhs, names, depth)} = {_fmt_term(f.rhs, names, depth)}"
    if isinstance(f, Not):
        s = f"not {_fmt_formula(f.body, names, depth, 3)}"
        return s if prec <= 3 else f"({s})"
    if isinstance(f, And):
        s = f"{_fmt_formula(f.lhs, names, depth, 3)} and {_fmt_formula(f.rhs, names, depth, 3)}"
        return s if prec <= 2 else f"({s})"
    if isinstance(f, Or):
        s = f"{_fmt_formula(f.lhs, names, depth, 2)} or {_fmt_formula(f.rhs, names, depth, 2)}"
        return s if prec <= 1 else f"({s})"
    if isinstance(f, Implies):
        s = f"{_fmt_formula(f.lhs, names, depth, 1)} -> {_fmt_formula(f.rhs, names, depth, 0)}"
        return s if prec <= 0 else f"({s})"
    if isinstance(f, (BoundedForall, BoundedExists, Forall, Exists)):
        kw = "all" if isinstance(f, (BoundedForall, Forall)) else "ex"
        var = _binder_name(names, depth)
        if isinstance(f, (BoundedForall, BoundedExists)):
            head = f"{kw} {var} < {_fmt_term(f.bound, names, depth)}"
        else:
            head = f"{kw} {var}"
        s = f"{head}. {_fmt_formula(f.body, names, depth + 1, 0)}"
        return s if prec == 0 else f"({s})"
    raise TypeError(f"not a formula: {f!r}")


_JUST_TAGS = {RecursionAxiom: "recursion", IdentityAxiom: "identity"}


def format_line(i: int, line: ProofLine) -> str:
    j = line.justification
    if isinstance(j, RecursionAxiom):
        jtext = "recursion"
    elif isinstance(j, IdentityAxiom):
        jtext = "identity"
    elif isinstance(j, CriticalAxiom):
        jtext = f"critical {to_text(j.term)} ; {to_text(j.eps_term)}"
    elif isinstance(j, NonLogicalAxiom):
        jtext = f"axiom {j.index + 1}"
    elif isinstance(j, TautConsequence):
        jtext = "taut" + "".join(f" {k + 1}" for k in j.premises)
    else:
        raise TypeError(f"unknown justification: {j!r}")
    return f"{i + 1} | {to_text(line.formula)} | {jtext}"


def format_proof(p: EpsProof) -> str:
    return "\n".join(format_line(i, ln) for i, ln in enumerate(p.lines)) + "\n"


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(r"""
      (?P<arrow>->)
    | (?P<lt><)
    | (?P<num>\d+)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<punct>[(),.=;])
    | (?P<space>\s+)
    | (?P<bad>.)
""", re.VERBOSE)

_KEYWORDS = {"all", "ex", "eps", "and", "or", "not"}


def _tokenize(text: str):
    toks = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        if kind == "space":
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group()!r}", m.start(), text)
        toks.append((m.group(), m.start()))
    toks.append(("", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, sig: Optional[Signature]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = sig

    def peek(self):
        return self.toks[self.i][0]

    def pos(self):
        return self.toks[self.i][1]

    def take(self, expected=None):
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", pos, self.text)
        if tok == "":
            raise ParseError("unexpected end of input", pos, self.text)
        self.i += 1
        return tok

    def done(self):
        return self.peek() == ""

    # -- terms --

    def term(self) -> Term:
        tok = self.peek()
        if tok == "(":
            save = self.i
            self.take("(")
            t = self.term()
            if self.peek() == ")":
                self.take(")")
                return t
            self.i = save
            raise ParseError("expected ')' after term", self.pos(), self.text)
        if tok.isdigit():
            self.take()
            return Num(int(tok))
        if tok == "S":
            self.take()
            self.take("(")
            t = self.term()
            self.take(")")
            return succ(t)
        if tok == "eps":
            self.take()
            name = self.ident("epsilon-bound variable")
            self.take(".")
            body = self.formula()
            return eps(name, body)
        if tok and (tok[0].isalpha() or tok[0] == "_") and tok not in _KEYWORDS:
            self.take()
            if self.peek() == "(":
                self.take("(")
                args = [self.term()]
                while self.peek() == ",":
                    self.take(",")
                    args.append(self.term())
                self.take(")")
                if self.sig is not None:
                    decl = self.sig.get(tok)
                    if decl is None:
                        raise ParseError(f"unknown function symbol {tok!r}",
                                         self.pos(), self.text)
                    if decl.arity != len(args):
                        raise ParseError(
                            f"{tok} expects {decl.arity} arguments, got {len(args)}",
                            self.pos(), self.text)
                return app(tok, args)
            return Var(tok)
        raise ParseError(f"expected a term, found {tok!r}", self.pos(), self.text)

    def ident(self, what="identifier") -> str:
        tok, pos = self.toks[self.i]
        if not tok or not (tok[0].isalpha() or tok[0] == "_") or tok in _KEYWORDS or tok == "S":
            raise ParseError(f"expected {what}, found {tok!r}", pos, self.text)
        self.i += 1
        return tok

    # -- formulas --

    def formula(self) -> Formula:
        return self.implies_()

    def implies_(self) -> Formula:
        lhs = self.or_()
        if self.peek() == "->":
            self.take("->")
            return Implies(lhs, self.implies_())
        return lhs

    def or_(self) -> Formula:
        f = self.and_()
        while self.peek() == "or":
            self.take("or")
            f = Or(f, self.and_())
        return f

    def and_(self) -> Formula:
        f = self.unary()
        while self.peek() == "and":
            self.take("and")
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "not":
            self.take("not")
            return Not(self.unary())
        if tok in ("all", "ex"):
            self.take()
            name = self.ident("quantified variable")
            bound = None
            if self.peek() == "<":
                self.take("<")
                bound = self.term()
            self.take(".")
            body = self.formula()
            if tok == "all":
                return bforall(name, bound, body) if bound is not None else forall(name, body)
            return bexists(name, bound, body) if bound is not None else exists(name, body)
        return self.atom()

    def atom(self) -> Formula:
        # An equation between terms, or a parenthesized formula.  Both can
        # start with '(' so try the equation reading first and fall back.
        save = self.i
        try:
            lhs = self.term()
            self.take("=")
            rhs = self.term()
            return Eq(lhs, rhs)
        except ParseError:
            self.i = save
        if self.peek() == "(":
            self.take("(")
            f = self.formula()
            self.take(")")
            return f
        raise ParseError(f"expected a formula, found {self.peek()!r}",
                         self.pos(), self.text)


def parse_term(text: str, sig: Optional[Signature] = None) -> Term:
    p = _Parser(text, sig)
    t = p.term()
    if not p.done():
        raise ParseError(f"trailing input {p.peek()!r}", p.pos(), text)
    return t


def parse_formula(text: str, sig: Optional[Signature] = None) -> Formula:
    p = _Parser(text, sig)
    f = p.formula()
    if not p.done():
        raise ParseError(f"trailing input {p.peek()!r}", p.pos(), text)
    return f


def parse_proof(text: str, sig: Optional[Signature] = None) -> EpsProof:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        parts = stripped.split("|")
        if len(parts) != 3:
            raise ParseError(f"proof line {lineno}: expected 'index | formula | justification'")
        idx_text, ftext, jtext = (s.strip() for s in parts)
        if not idx_text.isdigit() or int(idx_text) != len(lines) + 1:
            raise ParseError(f"proof line {lineno}: expected index {len(lines) + 1}")
        formula = parse_formula(ftext, sig)
        lines.append(ProofLine(formula, _parse_justification(jtext, sig, lineno)))
    return EpsProof(tuple(lines))


def _parse_justification(text: str, sig, lineno) -> Justification:
    if text == "recursion":
        return RecursionAxiom()
    if text == "identity":
        return IdentityAxiom()
    if text.startswith("axiom"):
        rest = text[len("axiom"):].strip()
        if not rest.isdigit() or int(rest) < 1:
            raise ParseError(f"proof line {lineno}: axiom needs a positive index")
        return NonLogicalAxiom(int(rest) - 1)
    if text.startswith("critical"):
        rest = text[len("critical"):].strip()
        pieces = rest.split(";")
        if len(pieces) != 2:
            raise ParseError(f"proof line {lineno}: critical needs 'term ; eps-term'")
        t = parse_term(pieces[0].strip(), sig)
        e = parse_term(pieces[1].strip(), sig)
        if not isinstance(e, Eps):
            raise ParseError(f"proof line {lineno}: second critical argument must be an eps term")
        return CriticalAxiom(t, e)
    if text.startswith("taut"):
        rest = text[len("taut"):].split()
        if not all(w.isdigit() and int(w) >= 1 for w in rest):
            raise ParseError(f"proof line {lineno}: taut premises must be positive indices")
        return TautConsequence(tuple(int(w) - 1 for w in rest))
    raise ParseError(f"proof line {lineno}: unknown justification {text!r}")
