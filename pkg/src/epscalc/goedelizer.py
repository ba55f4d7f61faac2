"""Arithmetization: monotone numbering, proof predicate, and the star sentences.

The numbering is a prefix-free bit stream: every object is serialized
as a self-delimiting sequence of 5-bit constructor tags and
Elias-gamma-coded numbers, and the code is the stream read as a binary
numeral behind a leading guard bit.  Every constituent's stream is a
strict substream of its parent's, so a parent's code strictly exceeds
every constituent's code, and in particular a proof's code exceeds the
index of every numeral written in it — the inequality the whole
construction leans on.

The sentence builders arithmetize the claim 'every provable Pi-2
sentence has provable instances' in three shapes: the two-variable
general form, its diagonal, and the diagonal's prenex normal form whose
matrix is quantifier-free (the instance index is bounded by the
instance proof's own code).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .evaluator import Assignment, eval_qf, BudgetExceeded, DEFAULT_BUDGET
from .kernel import (
    ProofBuilder, ProofConstructionError, check_eps_proof,
    prove_true_pr_sentence,
)
from .epsilonizer import epsilon_translate
from .syntax import (
    And, App, BoundedExists, BoundedForall, BVar, CriticalAxiom, Eps,
    EpsProof, Eq, Exists, Forall, IdentityAxiom, Implies, NonLogicalAxiom,
    Not, Num, Or, ProofLine, RecursionAxiom, Signature, Succ,
    TautConsequence, Term, Var, bexists, exists, forall, free_vars,
    instantiate, is_quantifier_free, iter_nodes, numeral, parse_formula,
    shift, subst_free, to_text, _dangling,
)


class DecodeError(Exception):
    """The number is not the code of any syntax object."""


# ---------------------------------------------------------------------------
# Bit-stream codec

_TAG_BITS = 5

_T_NUM, _T_SUCC, _T_VAR, _T_BVAR, _T_APP, _T_EPS = 1, 2, 3, 4, 5, 6
_T_EQ, _T_NOT, _T_AND, _T_OR, _T_IMPLIES = 7, 8, 9, 10, 11
_T_BFORALL, _T_BEXISTS, _T_FORALL, _T_EXISTS = 12, 13, 14, 15
_T_PROOF = 16
_T_JREC, _T_JID, _T_JCRIT, _T_JAX, _T_JTAUT = 17, 18, 19, 20, 21

_FORMULA_TAGS = {And: _T_AND, Or: _T_OR, Implies: _T_IMPLIES}


class _Writer:
    def __init__(self):
        self.parts: List[str] = []

    def bits(self, value: int, width: int):
        self.parts.append(format(value, f"0{width}b") if width else "")

    def tag(self, t: int):
        self.bits(t, _TAG_BITS)

    def nat(self, n: int):
        # Elias delta of n + 1: length-of-length in unary, then the length,
        # then the value without its leading bit.  Numerals as large as
        # proof codes cost only their own bit length plus a logarithmic
        # header, which keeps nested codes near-linear.
        v = n + 1
        b = v.bit_length()
        lb = b.bit_length()
        self.parts.append("0" * (lb - 1) + format(b, "b"))
        if b > 1:
            self.parts.append(format(v - (1 << (b - 1)), f"0{b - 1}b"))

    def text(self, s: str):
        data = s.encode("ascii")
        self.nat(len(data))
        for byte in data:
            self.bits(byte, 8)

    def value(self) -> int:
        return int("1" + "".join(self.parts), 2)


class _Reader:
    def __init__(self, code: int):
        if not isinstance(code, int) or code < 1:
            raise DecodeError("codes are positive integers")
        self.s = format(code, "b")[1:]  # strip the guard bit
        self.i = 0

    def bits(self, width: int) -> int:
        if self.i + width > len(self.s):
            raise DecodeError("truncated code")
        v = int(self.s[self.i:self.i + width], 2) if width else 0
        self.i += width
        return v

    def tag(self) -> int:
        return self.bits(_TAG_BITS)

    def nat(self) -> int:
        zeros = 0
        while self.i < len(self.s) and self.s[self.i] == "0":
            zeros += 1
            self.i += 1
        if self.i >= len(self.s):
            raise DecodeError("truncated number")
        b = self.bits(zeros + 1)
        if b < 1:
            raise DecodeError("bad number length")
        v = (1 << (b - 1)) | self.bits(b - 1)
        return v - 1

    def text(self) -> str:
        n = self.nat()
        try:
            return bytes(self.bits(8) for _ in range(n)).decode("ascii")
        except UnicodeDecodeError as e:
            raise DecodeError("bad name bytes") from e

    def done(self) -> bool:
        return self.i == len(self.s)


def _write(w: _Writer, x) -> None:
    if isinstance(x, Num):
        w.tag(_T_NUM)
        w.nat(x.value)
    elif isinstance(x, Succ):
        w.tag(_T_SUCC)
        _write(w, x.arg)
    elif isinstance(x, Var):
        w.tag(_T_VAR)
        w.text(x.name)
    elif isinstance(x, BVar):
        w.tag(_T_BVAR)
        w.nat(x.index)
    elif isinstance(x, App):
        w.tag(_T_APP)
        w.text(x.sym)
        w.nat(len(x.args))
        for a in x.args:
            _write(w, a)
    elif isinstance(x, Eps):
        w.tag(_T_EPS)
        _write(w, x.body)
    elif isinstance(x, Eq):
        w.tag(_T_EQ)
        _write(w, x.lhs)
        _write(w, x.rhs)
    elif isinstance(x, Not):
        w.tag(_T_NOT)
        _write(w, x.body)
    elif isinstance(x, (And, Or, Implies)):
        w.tag(_FORMULA_TAGS[type(x)])
        _write(w, x.lhs)
        _write(w, x.rhs)
    elif isinstance(x, (BoundedForall, BoundedExists)):
        w.tag(_T_BFORALL if isinstance(x, BoundedForall) else _T_BEXISTS)
        _write(w, x.bound)
        _write(w, x.body)
    elif isinstance(x, (Forall, Exists)):
        w.tag(_T_FORALL if isinstance(x, Forall) else _T_EXISTS)
        _write(w, x.body)
    elif isinstance(x, EpsProof):
        w.tag(_T_PROOF)
        w.nat(len(x.lines))
        for line in x.lines:
            _write(w, line.formula)
            _write_just(w, line.justification)
    else:
        raise TypeError(f"cannot encode {x!r}")


def _write_just(w: _Writer, j) -> None:
    if isinstance(j, RecursionAxiom):
        w.tag(_T_JREC)
    elif isinstance(j, IdentityAxiom):
        w.tag(_T_JID)
    elif isinstance(j, CriticalAxiom):
        w.tag(_T_JCRIT)
        _write(w, j.term)
        _write(w, j.eps_term)
    elif isinstance(j, NonLogicalAxiom):
        w.tag(_T_JAX)
        w.nat(j.index)
    elif isinstance(j, TautConsequence):
        w.tag(_T_JTAUT)
        w.nat(len(j.premises))
        for p in j.premises:
            w.nat(p)
    else:
        raise TypeError(f"cannot encode justification {j!r}")


def encode(x) -> int:
    """Goedel code of a term, formula, or proof."""
    w = _Writer()
    _write(w, x)
    return w.value()


_TERM_TAGS = {_T_NUM, _T_SUCC, _T_VAR, _T_BVAR, _T_APP, _T_EPS}


def _read(r: _Reader):
    t = r.tag()
    if t == _T_NUM:
        return Num(r.nat())
    if t == _T_SUCC:
        arg = _read_term(r)
        if isinstance(arg, Num):
            raise DecodeError("non-canonical numeral")
        return Succ(arg)
    if t == _T_VAR:
        return Var(r.text())
    if t == _T_BVAR:
        return BVar(r.nat())
    if t == _T_APP:
        sym = r.text()
        n = r.nat()
        return App(sym, tuple(_read_term(r) for _ in range(n)))
    if t == _T_EPS:
        return Eps(_read_formula(r))
    if t == _T_EQ:
        return Eq(_read_term(r), _read_term(r))
    if t == _T_NOT:
        return Not(_read_formula(r))
    if t in (_T_AND, _T_OR, _T_IMPLIES):
        cls = {_T_AND: And, _T_OR: Or, _T_IMPLIES: Implies}[t]
        return cls(_read_formula(r), _read_formula(r))
    if t in (_T_BFORALL, _T_BEXISTS):
        cls = BoundedForall if t == _T_BFORALL else BoundedExists
        return cls(_read_term(r), _read_formula(r))
    if t in (_T_FORALL, _T_EXISTS):
        cls = Forall if t == _T_FORALL else Exists
        return cls(_read_formula(r))
    if t == _T_PROOF:
        n = r.nat()
        lines = []
        for _ in range(n):
            f = _read_formula(r)
            lines.append(ProofLine(f, _read_just(r)))
        return EpsProof(tuple(lines))
    raise DecodeError(f"unknown tag {t}")


def _read_term(r: _Reader) -> Term:
    x = _read(r)
    if not isinstance(x, (Num, Succ, Var, BVar, App, Eps)):
        raise DecodeError("expected a term")
    return x


def _read_formula(r: _Reader):
    x = _read(r)
    if isinstance(x, (Num, Succ, Var, BVar, App, Eps, EpsProof)):
        raise DecodeError("expected a formula")
    return x


def _read_just(r: _Reader):
    t = r.tag()
    if t == _T_JREC:
        return RecursionAxiom()
    if t == _T_JID:
        return IdentityAxiom()
    if t == _T_JCRIT:
        term = _read_term(r)
        e = _read_term(r)
        if not isinstance(e, Eps):
            raise DecodeError("critical justification needs an eps term")
        return CriticalAxiom(term, e)
    if t == _T_JAX:
        return NonLogicalAxiom(r.nat())
    if t == _T_JTAUT:
        n = r.nat()
        return TautConsequence(tuple(r.nat() for _ in range(n)))
    raise DecodeError(f"unknown justification tag {t}")


def decode(code: int):
    """Inverse of encode; raises DecodeError on numbers that code nothing."""
    r = _Reader(code)
    x = _read(r)
    if not r.done():
        raise DecodeError("trailing bits")
    return x


# ---------------------------------------------------------------------------
# Proof predicate and Pi-2 recognition

def proof_pred(p: int, f: int, sig: Signature, axioms: Sequence) -> bool:
    """p codes an accepted proof whose final line codes to f.  Total."""
    try:
        proof = decode(p)
        formula = decode(f)
    except DecodeError:
        return False
    if not isinstance(proof, EpsProof) or isinstance(formula, (EpsProof,)) \
            or isinstance(formula, (Num, Succ, Var, BVar, App, Eps)):
        return False
    if not proof.lines or proof.final() != formula:
        return False
    return bool(check_eps_proof(proof, sig, axioms))


@dataclass(frozen=True)
class Pi2Shape:
    ok: bool
    matrix: Optional[object] = None    # open formula in named variables x, y
    sentence: Optional[Forall] = None


def pi2_recognizer(f: int) -> Pi2Shape:
    """Recognize codes of sentences (all x)(ex y) A(x, y) with A
    quantifier-free (bounded quantifiers allowed).  Total."""
    try:
        g = decode(f)
    except DecodeError:
        return Pi2Shape(False)
    if not isinstance(g, Forall) or not isinstance(g.body, Exists):
        return Pi2Shape(False)
    matrix = g.body.body
    if not is_quantifier_free(matrix):
        return Pi2Shape(False)
    named = instantiate(instantiate(matrix, Var("y")), Var("x"))
    return Pi2Shape(True, named, g)


# ---------------------------------------------------------------------------
# Recovering a Pi-2 sentence from its epsilon translation

def _eps_candidates(f) -> List[Eps]:
    """Eps subterm objects of f re-expressed relative to f's root."""
    out: List[Eps] = []
    seen = set()

    def walk(x, depth):
        if isinstance(x, Eps):
            cand = _unshift(x, depth)
            if cand is not None and cand not in seen:
                seen.add(cand)
                out.append(cand)
            walk(x.body, depth + 1)
        elif isinstance(x, Succ):
            walk(x.arg, depth)
        elif isinstance(x, App):
            for a in x.args:
                walk(a, depth)
        elif isinstance(x, Eq):
            walk(x.lhs, depth)
            walk(x.rhs, depth)
        elif isinstance(x, Not):
            walk(x.body, depth)
        elif isinstance(x, (And, Or, Implies)):
            walk(x.lhs, depth)
            walk(x.rhs, depth)
        elif isinstance(x, (BoundedForall, BoundedExists)):
            walk(x.bound, depth)
            walk(x.body, depth + 1)
        elif isinstance(x, (Forall, Exists)):
            walk(x.body, depth + 1)

    walk(f, 0)
    return out


def _unshift(e: Eps, depth: int) -> Optional[Eps]:
    if depth == 0:
        return e
    ok = True

    def check(x, d):
        nonlocal ok
        if isinstance(x, BVar) and d <= x.index < d + depth:
            ok = False
        return x

    from .syntax import _map_terms, _term_map

    def go(t, d):
        check(t, d)
        return _term_map(t, go, d)

    _map_terms(e, go, 0)
    if not ok:
        return None
    return shift(e, -depth)


def untranslate_pi2(qf) -> Optional[Tuple[Forall, object]]:
    """Invert the epsilon translation on Pi-2 shapes.

    Returns (sentence, de-Bruijn matrix under two binders) for the
    first candidate, in printed-text order, whose translation equals qf;
    None when qf is not the translation of any such sentence.
    """
    outer = [e for e in _eps_candidates(qf)
             if isinstance(e.body, Not) and _dangling(e, 0) == 0
             and not free_vars(e)]
    for e_x in sorted(outer, key=to_text):
        body = e_x.body.body
        if instantiate(body, e_x) != qf:
            continue
        inner = [e for e in _eps_candidates(body) if _dangling(e, 0) <= 1]
        for e_y in sorted(inner, key=to_text):
            matrix = e_y.body
            if not is_quantifier_free(matrix):
                continue
            if any(isinstance(n, Eps) for n in iter_nodes(matrix)):
                continue
            if instantiate(matrix, e_y) != body:
                continue
            sentence = Forall(Exists(matrix))
            if epsilon_translate(sentence) == qf:
                return sentence, matrix
    return None


# ---------------------------------------------------------------------------
# The star sentences

PROVES_PI2 = "provespi2"
PROVES_INST = "provesinst"


@dataclass(frozen=True)
class StarFormula:
    formula: object
    form: str                 # star | doublestar | triplestar
    matrix: Optional[object]  # A***(x, y) with free variables x and y


class _Analyzer:
    """Shared semantics behind the registered opaque proof predicates."""

    def __init__(self, sig: Signature, axioms: Sequence):
        self.sig = sig
        self.axioms = list(axioms)
        self._cache: dict = {}

    def analyze(self, code: int):
        """Matrix (under two binders) of the Pi-2 sentence whose
        translation the coded proof establishes, if any."""
        hit = self._cache.get(code, "?")
        if hit != "?":
            return hit
        result = None
        try:
            obj = decode(code)
        except DecodeError:
            obj = None
        if isinstance(obj, EpsProof) and obj.lines \
                and check_eps_proof(obj, self.sig, self.axioms):
            found = untranslate_pi2(obj.final())
            if found is not None:
                result = found[1]
        self._cache[code] = result
        return result

    def proves_pi2(self, x: int) -> int:
        return 1 if self.analyze(x) is not None else 0

    def proves_inst(self, x1: int, x2: int, y: int, n: int) -> int:
        matrix = self.analyze(x1)
        if matrix is None:
            return 0
        target = instantiate(instantiate(matrix, numeral(n)), numeral(x2))
        try:
            obj = decode(y)
        except DecodeError:
            return 0
        if not isinstance(obj, EpsProof) or not obj.lines:
            return 0
        if obj.final() != target:
            return 0
        return 1 if check_eps_proof(obj, self.sig, self.axioms) else 0


def register_proof_symbols(sig: Signature, axioms: Sequence) -> None:
    """Extend the signature with the arithmetized proof predicates.

    They are primitive recursive (the checker is a finite mechanical
    procedure and the axiom set is finite), but their recursion
    equations are not spelled out term by term: the symbols are flagged
    opaque and their semantics delegated to the checker itself.
    """
    if PROVES_PI2 in sig and PROVES_INST in sig:
        return
    analyzer = _Analyzer(sig, axioms)
    sig.declare_opaque(PROVES_PI2, 1, analyzer.proves_pi2,
                       note="opaque-PR: accepted proof of a Pi-2 translation")
    sig.declare_opaque(PROVES_INST, 4, analyzer.proves_inst,
                       note="opaque-PR: proof of a numeral instance")


def _antecedent(xname: str):
    return Eq(App(PROVES_PI2, (Var(xname),)), Num(1))


def _consequent_atom(x1: str, x2: str, y: str, n: str):
    return Eq(App(PROVES_INST, (Var(x1), Var(x2), Var(y), Var(n))), Num(1))


def build_star(sig: Signature, axioms: Sequence) -> StarFormula:
    """(x1)(x2)(x1 proves a Pi-2 sentence -> (ex y)(y proves its instance
    at x2, with the instance index bounded by y)."""
    register_proof_symbols(sig, axioms)
    f = forall("x1", forall("x2", Implies(
        _antecedent("x1"),
        exists("y", bexists("n", Var("y"),
                            _consequent_atom("x1", "x2", "y", "n"))))))
    return StarFormula(f, "star", None)


def build_doublestar(sig: Signature, axioms: Sequence) -> StarFormula:
    """The diagonal of the general form: both numbers are the same x."""
    register_proof_symbols(sig, axioms)
    f = forall("x", Implies(
        _antecedent("x"),
        exists("y", bexists("n", Var("y"),
                            _consequent_atom("x", "x", "y", "n")))))
    return StarFormula(f, "doublestar", None)


def build_triplestar(sig: Signature, axioms: Sequence) -> StarFormula:
    """Prenex normal form of the diagonal, with quantifier-free matrix."""
    register_proof_symbols(sig, axioms)
    matrix = Implies(
        _antecedent("x"),
        bexists("n", Var("y"), _consequent_atom("x", "x", "y", "n")))
    f = forall("x", exists("y", matrix))
    return StarFormula(f, "triplestar", matrix)


def star_matrix_instance(star: StarFormula, p: int, y: int):
    """A***(0^(p), 0^(y)) as a closed quantifier-free formula."""
    if star.matrix is None:
        raise ValueError("only the triplestar form has a designated matrix")
    return subst_free(subst_free(star.matrix, "x", numeral(p)), "y", numeral(y))


# ---------------------------------------------------------------------------
# Quantifier contraction

def contract_quantifiers(f):
    """Replace >= 2 leading universal quantifiers by a single one, the
    original variables bounded below the fresh variable."""
    count = 0
    g = f
    while isinstance(g, Forall):
        count += 1
        g = g.body
    if count < 2:
        raise ValueError("need at least two leading universal quantifiers")
    for i in range(count - 1, -1, -1):
        g = BoundedForall(BVar(i), g)
    return Forall(g)


# ---------------------------------------------------------------------------
# Instance checking

@dataclass
class InstanceRow:
    p: int
    y: Optional[int]
    anomaly: bool
    note: str
    instance_proof: Optional[EpsProof] = None


@dataclass
class InstanceReport:
    rows: List[InstanceRow]

    @property
    def anomalies(self) -> int:
        return sum(1 for r in self.rows if r.anomaly)

    def to_tsv(self) -> str:
        out = []
        for r in self.rows:
            y = "-" if r.y is None else str(r.y)
            out.append(f"{r.p}\t{y}\t{int(r.anomaly)}\t{r.note}")
        return "\n".join(out) + "\n"


def _least_y_by_enumeration(instance_of, sig, cap, budget) -> Optional[int]:
    for y in range(cap + 1):
        if eval_qf(instance_of(y), sig, Assignment(), budget):
            return y
    return None


def check_instances(star: StarFormula, range_max: int, sig: Signature,
                    axioms: Sequence, extra_codes: Sequence = (),
                    cap: int = 64, witness_cap: int = 1000,
                    budget: int = DEFAULT_BUDGET,
                    build_proofs: bool = True) -> InstanceReport:
    """Check the numerical instances of the prenex star sentence.

    For each p the report records the least y making A***(p, y) true.
    When p codes no accepted Pi-2 proof the antecedent is false and
    enumeration finds y (normally 0) directly.  When p is a genuine
    proof code, no enumeration can reach the least witness — it is the
    code of an instance proof — so the witness is constructed: the
    instance's least index is found by brute force, its proof is built
    and encoded, and the resulting y is verified by evaluation.  Each
    row also carries a formal proof of the instance A***(p, y) where
    construction is feasible.
    """
    if star.matrix is None:
        raise ValueError("check_instances needs the triplestar form")
    analyzer_fn = sig.lookup(PROVES_PI2).fn
    rows: List[InstanceRow] = []
    codes = list(range(range_max + 1)) + list(extra_codes)
    for p in codes:
        try:
            rows.append(_check_one(star, p, analyzer_fn, sig, axioms, cap,
                                   witness_cap, budget, build_proofs))
        except (BudgetExceeded, ProofConstructionError, DecodeError) as e:
            rows.append(InstanceRow(p, None, True, f"error: {e}"))
    return InstanceReport(rows)


def _check_one(star, p, analyzer_fn, sig, axioms, cap, witness_cap, budget,
               build_proofs) -> InstanceRow:
    instance_of = lambda y: star_matrix_instance(star, p, y)
    if analyzer_fn(p) != 1:
        y = _least_y_by_enumeration(instance_of, sig, cap, budget)
        if y is None:
            return InstanceRow(p, None, True, "no witness below cap")
        proof = None
        if build_proofs:
            proof = prove_true_pr_sentence(instance_of(y), sig, axioms, budget)
        return InstanceRow(p, y, False, "antecedent false", proof)
    # p proves a Pi-2 sentence: construct the witness proof directly
    # (the least y is itself a proof code, far beyond enumeration)
    matrix = _decode_matrix(p, sig, axioms)
    sigma_instance = lambda n: instantiate(instantiate(matrix, numeral(n)),
                                           numeral(p))
    n0 = None
    for n in range(witness_cap + 1):
        if eval_qf(sigma_instance(n), sig, Assignment(), budget):
            n0 = n
            break
    if n0 is None:
        return InstanceRow(p, None, True,
                           "no instance index below witness cap")
    inst_proof = prove_true_pr_sentence(sigma_instance(n0), sig, axioms, budget)
    y = encode(inst_proof)
    if not eval_qf(instance_of(y), sig, Assignment(), budget):
        return InstanceRow(p, y, True, "constructed witness fails to verify")
    proof = None
    if build_proofs:
        proof = prove_true_pr_sentence(instance_of(y), sig, axioms, budget)
    return InstanceRow(p, y, False, f"constructed instance proof, index {n0}",
                       proof)


def _decode_matrix(p: int, sig, axioms):
    proof = decode(p)
    found = untranslate_pi2(proof.final())
    if found is None:
        raise DecodeError("no Pi-2 sentence behind this code")
    return found[1]


# ---------------------------------------------------------------------------
# A worked positive case: a small Pi-2 sentence and its epsilon proof

def example_pi2_sentence(sig: Signature):
    """all x. ex y. lt(times(x, 0), S(y)) = 1 — chosen so that instance
    proofs at enormous numerals stay short: times(t, 0) rewrites to 0 by
    a single base equation whatever t is."""
    return parse_formula("all x. ex y. lt(times(x, 0), S(y)) = 1", sig)


def example_pi2_proof(sig: Signature, axioms: Sequence) -> EpsProof:
    """An accepted epsilon proof of the example sentence's translation."""
    sentence = example_pi2_sentence(sig)
    goal = epsilon_translate(sentence)
    b = ProofBuilder(sig, axioms)
    idx = b.prove(goal, True)
    if b.lines[-1].formula != goal:
        b.lines.append(ProofLine(goal, TautConsequence((idx,))))
    return b.proof()
