"""Command-line frontend: thin wrappers over the library modules.

Exit codes are fixed for scriptable pipelines:
  0 success, 2 input parse error, 3 substitution procedure gave up,
  4 false epsilon-free axiom, 5 rejected proof, 64 usage error.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import goedelizer as gd
from . import kernel
from .epsilonizer import epsilon_translate, rank
from .evaluator import Assignment, BudgetExceeded, DEFAULT_BUDGET
from .extractor import ExtractionError, SolverNonTermination, extract_witness
from .solver import DEFAULT_MAX_STEPS, FalseAxiom, Problem, solve
from .epsilonizer import critical_formula
from .syntax import (
    Eps, ParseError, Signature, SignatureError, closed_eps_subterms,
    format_proof, parse_formula, parse_proof, parse_term, prelude, to_text,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NONTERMINATION = 3
EXIT_FALSE_AXIOM = 4
EXIT_REJECTED = 5
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_sig(path: Optional[str]) -> Signature:
    if path is None:
        return prelude()
    return Signature.parse(_read(path))


def _load_axioms(path: Optional[str], sig: Signature) -> list:
    if path is None:
        return kernel.default_axioms()
    out = []
    for raw in _read(path).splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse_formula(line, sig))
    return out


def _first_formula_line(text: str) -> str:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            return line
    raise ParseError("no formula found in input")


def _load_problem(text: str, sig: Signature) -> Problem:
    axioms = []
    criticals = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("axiom "):
            axioms.append(parse_formula(line[len("axiom "):], sig))
        elif line.startswith("critical "):
            parts = line[len("critical "):].split(";")
            if len(parts) != 2:
                raise ParseError(f"problem line {lineno}: critical needs 'term ; eps-term'")
            t = parse_term(parts[0].strip(), sig)
            e = parse_term(parts[1].strip(), sig)
            if not isinstance(e, Eps):
                raise ParseError(f"problem line {lineno}: not an eps term")
            criticals.append(critical_formula(t, e))
        else:
            raise ParseError(f"problem line {lineno}: expected 'axiom ...' or 'critical ...'")
    return Problem.make(axioms, criticals)


def _cmd_translate(args) -> int:
    sig = _load_sig(args.sig)
    f = parse_formula(_first_formula_line(_read(args.input)), sig)
    qf = epsilon_translate(f)
    out = to_text(qf) + "\n"
    if args.print_rank:
        for e in sorted(closed_eps_subterms(qf), key=to_text):
            out += f"# rank {rank(e)}  {to_text(e)}\n"
    _write(args.output, out)
    return EXIT_OK


def _cmd_solve(args) -> int:
    sig = _load_sig(args.sig)
    problem = _load_problem(_read(args.input), sig)
    try:
        result = solve(problem, sig, args.max_steps, args.budget)
    except FalseAxiom as e:
        print(f"false axiom: {to_text(e.formula)}", file=sys.stderr)
        return EXIT_FALSE_AXIOM
    if args.trace:
        _write(args.trace, result.trace.dump())
    if not result.ok:
        print(f"gave up after {result.trace.step_count} step(s): "
              f"{result.trace.note}", file=sys.stderr)
        return EXIT_NONTERMINATION
    lines = sorted((to_text(e), v) for e, v in result.assignment.items())
    body = "".join(f"{v}\t{e}\n" for e, v in lines)
    _write(args.output, body if body else "# all epsilon terms zero\n")
    return EXIT_OK


def _cmd_extract(args) -> int:
    sig = _load_sig(args.sig)
    axioms = _load_axioms(args.axioms, sig)
    proof = parse_proof(_read(args.input), sig)
    e = parse_term(args.eps_term, sig)
    if not isinstance(e, Eps):
        print("--eps-term must be an epsilon term", file=sys.stderr)
        return EXIT_PARSE
    try:
        result = extract_witness(proof, e, sig, axioms, args.max_steps, args.budget)
    except SolverNonTermination as err:
        print(str(err), file=sys.stderr)
        return EXIT_NONTERMINATION
    except ExtractionError as err:
        print(str(err), file=sys.stderr)
        return EXIT_REJECTED
    print(f"witness: {result.witness}")
    if result.note:
        print(f"note: {result.note}")
    if result.instance_proof is not None:
        _write(args.output, format_proof(result.instance_proof))
    return EXIT_OK


def _cmd_check(args) -> int:
    sig = _load_sig(args.sig)
    axioms = _load_axioms(args.axioms, sig)
    proof = parse_proof(_read(args.input), sig)
    verdict = kernel.check_eps_proof(proof, sig, axioms)
    if verdict:
        print(f"accepted ({len(proof.lines)} lines)")
        return EXIT_OK
    print(f"rejected at line {verdict.line}: {verdict.reason}")
    return EXIT_REJECTED


def _cmd_goedel(args) -> int:
    sig = _load_sig(args.sig)
    axioms = _load_axioms(args.axioms, sig)
    if args.goedel_cmd == "build-star":
        builder = {"star": gd.build_star, "doublestar": gd.build_doublestar,
                   "triplestar": gd.build_triplestar}[args.form]
        star = builder(sig, axioms)
        _write(args.output, to_text(star.formula) + "\n")
        return EXIT_OK
    if args.goedel_cmd == "encode":
        text = _first_formula_line(_read(args.input))
        _write(args.output, str(gd.encode(parse_formula(text, sig))) + "\n")
        return EXIT_OK
    if args.goedel_cmd == "decode":
        text = args.code if args.code is not None else _read("-").strip()
        if not text.isdigit():
            raise ParseError("decode expects a decimal code")
        obj = gd.decode(int(text))
        _write(args.output, to_text(obj) + ("\n" if not str(to_text(obj)).endswith("\n") else ""))
        return EXIT_OK
    if args.goedel_cmd == "check-instances":
        star = gd.build_triplestar(sig, axioms)
        extras = []
        if args.example:
            extras.append(gd.encode(gd.example_pi2_proof(sig, axioms)))
        report = gd.check_instances(star, args.range, sig, axioms,
                                    extra_codes=extras, budget=args.budget,
                                    build_proofs=not args.no_proofs)
        _write(args.output, report.to_tsv())
        if report.anomalies:
            print(f"{report.anomalies} anomalies", file=sys.stderr)
        return EXIT_OK
    raise _UsageError("unknown goedel subcommand")


def _build_parser() -> _Parser:
    p = _Parser(prog="epscalc", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--sig", help="signature file (default: built-in prelude)")
    p.add_argument("--axioms", help="axiom file, one closed QF formula per line "
                                    "(default: epsilon forms of the successor axioms)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="evaluation step budget")
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)

    sp = sub.add_parser("translate", help="epsilon-translate a formula file")
    sp.add_argument("input")
    sp.add_argument("-o", "--output")
    sp.add_argument("--print-rank", action="store_true",
                    help="append a rank table of the epsilon terms")
    sp.set_defaults(fn=_cmd_translate)

    sp = sub.add_parser("solve", help="run the substitution procedure on a problem file")
    sp.add_argument("input")
    sp.add_argument("-o", "--output")
    sp.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    sp.add_argument("--trace", help="write the step trace to this file")
    sp.set_defaults(fn=_cmd_solve)

    sp = sub.add_parser("extract", help="extract a numeral witness from a proof")
    sp.add_argument("input")
    sp.add_argument("--eps-term", required=True,
                    help="the designated epsilon term of the final line")
    sp.add_argument("-o", "--output", help="instance proof output file")
    sp.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    sp.set_defaults(fn=_cmd_extract)

    sp = sub.add_parser("check", help="check an epsilon proof file")
    sp.add_argument("input")
    sp.set_defaults(fn=_cmd_check)

    sp = sub.add_parser("goedel", help="arithmetization commands")
    gsub = sp.add_subparsers(dest="goedel_cmd", parser_class=_Parser)
    g1 = gsub.add_parser("build-star", help="construct a star sentence")
    g1.add_argument("--form", choices=["star", "doublestar", "triplestar"],
                    default="triplestar")
    g1.add_argument("-o", "--output")
    g2 = gsub.add_parser("check-instances", help="instance-check the prenex star sentence")
    g2.add_argument("--range", type=int, required=True)
    g2.add_argument("--example", action="store_true",
                    help="also check the bundled positive proof code")
    g2.add_argument("--no-proofs", action="store_true",
                    help="skip constructing per-instance proofs")
    g2.add_argument("-o", "--output")
    g3 = gsub.add_parser("encode", help="Goedel-encode a formula file")
    g3.add_argument("input")
    g3.add_argument("-o", "--output")
    g4 = gsub.add_parser("decode", help="decode a Goedel code (argument or stdin)")
    g4.add_argument("code", nargs="?")
    g4.add_argument("-o", "--output")
    sp.set_defaults(fn=_cmd_goedel)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    sys.setrecursionlimit(100_000)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError:
        return EXIT_USAGE
    if not getattr(args, "cmd", None):
        parser.print_help()
        return EXIT_USAGE
    if args.cmd == "goedel" and not getattr(args, "goedel_cmd", None):
        parser.print_help()
        return EXIT_USAGE
    try:
        return args.fn(args)
    except _UsageError:
        return EXIT_USAGE
    except (ParseError, SignatureError, gd.DecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NONTERMINATION


if __name__ == "__main__":
    sys.exit(main())
