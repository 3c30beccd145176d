"""Command-line interface: ``modlg <subcommand> ...`` prints one JSON report.

Exit codes: 0 success (any verdict), 2 precondition violated, 3 cap or
search budget exceeded, 4 malformed input.
"""

import argparse
import json
import sys
import time
from math import gcd

from . import __version__
from .errors import (
    BadReduction,
    CapExceeded,
    InvalidModulus,
    NotInvertible,
    NotTraceZero,
    ParseError,
    PreconditionViolated,
    SearchExhausted,
    ShapeMismatch,
    SmallPrime,
    Unsupported,
)
from .families import GroupFamily
from .galrep import CurveQ, collect_samples, mod_m_verdict
from .groups import GeneratedGroup, default_cap
from .lifting import construct_counterexample, lift_check_sl2, square_zero_decompose
from .modular import MAX_DEGREE, MAX_MODULUS, MatrixModM, is_invertible, is_prime
from .occ import DEFAULT_CAP as OCC_DEFAULT_CAP
from .occ import composition_factors
from .sampling import random_subgroups
from .verdicts import Status, check_delta_pair, check_gsp, check_surjectivity_gl2

EXIT_OK, EXIT_PRECONDITION, EXIT_CAP, EXIT_PARSE = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


# -- input parsing -------------------------------------------------------------


def parse_generator_file(text, modulus=None):
    """Parse ``{"modulus": M, "degree": N, "generators": [...]}``.

    A report printed by ``counterexample`` is accepted too (its payload is a
    generator file). Errors name the offending generator index.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
    if isinstance(data, dict) and isinstance(data.get("payload"), dict) and "generators" in data["payload"]:
        data = data["payload"]
    if not isinstance(data, dict):
        raise ParseError("generator file must be a JSON object")
    for key in ("modulus", "degree", "generators"):
        if key not in data:
            raise ParseError(f"missing key {key!r}")
    m, n, gens = data["modulus"], data["degree"], data["generators"]
    if not _is_int(m) or not 2 <= m <= MAX_MODULUS:
        raise ParseError(f"modulus must be an integer in [2, {MAX_MODULUS}]")
    if not _is_int(n) or not 1 <= n <= MAX_DEGREE:
        raise ParseError(f"degree must be an integer in [1, {MAX_DEGREE}]")
    if modulus is not None and modulus != m:
        raise ParseError(f"--modulus {modulus} disagrees with file modulus {m}")
    if not isinstance(gens, list):
        raise ParseError("generators must be a list")
    out = []
    for i, rows in enumerate(gens):
        shape_ok = isinstance(rows, list) and len(rows) == n and all(isinstance(r, list) and len(r) == n for r in rows)
        if not shape_ok:
            raise ParseError(f"generator {i}: expected a {n}x{n} nested list", index=i)
        if not all(_is_int(x) for r in rows for x in r):
            raise ParseError(f"generator {i}: entries must be integers", index=i)
        A = MatrixModM.from_rows(rows, m)
        if not is_invertible(A):
            raise ParseError(f"generator {i}: not invertible mod {m}", index=i)
        out.append(A)
    return GeneratedGroup(out, m=m, degree=n)


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def _read_group(path, modulus):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_generator_file(text, modulus)


def _parse_det(spec):
    if spec == "full":
        return None
    if spec.startswith("power:"):
        try:
            k = int(spec[len("power:"):])
        except ValueError:
            raise ParseError(f"bad --det value {spec!r}") from None
        if k < 1:
            raise ParseError("--det power:K needs K >= 1")
        return GroupFamily.DetPower(2, k)
    raise ParseError(f"bad --det value {spec!r}; use full or power:K")


def _parse_curve(text):
    parts = text.split(",")
    if len(parts) != 5:
        raise ParseError("--curve needs five comma-separated integers a1,a2,a3,a4,a6")
    try:
        coeffs = [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"--curve has a non-integer coefficient: {text!r}") from None
    return CurveQ(*coeffs)


def generator_file(G):
    return {"modulus": G.m, "degree": G.n, "generators": [A.rows() for A in G.generators]}


# -- subcommands ---------------------------------------------------------------
# Each returns (payload, seed, caps, exit code).


def _verdict_result(verdict, caps=None):
    code = EXIT_PRECONDITION if verdict.status is Status.PRECONDITION_VIOLATED else EXIT_OK
    return verdict.to_dict(), None, caps or {}, code


def cmd_check_surj(args):
    G = _read_group(args.generators, args.modulus)
    return _verdict_result(check_surjectivity_gl2(G, _parse_det(args.det)))


def cmd_check_delta(args):
    G = _read_group(args.generators, args.modulus)
    return _verdict_result(check_delta_pair(G))


def cmd_check_gsp(args):
    G = _read_group(args.generators, args.modulus)
    return _verdict_result(check_gsp(G, args.genus))


def cmd_occ(args):
    G = _read_group(args.generators, args.modulus)
    cap = args.cap if args.cap is not None else OCC_DEFAULT_CAP
    report = composition_factors(G, cap)
    return report.to_dict(), None, {"occ": cap}, EXIT_OK


def _require_prime(ell, lower):
    if not is_prime(ell) or ell < lower:
        raise PreconditionViolated(f"ell must be a prime >= {lower}")


def cmd_lift_sl2(args):
    _require_prime(args.ell, 5)
    if args.r < 1:
        raise PreconditionViolated("r >= 1")
    if args.trials < 0:
        raise ParseError("--trials must be non-negative")
    m = args.ell**args.r
    counts = {"proj_full": 0, "full": 0, "violations": 0, "converse_violations": 0}
    for H in random_subgroups("SL2", m, args.trials, args.seed):
        proj_full, full = lift_check_sl2(args.ell, args.r, H)
        counts["proj_full"] += proj_full
        counts["full"] += full
        counts["violations"] += proj_full and not full
        counts["converse_violations"] += full and not proj_full
    payload = {"ell": args.ell, "r": args.r, "trials": args.trials, **counts}
    payload["passed"] = counts["violations"] == 0 and counts["converse_violations"] == 0
    return payload, args.seed, {}, EXIT_OK


def _decomposition_ok(A, parts):
    zero = MatrixModM(A.n, A.m, (0,) * (A.n * A.n))
    total = zero
    for N in parts:
        total = total + N
    return len(parts) <= 4 and all((N @ N).is_zero() for N in parts) and total == A


def cmd_square_zero(args):
    _require_prime(args.ell, 2)
    ell = args.ell
    passed = failed = 0
    max_parts = 0
    for a in range(ell):
        for b in range(ell):
            for c in range(ell):
                A = MatrixModM.from_rows([[a, b], [c, -a]], ell)
                try:
                    parts = square_zero_decompose(A)
                except SearchExhausted:
                    failed += 1
                    continue
                if _decomposition_ok(A, parts):
                    passed += 1
                    max_parts = max(max_parts, len(parts))
                else:
                    failed += 1
    payload = {"ell": ell, "matrices": ell**3, "passed": passed, "failed": failed, "max_parts": max_parts}
    return payload, None, {}, EXIT_OK


def cmd_counterexample(args):
    G = construct_counterexample(args.ell)
    return generator_file(G), None, {}, EXIT_OK


def cmd_galrep(args):
    curve = _parse_curve(args.curve)
    if args.bound < 0:
        raise ParseError("--bound must be non-negative")
    if gcd(args.modulus, 30) != 1:
        return _verdict_result(mod_m_verdict([], args.modulus))
    samples = collect_samples(curve, args.bound, args.modulus, threads=args.threads)
    verdict = mod_m_verdict(samples, args.modulus)
    payload = verdict.to_dict()
    payload["curve"] = list(curve.coefficients)
    payload["bound"] = args.bound
    return payload, None, {"bound": args.bound}, EXIT_OK


def build_parser():
    parser = _Parser(prog="modlg", description="Local-global surjectivity checks for matrix groups over Z/mZ.")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for parallel stages (output is identical)")
    parser.add_argument("--version", action="version", version=f"modlg {__version__}")
    # --threads is accepted before or after the subcommand
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    add = sub.add_parser

    def add_parser(name, **kw):
        return add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    def with_group(p):
        p.add_argument("--modulus", type=int, required=True)
        p.add_argument("--generators", required=True, help="generator file, or - for standard input")
        return p

    p = with_group(sub.add_parser("check-surj", help="is G all of GL2(Z/mZ) (or a determinant-power family)?"))
    p.add_argument("--det", default="full", help="full or power:K")
    p.set_defaults(func=cmd_check_surj)

    p = with_group(sub.add_parser("check-delta", help="is G the full paired-block group Delta(m)?"))
    p.set_defaults(func=cmd_check_delta)

    p = with_group(sub.add_parser("check-gsp", help="is G all of GSp_2g(Z/mZ)?"))
    p.add_argument("--genus", type=int, required=True)
    p.set_defaults(func=cmd_check_gsp)

    p = with_group(sub.add_parser("occ", help="composition factors of G"))
    p.add_argument("--cap", type=int, default=None, help=f"enumeration cap (default {OCC_DEFAULT_CAP})")
    p.set_defaults(func=cmd_occ)

    lemma = sub.add_parser("verify-lemma", help="randomized or exhaustive lemma checks")
    lemmas = lemma.add_subparsers(dest="lemma", required=True, parser_class=_Parser)
    add_lemma = lemmas.add_parser
    lemmas.add_parser = lambda name, **kw: add_lemma(name, parents=[common], **kw)
    p = lemmas.add_parser("lift-sl2")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_lift_sl2)
    p = lemmas.add_parser("square-zero")
    p.add_argument("--ell", type=int, required=True)
    p.set_defaults(func=cmd_square_zero)

    p = sub.add_parser("counterexample", help="generator file of a proper subgroup of GL2(Z/ell^2) onto GL2(F_ell)")
    p.add_argument("--ell", type=int, required=True)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("galrep", help="mod-m surjectivity of an elliptic curve's Galois image")
    p.add_argument("--curve", required=True, help="a1,a2,a3,a4,a6")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--bound", type=int, default=10**4)
    p.set_defaults(func=cmd_galrep)
    return parser


def _echo(args, argv):
    name = args.command if args.command != "verify-lemma" else f"verify-lemma {args.lemma}"
    return {"name": name, "argv": list(argv)}


def _error_kind(exc):
    if isinstance(exc, (ParseError, InvalidModulus, ShapeMismatch, NotInvertible)):
        return EXIT_PARSE, "parse error"
    if isinstance(exc, (CapExceeded, SearchExhausted, MemoryError)):
        return EXIT_CAP, "cap exceeded"
    return EXIT_PRECONDITION, "precondition violated"


def dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    start = time.perf_counter_ns()
    command = {"name": None, "argv": argv}
    seed = None
    caps = {}
    try:
        args = build_parser().parse_args(argv)
        command = _echo(args, argv)
        if args.threads < 1:
            raise ParseError("--threads must be >= 1")
        payload, seed, caps, code = args.func(args)
        if code == EXIT_PRECONDITION:
            print(f"modlg: precondition violated: {payload.get('condition')}", file=sys.stderr)
    except (
        ParseError,
        InvalidModulus,
        ShapeMismatch,
        NotInvertible,
        CapExceeded,
        SearchExhausted,
        MemoryError,
        PreconditionViolated,
        SmallPrime,
        BadReduction,
        NotTraceZero,
        Unsupported,
    ) as exc:
        code, kind = _error_kind(exc)
        error = {"kind": kind, "message": str(exc)}
        if getattr(exc, "index", None) is not None:
            error["generator_index"] = exc.index
        payload = {"error": error}
        print(f"modlg: {kind}: {exc}", file=sys.stderr)
    caps = {"closure": default_cap(), **caps}
    report = {
        "command": command,
        "payload": payload,
        "seed": seed,
        "caps": caps,
        "wall_time_ms": (time.perf_counter_ns() - start) // 1_000_000,
        "version": __version__,
    }
    print(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
