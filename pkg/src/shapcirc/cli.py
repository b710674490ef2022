"""``shapcirc`` command line.

Exit codes: 0 success, 2 bad input, 3 precondition refused, 4 internal
consistency failure.  Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from . import config, engine, oracle
from .circuit import certify, check_decomposable, check_deterministic_bruteforce
from .errors import (EfficiencyViolation, InputError, NotDeterministic, PreconditionError,
                     TooLargeForBruteForce)
from .frontends import (encode_bdd, encode_cnf3, encode_dnf, parse_bdd, parse_circuit, parse_cnf,
                        parse_dnf, parse_entity, parse_nnf, parse_probmap, render_circuit)
from .transforms import prepare


def decimal(q: Fraction, places: int) -> str:
    """Round-half-even decimal rendering with a fixed number of places."""
    q = Fraction(q)
    digits = len(str(abs(q.numerator))) + len(str(q.denominator)) + places + 5
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(q.numerator) / Decimal(q.denominator)
        return str(d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


def _read(path):
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def load_circuit(path, fmt="auto", names=None):
    text = _read(path)
    if fmt == "auto":
        fmt = "nnf" if str(path).endswith(".nnf") else "native"
    if fmt == "native":
        return parse_circuit(text)
    if fmt == "nnf":
        return parse_nnf(text, names)
    if fmt in ("bdd", "dt"):
        return encode_bdd(parse_bdd(text, names), tree=fmt == "dt")
    if fmt == "cnf3":
        return encode_cnf3(parse_cnf(text, names))
    if fmt == "dnf":
        return encode_dnf(parse_dnf(text, names))
    raise InputError(f"unknown circuit format {fmt!r}")


def _certified(c, args):
    """Apply the determinism policy; return (circuit, provenance line)."""
    c = c.with_flags(deterministic_trusted=False)
    if args.trust_determinism:
        return certify(c, trust_determinism=True), "determinism: trusted (not verified)"
    try:
        c = certify(c, max_vars=args.determinism_max)
    except TooLargeForBruteForce as exc:
        raise TooLargeForBruteForce(
            f"{exc}; pass --trust-determinism to proceed without verification") from None
    return c, f"determinism: verified exhaustively over 2^{c.n} entities"


def _frac(q, places):
    return {"exact": str(Fraction(q)), "decimal": decimal(q, places)}


def _names(arg):
    return [s for s in arg.split(",") if s] if arg else None


# ------------------------------------------------------------------ emitters

def _emit(args, record, rows, lines):
    """Print ``record`` as JSON, ``rows`` as TSV, or ``lines`` as pretty text."""
    if args.format == "json":
        print(json.dumps(record, indent=2))
    elif args.format == "tsv":
        for row in rows:
            print("\t".join(str(v) for v in row))
    else:
        for line in lines:
            print(line)


# ------------------------------------------------------------------ commands

def cmd_shap(args):
    c = load_circuit(args.circuit, args.input_format, _names(args.names))
    e = parse_entity(_read(args.entity), c.features)
    p = parse_probmap(_read(args.prob), c.features) if args.prob else None
    c, provenance = _certified(c, args)
    places = args.precision
    dist = "uniform" if p is None else {f: str(q) for f, q in p.items()}
    if args.feature is not None:
        if args.feature not in c.index:
            raise InputError(f"feature {args.feature!r} is not declared")
        x = args.feature
        score = engine.shap_uniform(c, e, x) if p is None else engine.shap_product(c, p, e, x)
        record = {"feature": x, "score": _frac(score, places), "distribution": dist,
                  "provenance": provenance}
        rows = [("# " + provenance,), ("feature", "exact", "decimal"),
                (x, score, decimal(score, places))]
        lines = [provenance, f"SHAP({x}) = {score} ~ {decimal(score, places)}"]
        _emit(args, record, rows, lines)
        return 0

    report = engine.shap_all(c, e, p, workers=args.workers)
    total = report.total
    identity = (f"sum of scores = M(e) - E[M] = {report.classifier_output} - "
                f"{report.expected_value} = {total}")
    record = {
        "features": list(c.features),
        "entity": {f: e[f] for f in c.features},
        "distribution": dist,
        "classifier_output": report.classifier_output,
        "expected_value": _frac(report.expected_value, places),
        "scores": [{"feature": f, **_frac(report.scores[f], places)} for f in c.features],
        "sum": _frac(total, places),
        "efficiency_holds": True,
        "provenance": provenance,
    }
    rows = [("# " + provenance,), ("feature", "exact", "decimal")]
    rows += [(f, report.scores[f], decimal(report.scores[f], places)) for f in c.features]
    rows.append(("# " + identity,))
    width = max(len(f) for f in c.features)
    lines = [provenance]
    for f in c.features:
        s = report.scores[f]
        lines.append(f"{f:<{width}}  {decimal(s, places):>{places + 4}}  {s}")
    lines.append(identity)
    _emit(args, record, rows, lines)
    return 0


def cmd_count(args):
    c = load_circuit(args.circuit, args.input_format, _names(args.names))
    method = "circuit"
    if check_decomposable(c):
        try:
            c, _ = _certified(c, args)
        except (NotDeterministic, TooLargeForBruteForce) as exc:
            method = "truth-table"
            print(f"note: {exc}; counting by truth table", file=sys.stderr)
    else:
        method = "truth-table"
        print("note: circuit is not decomposable; counting by truth table", file=sys.stderr)
    if method == "circuit":
        count = engine.model_count(prepare(c))
    else:
        count = oracle.brute_count(c)
    record = {"count": count, "features": c.n, "method": method}
    _emit(args, record, [("count", count), ("method", method)], [str(count)])
    return 0


def cmd_check(args):
    c = load_circuit(args.circuit, args.input_format, _names(args.names))
    dec = check_decomposable(c)
    record = {"gates": len(c), "features": c.n, "decomposable": bool(dec)}
    lines = [f"gates: {len(c)}", f"features: {c.n}"]
    if dec:
        lines.append("decomposable: true")
    else:
        record["decomposable_witness"] = {"gate": dec.gate, "feature": dec.witness}
        lines.append(f"decomposable: false (and-gate {dec.gate} shares feature {dec.witness})")
    try:
        det = check_deterministic_bruteforce(c, args.determinism_max)
    except TooLargeForBruteForce as exc:
        record["deterministic"] = None
        lines.append(f"deterministic: unchecked ({exc})")
        ok = False
    else:
        record["deterministic"] = bool(det)
        if det:
            lines.append("deterministic: true")
        else:
            record["deterministic_witness"] = {"gate": det.gate, "entity": det.witness}
            w = ", ".join(f"{k}={v}" for k, v in det.witness.items())
            lines.append(f"deterministic: false (or-gate {det.gate}, both inputs accept {w})")
        ok = bool(det)
    rows = [(k, json.dumps(v)) for k, v in record.items()]
    _emit(args, record, rows, lines)
    return 0 if ok and dec else 3


def cmd_convert(args):
    c = load_circuit(args.input, args.source, _names(args.names))
    text = render_circuit(c)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {len(c)} gates over {c.n} features to {args.output}", file=sys.stderr)
    return 0


def cmd_oracle(args):
    c = load_circuit(args.circuit, args.input_format, _names(args.names))
    e = parse_entity(_read(args.entity), c.features)
    places = args.precision
    if args.what == "ssat":
        levels = [args.level] if args.level is not None else range(c.n + 1)
        vals = {k: oracle.brute_ssat(c, e, k) for k in levels}
        record = {"ssat": {str(k): v for k, v in vals.items()}}
        rows = [("level", "ssat")] + list(vals.items())
        lines = [" ".join(str(v) for v in vals.values())]
        _emit(args, record, rows, lines)
        return 0
    p = parse_probmap(_read(args.prob), c.features) if args.prob else None
    if args.what == "h":
        v = oracle.brute_h(c, e, args.k, p)
        _emit(args, {"k": args.k, "h": _frac(v, places)}, [("h", v, decimal(v, places))], [str(v)])
        return 0
    if args.feature is not None:
        scores = {args.feature: oracle.brute_shap(c, p, e, args.feature)}
    else:
        scores = oracle.brute_shap_all(c, p, e)
    record = {"scores": [{"feature": f, **_frac(s, places)} for f, s in scores.items()]}
    rows = [("feature", "exact", "decimal")] + [(f, s, decimal(s, places)) for f, s in scores.items()]
    lines = [f"{f}  {decimal(s, places)}  {s}" for f, s in scores.items()]
    _emit(args, record, rows, lines)
    return 0


def _sizes(text):
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise InputError(f"bad size list {text!r}") from None
    if not sizes or min(sizes) < 1:
        raise InputError(f"bad size list {text!r}")
    return sizes


def cmd_bench(args):
    from .generators import random_dd_circuit, random_entity
    import random

    sizes = _sizes(args.sizes)
    rng = random.Random(args.seed)
    results = []
    print("n\tgates\tprepared_gates\tseconds")
    for n in sizes:
        c = random_dd_circuit(n, args.gates_per_feature * n, seed=rng.random())
        e = random_entity(c.features, rng)
        t0 = time.perf_counter()
        engine.shap_all(c, e, workers=args.workers)
        dt = time.perf_counter() - t0
        results.append((n, len(c), len(prepare(c)), dt))
        print(f"{n}\t{len(c)}\t{results[-1][2]}\t{dt:.4f}", flush=True)
    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot([r[0] for r in results], [r[3] for r in results], "o-")
        ax.set_xlabel("features n")
        ax.set_ylabel("all-features SHAP time (s)")
        ax.set_title(f"seed {args.seed}, {args.gates_per_feature} gates per feature")
        fig.tight_layout()
        fig.savefig(args.plot, format="svg")
        print(f"wrote {args.plot}", file=sys.stderr)
    return 0


# ------------------------------------------------------------------ parser

FORMATS = ("auto", "native", "nnf", "bdd", "dt", "cnf3", "dnf")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv", "pretty"), default="pretty")
    common.add_argument("--precision", type=int, default=config.DECIMAL_PRECISION,
                        help="decimal places in rendered scores")

    circ = argparse.ArgumentParser(add_help=False)
    circ.add_argument("--circuit", required=True)
    circ.add_argument("--input-format", choices=FORMATS, default="auto")
    circ.add_argument("--names", help="comma-separated feature names for index-based formats")

    det = argparse.ArgumentParser(add_help=False)
    det.add_argument("--trust-determinism", action="store_true",
                     help="skip the exhaustive determinism check")
    det.add_argument("--determinism-max", type=int, default=None,
                     help=f"feature cap for the exhaustive check (default {config.DETERMINISM_MAX_VARS})")

    ap = argparse.ArgumentParser(prog="shapcirc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shap", parents=[common, circ, det], help="SHAP-scores of an entity")
    p.add_argument("--entity", required=True)
    p.add_argument("--prob", help="JSON map of feature probabilities (default uniform)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--feature")
    g.add_argument("--all", action="store_true")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_shap)

    p = sub.add_parser("count", parents=[common, circ, det], help="number of accepted entities")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("check", parents=[common, circ], help="decomposability and determinism")
    p.add_argument("--determinism-max", type=int, default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("convert", help="translate to the native circuit format")
    p.add_argument("--from", dest="source", required=True, choices=FORMATS[1:])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--names")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("oracle", help="brute-force reference values")
    osub = p.add_subparsers(dest="what", required=True)
    for what in ("shap", "ssat", "h"):
        q = osub.add_parser(what, parents=[common, circ])
        q.add_argument("--entity", required=True)
        if what != "ssat":
            q.add_argument("--prob")
        if what == "shap":
            q.add_argument("--feature")
        if what == "ssat":
            q.add_argument("--level", type=int)
        if what == "h":
            q.add_argument("--k", type=int, required=True)
        q.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="timing of all-features SHAP on random circuits")
    p.add_argument("--sizes", required=True, help="comma-separated feature counts")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gates-per-feature", type=int, default=100)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--plot")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EfficiencyViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except PreconditionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
