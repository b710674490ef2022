"""CNF/DNF formulas in DIMACS syntax and their circuit encodings.

A formula is a list of clauses (or terms), each a tuple of
``(feature, polarity)`` literals.  The 3-CNF encoding rewrites every clause
as the disjunction of its seven satisfying sign patterns, which is
deterministic but usually not decomposable.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from ..circuit import AND, CONST, NOT, OR, VAR, Flags, Gate, build_circuit, check_feature_names
from ..errors import CircuitSyntaxError, InputError, NotThreeCnf, RepeatedFeatureInTerm
from .native import _tokens


@dataclass(frozen=True)
class CnfFormula:
    features: tuple
    clauses: tuple
    lines: tuple = ()


@dataclass(frozen=True)
class DnfFormula:
    features: tuple
    terms: tuple
    lines: tuple = ()


def _parse_dimacs(text, kind, feature_names):
    header = None
    groups, lines = [], []
    current, start = [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks or toks[0][0] in ("c", "%"):
            continue
        if toks[0][0] == "p":
            if header is not None:
                raise CircuitSyntaxError("second 'p' line", lineno, 1)
            if len(toks) != 4 or toks[1][0] != kind:
                raise CircuitSyntaxError(f"expected 'p {kind} <vars> <{kind}s>'", lineno, 1)
            try:
                nvars, count = int(toks[2][0]), int(toks[3][0])
            except ValueError:
                raise CircuitSyntaxError("header counts must be integers", lineno, 1) from None
            if nvars < 0 or count < 0:
                raise CircuitSyntaxError("negative count in header", lineno, 1)
            if feature_names is None:
                names = [f"x{i}" for i in range(1, nvars + 1)]
            else:
                names = list(feature_names)
                if len(names) != nvars:
                    raise CircuitSyntaxError(
                        f"{len(names)} feature names given for {nvars} variables", lineno, 1)
            try:
                check_feature_names(names)
            except InputError as exc:
                raise CircuitSyntaxError(str(exc), lineno, 1) from None
            header = (nvars, count, lineno)
            continue
        if header is None:
            raise CircuitSyntaxError("literal before the 'p' header", lineno, toks[0][1])
        for tok, col in toks:
            try:
                v = int(tok)
            except ValueError:
                raise CircuitSyntaxError(f"expected a signed integer, got {tok!r}",
                                         lineno, col) from None
            if v == 0:
                groups.append(tuple(current))
                lines.append(start or lineno)
                current, start = [], None
                continue
            if abs(v) > header[0]:
                raise CircuitSyntaxError(f"variable {abs(v)} outside 1..{header[0]}", lineno, col)
            if start is None:
                start = lineno
            current.append((names[abs(v) - 1], int(v > 0)))
    if header is None:
        raise CircuitSyntaxError(f"missing 'p {kind}' header", 1, 1)
    if current:
        raise CircuitSyntaxError(f"last {kind} clause is not terminated by 0", start, 1)
    if len(groups) != header[1]:
        raise CircuitSyntaxError(
            f"header announces {header[1]} {kind} lines, found {len(groups)}", header[2], 1)
    return tuple(names), tuple(groups), tuple(lines)


def parse_cnf(text: str, feature_names=None) -> CnfFormula:
    return CnfFormula(*_parse_dimacs(text, "cnf", feature_names))


def parse_dnf(text: str, feature_names=None) -> DnfFormula:
    return DnfFormula(*_parse_dimacs(text, "dnf", feature_names))


class _Lits:
    def __init__(self):
        self.gates = []
        self.ids = {}

    def add(self, g):
        self.gates.append(g)
        return len(self.gates) - 1

    def lit(self, f, positive):
        if (f, positive) not in self.ids:
            if positive:
                self.ids[(f, positive)] = self.add(Gate(VAR, (), f))
            else:
                self.ids[(f, positive)] = self.add(Gate(NOT, (self.lit(f, 1),)))
        return self.ids[(f, positive)]


def encode_cnf3(f: CnfFormula):
    """Deterministic circuit equivalent to a 3-CNF, one 7-way or-gate per clause."""
    b = _Lits()
    tops = []
    for i, clause in enumerate(f.clauses):
        where = f.lines[i] if f.lines else None
        feats = [v for v, _ in clause]
        if len(clause) != 3 or len(set(feats)) != 3:
            raise NotThreeCnf(f"clause {i + 1} is not three literals over distinct features",
                              where, 1 if where else None)
        disjuncts = []
        falsifying = tuple(1 - s for _, s in clause)
        for signs in product((0, 1), repeat=3):
            if signs == falsifying:
                continue
            ins = tuple(b.lit(v, s) for v, s in zip(feats, signs))
            disjuncts.append(b.add(Gate(AND, ins)))
        tops.append(b.add(Gate(OR, tuple(disjuncts))))
    if not tops:
        out = b.add(Gate(CONST, (), 1))
    elif len(tops) == 1:
        out = tops[0]
    else:
        out = b.add(Gate(AND, tuple(tops)))
    return build_circuit(b.gates, out, f.features, Flags(deterministic_trusted=True))


def encode_dnf(f: DnfFormula):
    """Decomposable circuit for a DNF: an or-gate over one and-gate per term."""
    b = _Lits()
    terms = []
    for i, term in enumerate(f.terms):
        feats = [v for v, _ in term]
        if len(set(feats)) != len(feats):
            where = f.lines[i] if f.lines else None
            raise RepeatedFeatureInTerm(f"term {i + 1} mentions a feature twice",
                                        where, 1 if where else None)
        if not term:
            terms.append(b.add(Gate(CONST, (), 1)))
        else:
            terms.append(b.add(Gate(AND, tuple(b.lit(v, s) for v, s in term))))
    if not terms:
        out = b.add(Gate(CONST, (), 0))
    elif len(terms) == 1:
        out = terms[0]
    else:
        out = b.add(Gate(OR, tuple(terms)))
    return build_circuit(b.gates, out, f.features, Flags(decomposable_checked=True))


def formula_models(f, e) -> int:
    """Direct evaluation of a CnfFormula or DnfFormula on an entity."""
    if isinstance(f, CnfFormula):
        return int(all(any(e[v] == s for v, s in cl) for cl in f.clauses))
    return int(any(all(e[v] == s for v, s in t) for t in f.terms))
