"""Compiled d-DNNF files in the ``nnf v e n`` interchange format.

Each record after the header is one node, numbered from 0 in file order:
``L lit`` (signed 1-based variable), ``A c k1 .. kc`` and ``O j c k1 .. kc``
with children referring to earlier nodes.  The last node is the root.
Determinism is the compiler's promise and is trusted; decomposability is
cheap to check and is always re-verified.
"""
from __future__ import annotations

from ..circuit import AND, CONST, NOT, OR, VAR, Flags, Gate, build_circuit, check_decomposable, prune
from ..errors import CircuitSyntaxError, DecomposabilityViolation, UnknownGateRef
from .native import _tokens


def _ints(toks, lineno):
    out = []
    for t, col in toks:
        try:
            out.append((int(t), col))
        except ValueError:
            raise CircuitSyntaxError(f"expected an integer, got {t!r}", lineno, col) from None
    return out


def parse_nnf(text: str, feature_names=None):
    header = None
    gates = []
    node_gate = []
    lits = {}
    edges = 0

    def literal(v):
        key = v
        if key not in lits:
            if v > 0:
                lits[key] = len(gates)
                gates.append(Gate(VAR, (), names[v - 1]))
            else:
                pos = literal(-v)
                lits[key] = len(gates)
                gates.append(Gate(NOT, (pos,)))
        return lits[key]

    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks or toks[0][0] == "c":
            continue
        head, col = toks[0]
        if header is None:
            if head != "nnf" or len(toks) != 4:
                raise CircuitSyntaxError("expected header 'nnf <nodes> <edges> <vars>'", lineno, col)
            header = [v for v, _ in _ints(toks[1:], lineno)]
            if min(header) < 0:
                raise CircuitSyntaxError("negative count in header", lineno, col)
            nvars = header[2]
            if feature_names is None:
                names = [f"v{i}" for i in range(1, nvars + 1)]
            else:
                names = list(feature_names)
                if len(names) != nvars:
                    raise CircuitSyntaxError(
                        f"{len(names)} feature names given for {nvars} variables", lineno, col)
            continue
        nums = _ints(toks[1:], lineno)
        if head == "L":
            if len(nums) != 1:
                raise CircuitSyntaxError("L takes one literal", lineno, col)
            v, vcol = nums[0]
            if v == 0 or abs(v) > nvars:
                raise CircuitSyntaxError(f"literal {v} outside 1..{nvars}", lineno, vcol)
            node_gate.append(literal(v))
            continue
        if head == "A":
            rest = nums
        elif head == "O":
            if not nums:
                raise CircuitSyntaxError("O needs a decision variable", lineno, col)
            j, jcol = nums[0]
            if not 0 <= j <= nvars:
                raise CircuitSyntaxError(f"decision variable {j} outside 0..{nvars}", lineno, jcol)
            rest = nums[1:]
        else:
            raise CircuitSyntaxError(f"unknown record type {head!r}", lineno, col)
        if not rest:
            raise CircuitSyntaxError("missing child count", lineno, col)
        count, ccol = rest[0]
        kids = rest[1:]
        if count != len(kids):
            raise CircuitSyntaxError(f"child count {count} but {len(kids)} children", lineno, ccol)
        ins = []
        for k, kcol in kids:
            if not 0 <= k < len(node_gate):
                raise UnknownGateRef(f"child {k} is not an earlier node", lineno, kcol)
            ins.append(node_gate[k])
        edges += count
        if not ins:
            gates.append(Gate(CONST, (), 1 if head == "A" else 0))
        else:
            gates.append(Gate(AND if head == "A" else OR, tuple(ins)))
        node_gate.append(len(gates) - 1)

    if header is None:
        raise CircuitSyntaxError("empty file: missing 'nnf' header", 1, 1)
    if not node_gate:
        raise CircuitSyntaxError("no nodes", 1, 1)
    if len(node_gate) != header[0]:
        raise CircuitSyntaxError(f"header announces {header[0]} nodes, found {len(node_gate)}", 1, 1)
    if edges != header[1]:
        raise CircuitSyntaxError(f"header announces {header[1]} edges, found {edges}", 1, 1)

    live, out = prune(gates, node_gate[-1])
    c = build_circuit(live, out, names, Flags(deterministic_trusted=True))
    chk = check_decomposable(c)
    if not chk:
        raise DecomposabilityViolation(
            f"and-gate {chk.gate} reads feature {chk.witness!r} twice; the file is not a d-DNNF",
            gate=chk.gate, feature=chk.witness)
    return c.with_flags(decomposable_checked=True)
