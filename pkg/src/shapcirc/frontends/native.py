"""Line-oriented native circuit format.

::

    features fg dtr nf na
    0 var dtr
    1 not 0
    4 and 1 2 3
    output 4

Gate ids are arbitrary tokens; each must be defined before it is read and
they are renumbered densely in order of appearance.  ``#`` starts a comment.
"""
from __future__ import annotations

from ..circuit import AND, CONST, NOT, OR, VAR, Circuit, Gate, build_circuit, check_feature_names
from ..errors import (CircuitSyntaxError, DuplicateId, InputError, MissingOutput, MultipleOutputs,
                      UnknownGateRef)


def _tokens(line):
    """Split a line into (token, 1-based column) pairs, stopping at ``#``."""
    out = []
    i, n = 0, len(line)
    while i < n:
        if line[i] == "#":
            break
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not line[j].isspace() and line[j] != "#":
            j += 1
        out.append((line[i:j], i + 1))
        i = j
    return out


def parse_circuit(text: str) -> Circuit:
    features = None
    feature_set = set()
    ids = {}
    gates = []
    output = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks:
            continue
        head, col = toks[0]
        if head == "features":
            if features is not None:
                raise CircuitSyntaxError("second 'features' line", lineno, col)
            features = [t for t, _ in toks[1:]]
            try:
                check_feature_names(features)
            except InputError as exc:
                raise CircuitSyntaxError(str(exc), lineno, col) from None
            feature_set = set(features)
            continue
        if head == "output":
            if len(toks) != 2:
                raise CircuitSyntaxError("expected 'output <id>'", lineno, col)
            if output is not None:
                raise CircuitSyntaxError("second 'output' line", lineno, col)
            ref, rcol = toks[1]
            if ref not in ids:
                raise UnknownGateRef(f"output refers to undefined gate {ref!r}", lineno, rcol)
            output = (ids[ref], lineno)
            continue
        if features is None:
            raise CircuitSyntaxError("gate before the 'features' line", lineno, col)
        if len(toks) < 2:
            raise CircuitSyntaxError("expected '<id> <kind> ...'", lineno, col)
        if head in ids:
            raise DuplicateId(f"gate id {head!r} already defined", lineno, col)
        kind, kcol = toks[1]
        args = toks[2:]
        if kind == VAR:
            if len(args) != 1:
                raise CircuitSyntaxError("var takes exactly one feature name", lineno, kcol)
            name, acol = args[0]
            if name not in feature_set:
                raise CircuitSyntaxError(f"feature {name!r} not declared", lineno, acol)
            gate = Gate(VAR, (), name)
        elif kind == CONST:
            if len(args) != 1 or args[0][0] not in ("0", "1"):
                raise CircuitSyntaxError("const takes exactly one argument, 0 or 1", lineno, kcol)
            gate = Gate(CONST, (), int(args[0][0]))
        elif kind in (NOT, AND, OR):
            if not args:
                raise CircuitSyntaxError(f"{kind} needs at least one input", lineno, kcol)
            if kind == NOT and len(args) != 1:
                raise CircuitSyntaxError("not takes exactly one input", lineno, args[1][1])
            ins = []
            for ref, rcol in args:
                if ref not in ids:
                    raise UnknownGateRef(f"reference to undefined gate {ref!r}", lineno, rcol)
                ins.append(ids[ref])
            gate = Gate(kind, tuple(ins))
        else:
            raise CircuitSyntaxError(f"unknown gate kind {kind!r}", lineno, kcol)
        ids[head] = len(gates)
        gates.append(gate)

    if features is None:
        raise CircuitSyntaxError("missing 'features' line", 1, 1)
    if output is None:
        raise MissingOutput("missing 'output <id>' line", len(text.splitlines()) or 1, 1)
    try:
        return build_circuit(gates, output[0], features)
    except MultipleOutputs as exc:
        raise CircuitSyntaxError(str(exc), output[1], 1) from None


def render_circuit(c: Circuit) -> str:
    """Inverse of :func:`parse_circuit` (flags are not persisted)."""
    lines = ["features " + " ".join(c.features)]
    for gid, g in enumerate(c.gates):
        if g.kind in (VAR, CONST):
            lines.append(f"{gid} {g.kind} {g.label}")
        else:
            lines.append(f"{gid} {g.kind} " + " ".join(map(str, g.inputs)))
    lines.append(f"output {c.output}")
    return "\n".join(lines) + "\n"
