"""Circuit and entity data model.

A circuit is a list of gates in topological order: every input id is smaller
than the id of the gate reading it.  Var-sets are stored as integer bitmasks
over the declared feature order (bit ``i`` is ``features[i]``).
Entities are plain mappings ``feature -> 0/1`` and must be total.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, NamedTuple, Sequence

from . import config
from .errors import (
    CycleOrForwardReference,
    DomainMismatch,
    EmptyCircuit,
    InvalidFeatureName,
    MultipleOutputs,
    TooLargeForBruteForce,
    UnknownFeature,
)

VAR = "var"
CONST = "const"
NOT = "not"
AND = "and"
OR = "or"
KINDS = (VAR, CONST, NOT, AND, OR)

_NAME_RE = re.compile(r"^[^\s#=]+$")


class Gate(NamedTuple):
    kind: str
    inputs: tuple = ()
    label: object = None  # feature name for VAR, bit for CONST


def Var(name):
    return Gate(VAR, (), name)


def Const(bit):
    return Gate(CONST, (), int(bit))


def Not(a):
    return Gate(NOT, (a,))


def And(*inputs):
    return Gate(AND, tuple(inputs))


def Or(*inputs):
    return Gate(OR, tuple(inputs))


@dataclass(frozen=True)
class Flags:
    decomposable_checked: bool = False
    deterministic_trusted: bool = False
    smooth: bool = False
    fanin2: bool = False

    @property
    def dd(self):
        return self.decomposable_checked and self.deterministic_trusted


@dataclass(frozen=True, eq=False)
class Circuit:
    gates: tuple
    output: int
    features: tuple
    masks: tuple = field(repr=False)
    flags: Flags = Flags()

    def __len__(self):
        return len(self.gates)

    @property
    def n(self):
        return len(self.features)

    @property
    def index(self):
        # cached lazily; the dataclass is frozen so go through object.__setattr__
        idx = self.__dict__.get("_index")
        if idx is None:
            idx = {f: i for i, f in enumerate(self.features)}
            object.__setattr__(self, "_index", idx)
        return idx

    @property
    def full_mask(self):
        return (1 << len(self.features)) - 1

    def mask_names(self, mask):
        return frozenset(f for i, f in enumerate(self.features) if mask >> i & 1)

    def var_set(self, gate_id):
        return self.mask_names(self.masks[gate_id])

    def var_count(self, gate_id):
        return self.masks[gate_id].bit_count()

    def with_flags(self, **kw):
        return replace(self, flags=replace(self.flags, **kw))

    def out_degrees(self):
        deg = [0] * len(self.gates)
        for g in self.gates:
            for i in g.inputs:
                deg[i] += 1
        return deg

    def __repr__(self):
        return (f"Circuit({len(self.gates)} gates, output={self.output}, "
                f"features={list(self.features)}, flags={self.flags})")


def check_feature_names(features):
    seen = set()
    for f in features:
        if not isinstance(f, str) or not _NAME_RE.match(f):
            raise InvalidFeatureName(f"invalid feature name {f!r}")
        if f in seen:
            raise InvalidFeatureName(f"duplicate feature name {f!r}")
        seen.add(f)


def build_circuit(gates: Iterable[Gate], output: int, features: Sequence[str],
                  flags: Flags | None = None) -> Circuit:
    """Validate a gate list and return a :class:`Circuit` with var-sets computed."""
    gates = tuple(gates)
    features = tuple(features)
    if not gates:
        raise EmptyCircuit("circuit has no gates")
    check_feature_names(features)
    index = {f: i for i, f in enumerate(features)}

    masks = []
    has_succ = [False] * len(gates)
    for gid, g in enumerate(gates):
        if g.kind == VAR:
            if g.inputs:
                raise CycleOrForwardReference(f"gate {gid}: variable gate with inputs")
            if g.label not in index:
                raise UnknownFeature(f"gate {gid}: feature {g.label!r} not declared")
            masks.append(1 << index[g.label])
            continue
        if g.kind == CONST:
            if g.inputs or g.label not in (0, 1):
                raise ValueError(f"gate {gid}: malformed constant gate {g!r}")
            masks.append(0)
            continue
        if g.kind not in KINDS:
            raise ValueError(f"gate {gid}: unknown gate kind {g.kind!r}")
        if g.kind == NOT and len(g.inputs) != 1:
            raise ValueError(f"gate {gid}: not-gate needs exactly one input")
        if not g.inputs:
            raise ValueError(f"gate {gid}: {g.kind}-gate needs at least one input")
        m = 0
        for i in g.inputs:
            if not isinstance(i, int) or i < 0 or i >= gid:
                raise CycleOrForwardReference(
                    f"gate {gid} reads gate {i}; inputs must have smaller ids")
            m |= masks[i]
            has_succ[i] = True
        masks.append(m)

    sinks = [gid for gid, s in enumerate(has_succ) if not s]
    if not 0 <= output < len(gates):
        raise MultipleOutputs(f"output id {output} out of range")
    if sinks != [output]:
        raise MultipleOutputs(
            f"gates without successors {sinks[:10]}; exactly one (the output {output}) allowed")
    return Circuit(gates, output, features, tuple(masks), flags or Flags())


def _trusted(gates, output, features, flags):
    """Internal constructor for transforms whose output is valid by construction."""
    index = {f: i for i, f in enumerate(features)}
    masks = []
    for g in gates:
        if g.kind == VAR:
            masks.append(1 << index[g.label])
        elif g.kind == CONST:
            masks.append(0)
        else:
            m = 0
            for i in g.inputs:
                m |= masks[i]
            masks.append(m)
    return Circuit(tuple(gates), output, tuple(features), tuple(masks), flags)


def prune(gates, output):
    """Drop gates not reaching ``output``; return (new gates, new output id)."""
    live = [False] * len(gates)
    live[output] = True
    for gid in range(output, -1, -1):
        if live[gid]:
            for i in gates[gid].inputs:
                live[i] = True
    remap = {}
    out = []
    for gid, g in enumerate(gates):
        if not live[gid]:
            continue
        remap[gid] = len(out)
        if g.inputs:
            g = g._replace(inputs=tuple(remap[i] for i in g.inputs))
        out.append(g)
    return out, remap[output]


# ---------------------------------------------------------------- semantics

def check_entity(c: Circuit, e: Mapping[str, int], features=None):
    features = c.features if features is None else features
    keys = set(e)
    want = set(features)
    if keys != want:
        missing = sorted(want - keys)
        extra = sorted(keys - want)
        raise DomainMismatch(f"entity domain mismatch: missing {missing}, extra {extra}")
    for f in features:
        if e[f] not in (0, 1):
            raise DomainMismatch(f"entity value for {f!r} must be 0 or 1, got {e[f]!r}")


def evaluate(c: Circuit, e: Mapping[str, int]) -> int:
    check_entity(c, e)
    vals = []
    for g in c.gates:
        k = g.kind
        if k == VAR:
            vals.append(e[g.label])
        elif k == CONST:
            vals.append(g.label)
        elif k == NOT:
            vals.append(1 - vals[g.inputs[0]])
        elif k == AND:
            vals.append(int(all(vals[i] for i in g.inputs)))
        else:
            vals.append(int(any(vals[i] for i in g.inputs)))
    return vals[c.output]


def _var_tables(n):
    """Bit-parallel truth tables of the n projections (bit i of entity index = feature i)."""
    size = 1 << n
    full = (1 << size) - 1
    tables = []
    for j in range(n):
        half = 1 << j
        rep = full // ((1 << (2 * half)) - 1)
        tables.append(rep * (((1 << half) - 1) << half))
    return tables, full


def truth_tables(c: Circuit, keep=None):
    """Yield ``(gate_id, table)`` for every gate; ``table`` bit ``i`` is the gate's
    value on the entity whose feature ``j`` equals bit ``j`` of ``i``."""
    proj, full = _var_tables(c.n)
    idx = c.index
    vals = [0] * len(c.gates)
    for gid, g in enumerate(c.gates):
        k = g.kind
        if k == VAR:
            t = proj[idx[g.label]]
        elif k == CONST:
            t = full if g.label else 0
        elif k == NOT:
            t = full ^ vals[g.inputs[0]]
        elif k == AND:
            t = full
            for i in g.inputs:
                t &= vals[i]
        else:
            t = 0
            for i in g.inputs:
                t |= vals[i]
        vals[gid] = t
        yield gid, t


def truth_table(c: Circuit) -> int:
    """Bit-parallel truth table of the output over ``c.features``."""
    for gid, t in truth_tables(c):
        if gid == c.output:
            return t
    raise AssertionError("unreachable")


def entity_from_index(features, i):
    return {f: (i >> j) & 1 for j, f in enumerate(features)}


def entity_index(features, e):
    return sum(e[f] << j for j, f in enumerate(features))


# ---------------------------------------------------------------- properties

@dataclass(frozen=True)
class Check:
    """Outcome of a structural check; truthy iff the property holds."""
    ok: bool
    gate: int | None = None
    witness: object = None

    def __bool__(self):
        return self.ok


def check_decomposable(c: Circuit) -> Check:
    """Every and-gate must read pairwise disjoint var-sets.

    On failure the witness is a feature shared by two inputs of ``gate``.
    """
    masks = c.masks
    for gid, g in enumerate(c.gates):
        if g.kind != AND or len(g.inputs) < 2:
            continue
        seen = 0
        for i in g.inputs:
            clash = seen & masks[i]
            if clash:
                bit = (clash & -clash).bit_length() - 1
                return Check(False, gid, c.features[bit])
            seen |= masks[i]
    return Check(True)


def check_deterministic_bruteforce(c: Circuit, max_vars: int | None = None) -> Check:
    """Exhaustively verify that no two inputs of an or-gate share a model.

    Runs a bit-parallel evaluation over all of ``ent(X)``; two subcircuits
    overlap on ``ent(X)`` iff they overlap on the union of their var-sets.
    The witness is an entity over that union.
    """
    limit = config.cap(config.DETERMINISM_MAX_VARS if max_vars is None else max_vars)
    if c.n > limit:
        raise TooLargeForBruteForce(
            f"{c.n} features exceed the brute-force determinism cap of {limit}")
    refs = c.out_degrees()
    tables = {}
    for gid, t in truth_tables(c):
        g = c.gates[gid]
        if g.kind == OR and len(g.inputs) > 1:
            ins = g.inputs
            for a in range(len(ins)):
                for b in range(a + 1, len(ins)):
                    both = tables[ins[a]] & tables[ins[b]]
                    if both:
                        i = (both & -both).bit_length() - 1
                        union = c.masks[ins[a]] | c.masks[ins[b]]
                        full = entity_from_index(c.features, i)
                        w = {f: v for j, (f, v) in enumerate(full.items()) if union >> j & 1}
                        return Check(False, gid, w)
        tables[gid] = t
        for i in g.inputs:
            refs[i] -= 1
            if refs[i] == 0:
                del tables[i]
    return Check(True)


def certify(c: Circuit, *, trust_determinism=False, max_vars=None) -> Circuit:
    """Run both checks and return a copy of ``c`` with the d-D flags set.

    Raises NotDecomposable / NotDeterministic with the witness on failure and
    TooLargeForBruteForce when determinism cannot be verified or trusted.
    """
    from .errors import NotDecomposable, NotDeterministic

    dec = check_decomposable(c)
    if not dec:
        raise NotDecomposable(
            f"and-gate {dec.gate} is not decomposable: feature {dec.witness!r} is shared",
            dec.gate, dec.witness)
    if trust_determinism or c.flags.deterministic_trusted:
        return c.with_flags(decomposable_checked=True, deterministic_trusted=True)
    det = check_deterministic_bruteforce(c, max_vars)
    if not det:
        raise NotDeterministic(
            f"or-gate {det.gate} is not deterministic: inputs share model {det.witness}",
            det.gate, det.witness)
    return c.with_flags(decomposable_checked=True, deterministic_trusted=True)


def rename(c: Circuit, mapping: Mapping[str, str]) -> Circuit:
    """Bijectively rename features (unmapped names are kept)."""
    feats = tuple(mapping.get(f, f) for f in c.features)
    if len(set(feats)) != len(feats):
        raise InvalidFeatureName("renaming is not injective")
    gates = [g._replace(label=mapping.get(g.label, g.label)) if g.kind == VAR else g
             for g in c.gates]
    return build_circuit(gates, c.output, feats, c.flags)
