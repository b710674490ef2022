"""Binary decision diagrams and decision trees.

File format, one record per line, in any order::

    node <id> <feature> <child-if-0> <child-if-1>
    leaf <id> <0|1>
    root <id>

Each internal node ``u`` labelled ``x`` becomes the fan-in-2 gadget
``(NOT x AND a(u0)) OR (x AND a(u1))``.  The two disjuncts disagree on ``x``,
so the or-gate is deterministic; the and-gates are decomposable exactly when
no feature repeats along a path (the diagram is free).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..circuit import AND, CONST, NOT, OR, VAR, Flags, Gate, build_circuit, check_feature_names, prune
from ..errors import (CircuitSyntaxError, DuplicateId, InputError, MissingOutput, NotFree,
                      PreconditionViolated, UnknownGateRef)
from .native import _tokens


class CycleInDiagram(CircuitSyntaxError):
    def __init__(self, node, line=None):
        self.node = node
        super().__init__(f"cycle through node {node!r}", line, 1 if line else None)


@dataclass(frozen=True)
class Internal:
    feature: str
    lo: str
    hi: str


@dataclass(frozen=True)
class Leaf:
    bit: int


@dataclass(frozen=True)
class Bdd:
    nodes: dict
    root: str
    features: tuple = field(default=())

    def __post_init__(self):
        if not self.features:
            seen = []
            for node in self.nodes.values():
                if isinstance(node, Internal) and node.feature not in seen:
                    seen.append(node.feature)
            object.__setattr__(self, "features", tuple(seen))

    def order(self):
        """Ids reachable from the root, children before parents; raises on cycles."""
        done, onstack, out = set(), set(), []
        stack = [(self.root, False)]
        while stack:
            u, expanded = stack.pop()
            if expanded:
                onstack.discard(u)
                if u not in done:
                    done.add(u)
                    out.append(u)
                continue
            if u in done:
                continue
            if u in onstack:
                raise CycleInDiagram(u)
            onstack.add(u)
            stack.append((u, True))
            node = self.nodes[u]
            if isinstance(node, Internal):
                for k in (node.hi, node.lo):
                    if k in onstack:
                        raise CycleInDiagram(k)
                    if k not in done:
                        stack.append((k, False))
        return out

    def evaluate(self, e) -> int:
        node = self.nodes[self.root]
        while isinstance(node, Internal):
            node = self.nodes[node.hi if e[node.feature] else node.lo]
        return node.bit


def parse_bdd(text: str, features=None) -> Bdd:
    nodes = {}
    where = {}
    refs = []
    root = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks:
            continue
        head, col = toks[0]
        if head == "root":
            if len(toks) != 2:
                raise CircuitSyntaxError("expected 'root <id>'", lineno, col)
            if root is not None:
                raise CircuitSyntaxError("more than one root", lineno, col)
            root = toks[1][0]
            refs.append((root, lineno, toks[1][1]))
            continue
        if head == "node":
            if len(toks) != 5:
                raise CircuitSyntaxError("expected 'node <id> <feature> <lo> <hi>'", lineno, col)
            (nid, icol), (feat, fcol), (lo, lcol), (hi, hcol) = toks[1:]
            try:
                check_feature_names([feat])
            except InputError as exc:
                raise CircuitSyntaxError(str(exc), lineno, fcol) from None
            if features is not None and feat not in features:
                raise CircuitSyntaxError(f"feature {feat!r} not declared", lineno, fcol)
            node = Internal(feat, lo, hi)
            refs += [(lo, lineno, lcol), (hi, lineno, hcol)]
        elif head == "leaf":
            if len(toks) != 3 or toks[2][0] not in ("0", "1"):
                raise CircuitSyntaxError("expected 'leaf <id> <0|1>'", lineno, col)
            nid, icol = toks[1]
            node = Leaf(int(toks[2][0]))
        else:
            raise CircuitSyntaxError(f"unknown record {head!r}", lineno, col)
        if nid in nodes:
            raise DuplicateId(f"node id {nid!r} already defined on line {where[nid]}", lineno, icol)
        nodes[nid] = node
        where[nid] = lineno
    for ref, lineno, col in refs:
        if ref not in nodes:
            raise UnknownGateRef(f"reference to undefined node {ref!r}", lineno, col)
    if root is None:
        raise MissingOutput("missing 'root <id>' line", len(text.splitlines()) or 1, 1)
    b = Bdd(nodes, root, tuple(features) if features is not None else ())
    try:
        b.order()
    except CycleInDiagram as exc:
        raise CycleInDiagram(exc.node, where[exc.node]) from None
    return b


def check_free(b: Bdd):
    """Return ``(node, feature)`` for a node whose feature reappears below it, else None.

    For every reachable node, the set of features labelling nodes strictly
    below it is built bottom-up; a path repeats a feature iff some node's
    own feature is in that set.  Exact and linear in nodes times features.
    """
    index = {f: i for i, f in enumerate(b.features)}
    below = {}
    for u in b.order():
        node = b.nodes[u]
        if isinstance(node, Leaf):
            below[u] = 0
            continue
        m = 0
        for k in (node.lo, node.hi):
            m |= below[k]
            child = b.nodes[k]
            if isinstance(child, Internal):
                m |= 1 << index[child.feature]
        if m >> index[node.feature] & 1:
            return u, node.feature
        below[u] = m
    return None


def check_tree(b: Bdd):
    """Return a node with two parents, else None (decision trees must be trees)."""
    parents = {}
    for u in b.order():
        node = b.nodes[u]
        if isinstance(node, Internal):
            for k in (node.lo, node.hi):
                if k in parents and not (parents[k] == u and node.lo == node.hi):
                    return k
                parents[k] = u
    return None


def encode_bdd(b: Bdd, *, tree=False):
    """Circuit for a free BDD (or, with ``tree=True``, a decision tree)."""
    bad = check_free(b)
    if bad is not None:
        raise NotFree(f"feature {bad[1]!r} repeats below node {bad[0]!r}; the diagram is not free",
                      node=bad[0], feature=bad[1])
    if tree:
        shared = check_tree(b)
        if shared is not None:
            raise PreconditionViolated(f"node {shared!r} has several parents; not a decision tree")
    gates = []
    lit = {}
    gid = {}

    def var(f, positive):
        if (f, positive) not in lit:
            if positive:
                gates.append(Gate(VAR, (), f))
            else:
                gates.append(Gate(NOT, (var(f, True),)))
            lit[(f, positive)] = len(gates) - 1
        return lit[(f, positive)]

    def add(g):
        gates.append(g)
        return len(gates) - 1

    for u in b.order():
        node = b.nodes[u]
        if isinstance(node, Leaf):
            gid[u] = add(Gate(CONST, (), node.bit))
            continue
        neg = add(Gate(AND, (var(node.feature, False), gid[node.lo])))
        pos = add(Gate(AND, (var(node.feature, True), gid[node.hi])))
        gid[u] = add(Gate(OR, (neg, pos)))
    live, out = prune(gates, gid[b.root])
    flags = Flags(decomposable_checked=True, deterministic_trusted=True, fanin2=True)
    return build_circuit(live, out, b.features, flags)
