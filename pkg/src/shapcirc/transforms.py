"""Semantics-preserving circuit rewrites: conditioning, fan-in 2, smoothing, padding.

All functions are pure: they return a new circuit and leave the input intact.
"""
from __future__ import annotations

from dataclasses import replace

from .circuit import AND, CONST, NOT, OR, VAR, Circuit, Gate, _trusted, prune
from .errors import NotFanin2, PreconditionViolated, UnknownFeature


class _Builder:
    """Append-only gate list with small caches for shared gadget pieces."""

    def __init__(self, gates=()):
        self.gates = list(gates)
        self._var = {}
        self._taut = {}
        self._gadget = {}

    def add(self, gate):
        self.gates.append(gate)
        return len(self.gates) - 1

    def var(self, name):
        if name not in self._var:
            self._var[name] = self.add(Gate(VAR, (), name))
        return self._var[name]

    def tautology(self, name):
        # y OR NOT y
        if name not in self._taut:
            v = self.var(name)
            self._taut[name] = self.add(Gate(OR, (v, self.add(Gate(NOT, (v,))))))
        return self._taut[name]

    def gadget(self, names):
        """Balanced fan-in-2 tree for AND over y in names of (y OR NOT y)."""
        key = tuple(names)
        if key not in self._gadget:
            if len(key) == 1:
                gid = self.tautology(key[0])
            else:
                mid = len(key) // 2
                gid = self.add(Gate(AND, (self.gadget(key[:mid]), self.gadget(key[mid:]))))
            self._gadget[key] = gid
        return self._gadget[key]


def condition(c: Circuit, x: str, value: int) -> Circuit:
    """Replace every ``Var(x)`` by ``Const(value)`` and drop ``x`` from the features."""
    if x not in c.index:
        raise UnknownFeature(f"cannot condition on undeclared feature {x!r}")
    value = int(value)
    const = Gate(CONST, (), value)
    gates = [const if (g.kind == VAR and g.label == x) else g for g in c.gates]
    features = tuple(f for f in c.features if f != x)
    return _trusted(gates, c.output, features, c.flags)


def rewrite_fanin2(c: Circuit) -> Circuit:
    """Replace each and/or-gate of fan-in m > 2 by a left-deep chain of m-1 binary gates."""
    if c.flags.fanin2:
        return c
    gates = []
    remap = []
    for g in c.gates:
        ins = tuple(remap[i] for i in g.inputs)
        if g.kind in (AND, OR) and len(ins) > 2:
            acc = ins[0]
            for nxt in ins[1:-1]:
                gates.append(Gate(g.kind, (acc, nxt)))
                acc = len(gates) - 1
            gates.append(Gate(g.kind, (acc, ins[-1])))
        else:
            gates.append(g._replace(inputs=ins) if ins != g.inputs else g)
        remap.append(len(gates) - 1)
    return _trusted(gates, remap[c.output], c.features, _flags(c, fanin2=True))


def smooth(c: Circuit) -> Circuit:
    """Make every binary or-gate read inputs with identical var-sets.

    For ``g = g1 OR g2`` with ``S1 = var(g1) - var(g2)`` and
    ``S2 = var(g2) - var(g1)``, ``g1`` is replaced by ``g1 AND d(S2)`` and
    ``g2`` by ``g2 AND d(S1)``, where ``d(S)`` is a tautology over ``S``.
    Gadgets and padded inputs are shared across or-gates.
    """
    if not c.flags.fanin2:
        raise NotFanin2("smooth() needs a fan-in-2 circuit; call rewrite_fanin2 first")
    if c.flags.smooth:
        return c
    b = _Builder()
    remap = []
    padded = {}
    feats = c.features

    def names(mask):
        return [f for i, f in enumerate(feats) if mask >> i & 1]

    def pad(gid, missing):
        key = (gid, missing)
        if key not in padded:
            padded[key] = b.add(Gate(AND, (gid, b.gadget(names(missing)))))
        return padded[key]

    for g in c.gates:
        ins = tuple(remap[i] for i in g.inputs)
        if g.kind == OR and len(ins) == 2:
            m1, m2 = c.masks[g.inputs[0]], c.masks[g.inputs[1]]
            a, bb = ins
            if m1 != m2:
                if m2 & ~m1:
                    a = pad(a, m2 & ~m1)
                if m1 & ~m2:
                    bb = pad(bb, m1 & ~m2)
            new = b.add(Gate(OR, (a, bb)))
        else:
            new = b.add(g._replace(inputs=ins) if ins != g.inputs else g)
        remap.append(new)
    gates, out = prune(b.gates, remap[c.output])
    return _trusted(gates, out, feats, _flags(c, smooth=True))


def pad_features(c: Circuit, missing=None) -> Circuit:
    """Conjoin the output with a tautology over the declared-but-unused features."""
    unused = c.full_mask & ~c.masks[c.output]
    if missing is not None:
        want = 0
        for f in missing:
            if f not in c.index:
                raise UnknownFeature(f"cannot pad undeclared feature {f!r}")
            want |= 1 << c.index[f]
        if want != unused:
            raise PreconditionViolated(
                f"padding set must be exactly the unused features {sorted(c.mask_names(unused))}")
    if not unused:
        return c
    b = _Builder(c.gates)
    d = b.gadget([f for i, f in enumerate(c.features) if unused >> i & 1])
    out = b.add(Gate(AND, (c.output, d)))
    return _trusted(b.gates, out, c.features, c.flags)


def prepare(c: Circuit) -> Circuit:
    """fan-in 2, then smoothing, then padding: the form the DPs expect."""
    return pad_features(smooth(rewrite_fanin2(c)))


def is_prepared(c: Circuit) -> bool:
    return c.flags.fanin2 and c.flags.smooth and c.masks[c.output] == c.full_mask


def is_smooth(c: Circuit) -> bool:
    """Structural smoothness check (independent of the flag)."""
    for g in c.gates:
        if g.kind == OR and len({c.masks[i] for i in g.inputs}) > 1:
            return False
    return True


def max_fanin(c: Circuit) -> int:
    return max((len(g.inputs) for g in c.gates if g.kind in (AND, OR)), default=0)


def _flags(c, **kw):
    return replace(c.flags, **kw)
