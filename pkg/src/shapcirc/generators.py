"""Random circuits that are deterministic and decomposable by construction.

Or-gates only ever appear as guarded choices ``(g AND A) OR (NOT g AND B)``
with ``g`` absent from ``A`` and ``B``; and-gates only combine subcircuits
built over disjoint blocks of features.  Subcircuits are reused across
branches (so the result is a DAG), some variables are dropped at the leaves
(so the result is usually not smooth), and a few gates are negated or get
fan-in 3 (so the transforms have something to do).
"""
from __future__ import annotations

import random

from .circuit import AND, CONST, NOT, OR, VAR, Flags, Gate, build_circuit, prune


class _Gen:
    def __init__(self, rng, features, p_guard, p_neg, p_reuse, p_const):
        self.rng = rng
        self.features = features
        self.gates = []
        self.lits = {}
        self.pool = {}
        self.p_guard = p_guard
        self.p_neg = p_neg
        self.p_reuse = p_reuse
        self.p_const = p_const

    def add(self, kind, inputs=(), label=None):
        self.gates.append(Gate(kind, tuple(inputs), label))
        return len(self.gates) - 1

    def lit(self, name, positive):
        key = (name, positive)
        if key not in self.lits:
            if positive:
                self.lits[key] = self.add(VAR, (), name)
            else:
                self.lits[key] = self.add(NOT, (self.lit(name, True),))
        return self.lits[key]

    def build(self, block, budget):
        rng = self.rng
        if not block:
            return self.add(CONST, (), rng.randint(0, 1))
        key = frozenset(block)
        cached = self.pool.get(key)
        if cached and rng.random() < self.p_reuse:
            return rng.choice(cached)
        if len(block) == 1 or budget <= 2:
            if rng.random() < self.p_const:
                gid = self.add(CONST, (), rng.randint(0, 1))
            else:
                gid = self.lit(rng.choice(block), rng.random() < 0.5)
        elif rng.random() < (self.p_guard if budget <= 4 * len(block) else max(self.p_guard, 0.85)):
            gid = self._guard(block, budget)
        else:
            gid = self._split(block, budget)
        if rng.random() < self.p_neg:
            gid = self.add(NOT, (gid,))
        self.pool.setdefault(key, []).append(gid)
        return gid

    def _guard(self, block, budget):
        rng = self.rng
        g = rng.choice(block)
        rest = [f for f in block if f != g]
        half = max(1, (budget - 3) // 2)
        a = self.build(rest, half)
        b = self.build(rest, half)
        left = self.add(AND, (self.lit(g, True), a))
        right = self.add(AND, (self.lit(g, False), b))
        if rng.random() < 0.5:
            left, right = right, left
        return self.add(OR, (left, right))

    def _split(self, block, budget):
        rng = self.rng
        parts = 3 if len(block) >= 3 and rng.random() < 0.3 else 2
        shuffled = block[:]
        rng.shuffle(shuffled)
        cuts = sorted(rng.sample(range(1, len(shuffled)), parts - 1))
        blocks = [shuffled[i:j] for i, j in zip([0] + cuts, cuts + [len(shuffled)])]
        share = max(1, (budget - 1) // parts)
        kids = [self.build(sorted(b, key=self.features.index), share) for b in blocks]
        return self.add(AND, kids)


def random_dd_circuit(n, budget=None, seed=None, *, names=None, p_guard=0.5, p_neg=0.1,
                      p_reuse=0.25, p_const=0.05, unused=0):
    """Random d-D circuit over ``n`` features.

    ``budget`` steers the size (roughly the gate count before reuse); the
    default is ``8 * n``.  ``unused`` features are declared but never read.
    The result is flagged decomposable and deterministic.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    features = list(names) if names is not None else [f"x{i}" for i in range(n)]
    if len(features) != n:
        raise ValueError("names must have length n")
    budget = 8 * n if budget is None else budget
    used = features[: n - unused] if unused else features
    gen = _Gen(rng, features, p_guard, p_neg, p_reuse, p_const)
    out = gen.build(list(used), budget)
    # reuse can leave built-but-unread subcircuits; drop them
    gates, out = prune(gen.gates, out)
    return build_circuit(gates, out, features,
                         Flags(decomposable_checked=True, deterministic_trusted=True))


def sized_dd_circuit(n, min_gates, seed=None, **kw):
    """Random d-D circuit with between ``min_gates`` and ``2 * min_gates`` gates.

    Gate count is only loosely tied to the budget (reuse prunes whole
    subtrees), so the budget is steered up or down until a draw lands in range.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    budget = float(max(min_gates, 8 * n))
    for _ in range(400):
        c = random_dd_circuit(n, int(budget), seed=rng.randrange(2 ** 32), **kw)
        if min_gates <= len(c) <= 2 * min_gates:
            return c
        budget *= 1.2 if len(c) < min_gates else 0.8
    raise RuntimeError(f"could not reach {min_gates} gates with n={n}")


def random_entity(features, rng):
    return {f: rng.randint(0, 1) for f in features}


def random_probmap(features, rng, max_den=12):
    from fractions import Fraction
    out = {}
    for f in features:
        d = rng.randint(1, max_den)
        out[f] = Fraction(rng.randint(0, d), d)
    return out


def random_circuit(n, size, seed=None, *, max_fanin=3):
    """Arbitrary circuit (no d-D guarantee), for checks and transform tests."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    features = [f"x{i}" for i in range(n)]
    gates = [Gate(VAR, (), f) for f in features]
    if rng.random() < 0.3:
        gates.append(Gate(CONST, (), rng.randint(0, 1)))
    for _ in range(size):
        kind = rng.choice((AND, OR, OR, AND, NOT))
        if kind == NOT:
            gates.append(Gate(NOT, (rng.randrange(len(gates)),)))
        else:
            k = min(len(gates), rng.randint(2, max_fanin))
            gates.append(Gate(kind, tuple(rng.sample(range(len(gates)), k))))
    live, out = prune(gates, len(gates) - 1)
    return build_circuit(live, out, features)


def random_fbdd(n, seed=None, *, p_leaf=0.15, p_share=0.3, ordered=False):
    """Random free BDD over ``x0..x{n-1}`` with node sharing between branches."""
    from .frontends.bdd import Bdd, Internal, Leaf

    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    features = [f"x{i}" for i in range(n)]
    nodes = {"L0": Leaf(0), "L1": Leaf(1)}
    by_rest = {}

    def grow(rest, top=False):
        if not rest or (not top and rng.random() < p_leaf):
            return rng.choice(("L0", "L1"))
        key = frozenset(rest)
        if by_rest.get(key) and rng.random() < p_share:
            return rng.choice(by_rest[key])
        f = rest[0] if ordered else rng.choice(rest)
        sub = [g for g in rest if g != f]
        # children may skip features; sharing is keyed by the remaining set
        lo, hi = grow(sub), grow(sub)
        nid = f"n{len(nodes)}"
        nodes[nid] = Internal(f, lo, hi)
        by_rest.setdefault(key, []).append(nid)
        return nid

    root = grow(features, top=True)
    return Bdd(nodes, root, tuple(features))


def random_cnf3(n, m, seed=None):
    from .frontends.formulas import CnfFormula

    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    features = tuple(f"x{i}" for i in range(1, n + 1))
    clauses = tuple(tuple((f, rng.randint(0, 1)) for f in rng.sample(features, 3)) for _ in range(m))
    return CnfFormula(features, clauses)


def random_dnf(n, m, seed=None, *, max_len=3):
    from .frontends.formulas import DnfFormula

    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    features = tuple(f"x{i}" for i in range(1, n + 1))
    terms = tuple(tuple((f, rng.randint(0, 1)) for f in rng.sample(features, rng.randint(1, max_len)))
                  for _ in range(m))
    return DnfFormula(features, terms)
