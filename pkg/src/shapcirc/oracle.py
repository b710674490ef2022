"""Exponential-time reference implementations, straight from the definitions.

Used to cross-check the engine at desk scale.  Nothing here knows about
conditioning, smoothing or the agreement-level DP: every quantity is a sum
over explicitly enumerated entities and feature subsets.

``p=None`` selects the uniform distribution.  For a product distribution the
conditional expectation given agreement with ``e`` on ``S`` is the
expectation over the free features ``X - S`` with their own marginals, which
stays well defined when an entity value has probability zero.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import factorial

from . import config
from .circuit import Circuit, check_entity, entity_from_index, entity_index, evaluate, truth_table
from .errors import IndexOutOfRange, TooLarge, UnknownFeature


def _cap(c, default, what):
    limit = config.cap(default)
    if c.n > limit:
        raise TooLarge(f"{what}: {c.n} features exceed the oracle cap of {limit}")


def _outputs(c: Circuit):
    """Classifier value on every entity, indexed by ``entity_index``."""
    t = truth_table(c)
    return [(t >> i) & 1 for i in range(1 << c.n)]


def _subset_mask(c, S):
    m = 0
    for f in S:
        if f not in c.index:
            raise UnknownFeature(f"feature {f!r} is not declared")
        m |= 1 << c.index[f]
    return m


def _int_weights(c, p):
    """Per-feature integer weights ``(w0, w1)`` with ``w0 + w1`` the denominator of p."""
    if p is None:
        return [(1, 1)] * c.n
    out = []
    for f in c.features:
        q = p[f]
        out.append((q.denominator - q.numerator, q.numerator))
    return out


def _phi(c, outputs, weights, eidx, smask):
    """Expectation of the classifier over the entities consistent with e on S.

    Enumerates cw(e, S) by branching on each free feature; an entity's weight
    is the product of the marginals of its free features.
    """
    items = [(eidx & smask, 1)]
    for j in range(c.n):
        if smask >> j & 1:
            continue
        bit = 1 << j
        w0, w1 = weights[j]
        items = [(i, w * w0) for i, w in items] + [(i | bit, w * w1) for i, w in items]
    num = sum(w for i, w in items if outputs[i])
    den = sum(w for _, w in items)
    return Fraction(num, den)


def _normalize_p(c, p):
    if p is None:
        return None
    from .engine import check_probmap
    return check_probmap(c, p)


def brute_phi(c: Circuit, p, e, S) -> Fraction:
    """E[M(e') | e' consistent with e on S] by enumeration of ent(X)."""
    _cap(c, config.ORACLE_MAX_PHI_VARS, "brute_phi")
    check_entity(c, e)
    p = _normalize_p(c, p)
    return _phi(c, _outputs(c), _int_weights(c, p), entity_index(c.features, e), _subset_mask(c, S))


def brute_shap(c: Circuit, p, e, x: str) -> Fraction:
    """Shapley value of ``x`` by summing over every subset of ``X - {x}``."""
    _cap(c, config.ORACLE_MAX_SHAP_VARS, "brute_shap")
    check_entity(c, e)
    if x not in c.index:
        raise UnknownFeature(f"feature {x!r} is not declared")
    p = _normalize_p(c, p)
    outputs = _outputs(c)
    weights = _int_weights(c, p)
    eidx = entity_index(c.features, e)
    n = c.n
    xbit = 1 << c.index[x]
    total = Fraction(0)
    # binary counter over subsets, in feature-index order
    for smask in range(1 << n):
        if smask & xbit:
            continue
        s = smask.bit_count()
        w = Fraction(factorial(s) * factorial(n - s - 1), factorial(n))
        total += w * (_phi(c, outputs, weights, eidx, smask | xbit)
                      - _phi(c, outputs, weights, eidx, smask))
    return total


def brute_shap_all(c: Circuit, p, e) -> dict:
    """Every feature's Shapley value, sharing one table of subset expectations."""
    _cap(c, config.ORACLE_MAX_SHAP_VARS, "brute_shap_all")
    check_entity(c, e)
    p = _normalize_p(c, p)
    outputs = _outputs(c)
    eidx = entity_index(c.features, e)
    n = c.n
    weights = _int_weights(c, p)
    phi = [_phi(c, outputs, weights, eidx, m) for m in range(1 << n)]
    fact = [factorial(i) for i in range(n + 1)]
    scores = {}
    for j, x in enumerate(c.features):
        xbit = 1 << j
        total = Fraction(0)
        for smask in range(1 << n):
            if smask & xbit:
                continue
            s = smask.bit_count()
            total += Fraction(fact[s] * fact[n - s - 1], fact[n]) * (phi[smask | xbit] - phi[smask])
        scores[x] = total
    return scores


def brute_ssat(c: Circuit, e, level: int) -> int:
    """Number of accepted entities agreeing with ``e`` on exactly ``level`` features."""
    _cap(c, config.ORACLE_MAX_PHI_VARS, "brute_ssat")
    check_entity(c, e)
    if not 0 <= level <= c.n:
        raise IndexOutOfRange(f"level {level} outside 0..{c.n}")
    count = 0
    for i in range(1 << c.n):
        other = entity_from_index(c.features, i)
        agree = sum(other[f] == e[f] for f in c.features)
        if agree == level and evaluate(c, other):
            count += 1
    return count


def brute_h(c: Circuit, e, k: int, p=None) -> Fraction:
    """Subset sum over all |S| = k.

    Uniform: the number of accepted entities consistent with e on S, summed
    over S (an integer).  Product: the conditional expectations, summed.
    """
    _cap(c, config.ORACLE_MAX_SHAP_VARS, "brute_h")
    check_entity(c, e)
    if not 0 <= k <= c.n:
        raise IndexOutOfRange(f"k = {k} outside 0..{c.n}")
    p = _normalize_p(c, p)
    outputs = _outputs(c)
    weights = _int_weights(c, p)
    eidx = entity_index(c.features, e)
    total = Fraction(0)
    for S in combinations(range(c.n), k):
        smask = sum(1 << j for j in S)
        if p is None:
            total += sum(outputs[i] for i in range(1 << c.n) if not (i ^ eidx) & smask)
        else:
            total += _phi(c, outputs, weights, eidx, smask)
    return total


def brute_count(c: Circuit) -> int:
    _cap(c, config.ORACLE_MAX_PHI_VARS, "brute_count")
    return truth_table(c).bit_count()


def brute_expectation(c: Circuit, p=None) -> Fraction:
    _cap(c, config.ORACLE_MAX_PHI_VARS, "brute_expectation")
    if p is None:
        return Fraction(brute_count(c), 2 ** c.n)
    p = _normalize_p(c, p)
    return _phi(c, _outputs(c), _int_weights(c, p), 0, 0)
