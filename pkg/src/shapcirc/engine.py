"""Polynomial-time SHAP-scores for deterministic and decomposable circuits.

Two independent routes:

* uniform distribution -- condition on the feature, count accepted entities
  per agreement level with the entity (``ssat_profile``), turn those counts
  into the subset sums ``H`` and combine them with Shapley weights;
* product distribution -- a single bottom-up pass computing, per gate, the
  conditional-expectation sums for the two values of the feature
  (``gamma`` for x=1, ``delta`` for x=0).

Everything is exact.  Coefficient vectors are lists of Python ints; the
product pass scales each gate's vector by the product of the probability
denominators of its variables so that it, too, runs on integers.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .circuit import CONST, NOT, OR, VAR, Circuit, check_entity, evaluate
from .errors import (
    DomainMismatch,
    EfficiencyViolation,
    IndexOutOfRange,
    InvalidProbability,
    PreconditionViolated,
    PreprocessingMissing,
    UnknownFeature,
)
from .transforms import condition, is_prepared, prepare

# below this length a schoolbook convolution beats packing into one big int
_KRONECKER_MIN = 12


@lru_cache(maxsize=None)
def binomials(n: int) -> tuple:
    """Pascal triangle rows ``0..n`` as tuples of exact ints."""
    rows = [(1,)]
    for m in range(1, n + 1):
        prev = rows[-1]
        rows.append((1,) + tuple(prev[i - 1] + prev[i] for i in range(1, m)) + (1,))
    return tuple(rows)


@lru_cache(maxsize=None)
def shapley_weights(n: int) -> tuple:
    """``k! (n-k-1)! / n!`` for ``k = 0..n-1``."""
    fact = [1]
    for i in range(1, n + 1):
        fact.append(fact[-1] * i)
    return tuple(Fraction(fact[k] * fact[n - k - 1], fact[n]) for k in range(n))


def convolve(a, b):
    """Exact convolution of two nonnegative integer vectors."""
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        s = b[0]
        return [s * v for v in a]
    if len(b) == 2:
        s, t = b
        out = [s * v for v in a]
        out.append(0)
        for i, v in enumerate(a):
            out[i + 1] += t * v
        return out
    if len(b) < _KRONECKER_MIN:
        out = [0] * (len(a) + len(b) - 1)
        for j, t in enumerate(b):
            if t:
                for i, v in enumerate(a):
                    out[i + j] += t * v
        return out
    return _kronecker(a, b)


def _kronecker(a, b):
    # pack each vector into one integer with fixed-width slots, multiply, unpack
    bound = max(a).bit_length() + max(b).bit_length() + len(b).bit_length() + 1
    width = (bound + 7) // 8
    pa = int.from_bytes(b"".join(v.to_bytes(width, "little") for v in a), "little")
    pb = int.from_bytes(b"".join(v.to_bytes(width, "little") for v in b), "little")
    n = len(a) + len(b) - 1
    raw = (pa * pb).to_bytes(width * n, "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(n)]


def _require_prepared(c: Circuit, what: str):
    f = c.flags
    missing = [name for name, ok in (
        ("decomposable_checked", f.decomposable_checked),
        ("deterministic_trusted", f.deterministic_trusted),
        ("fanin2", f.fanin2),
        ("smooth", f.smooth),
    ) if not ok]
    if c.masks[c.output] != c.full_mask:
        missing.append("padded")
    if missing:
        raise PreprocessingMissing(f"{what} needs a prepared circuit; missing: {', '.join(missing)}")


def _require_dd(c: Circuit):
    if not c.flags.dd:
        raise PreconditionViolated(
            "circuit is not certified deterministic and decomposable; use certify()")


def _check_feature(c: Circuit, x: str):
    if x not in c.index:
        raise UnknownFeature(f"feature {x!r} is not declared")


def check_probmap(c: Circuit, p: Mapping[str, object]) -> dict:
    """Validate ``p`` against ``c.features`` and return it with Fraction values."""
    if set(p) != set(c.features):
        raise DomainMismatch(
            f"probability map domain mismatch: missing {sorted(set(c.features) - set(p))}, "
            f"extra {sorted(set(p) - set(c.features))}")
    out = {}
    for f in c.features:
        q = Fraction(p[f])
        if not 0 <= q <= 1:
            raise InvalidProbability(f"p({f}) = {q} is outside [0, 1]")
        out[f] = q
    return out


# ------------------------------------------------------------- uniform route

def alpha_table(c: Circuit, e: Mapping[str, int], keep_all=False):
    """Agreement-level counts for every gate.

    ``vec[k]`` at gate ``g`` counts the models of the subcircuit rooted at
    ``g`` (over ``var(g)``) that agree with ``e`` on exactly ``k`` of those
    variables.  Returns the per-gate list when ``keep_all`` is set, otherwise
    only the output vector; intermediate vectors are dropped as soon as
    their last reader has run.
    """
    rows = binomials(c.n)
    masks = c.masks
    refs = None if keep_all else c.out_degrees()
    vals = [None] * len(c.gates)
    for gid, g in enumerate(c.gates):
        k = g.kind
        if k == VAR:
            b = e[g.label]
            v = [1 - b, b]
        elif k == CONST:
            v = [g.label]
        elif k == NOT:
            row = rows[masks[gid].bit_count()]
            v = [r - a for r, a in zip(row, vals[g.inputs[0]])]
        elif len(g.inputs) == 1:
            v = vals[g.inputs[0]]
        elif k == OR:
            v = [a + b for a, b in zip(vals[g.inputs[0]], vals[g.inputs[1]])]
        else:
            v = convolve(vals[g.inputs[0]], vals[g.inputs[1]])
        vals[gid] = v
        if refs is not None:
            for i in g.inputs:
                refs[i] -= 1
                if refs[i] == 0:
                    vals[i] = None
    return vals if keep_all else vals[c.output]


def ssat_profile(c: Circuit, e: Mapping[str, int]) -> list:
    """``[ssat(c, e, l) for l in 0..n]`` via the bottom-up count DP."""
    _require_prepared(c, "ssat_profile")
    check_entity(c, e)
    return list(alpha_table(c, e))


def _h_from_profile(profile):
    n = len(profile) - 1
    rows = binomials(n)
    return [sum(rows[l][k] * profile[l] for l in range(k, n + 1)) for k in range(n + 1)]


def h_uniform(c: Circuit, e: Mapping[str, int], k: int) -> int:
    """Sum over |S| = k of the number of accepted entities consistent with e on S."""
    if not 0 <= k <= c.n:
        raise IndexOutOfRange(f"k = {k} outside 0..{c.n}")
    return _h_from_profile(ssat_profile(c, e))[k]


def model_count(c: Circuit) -> int:
    _require_prepared(c, "model_count")
    e0 = dict.fromkeys(c.features, 0)
    return sum(alpha_table(c, e0))


def shap_uniform(c: Circuit, e: Mapping[str, int], x: str) -> Fraction:
    """SHAP-score of ``x`` on ``e`` under the uniform distribution."""
    _require_dd(c)
    _check_feature(c, x)
    check_entity(c, e)
    n = c.n
    rest = {f: v for f, v in e.items() if f != x}
    h_pos = _h_from_profile(ssat_profile(prepare(condition(c, x, 1)), rest))
    h_neg = _h_from_profile(ssat_profile(prepare(condition(c, x, 0)), rest))
    h_own = h_pos if e[x] else h_neg
    total = Fraction(0)
    for k, w in enumerate(shapley_weights(n)):
        alpha = Fraction(h_own[k], 2 ** (n - k - 1))
        beta = Fraction(h_pos[k] + h_neg[k], 2 ** (n - k))
        total += w * (alpha - beta)
    return total


# ------------------------------------------------------------- product route

def _gamma_delta(c: Circuit, p: Mapping[str, Fraction], e: Mapping[str, int], x: str):
    """Run the gamma/delta pass; return integer vectors and their common scale.

    The true values are ``gamma[l] / scale`` and ``delta[l] / scale``.  Gates
    whose var-set avoids ``x`` have gamma == delta and share one list.
    """
    xbit = 1 << c.index[x]
    rows = binomials(c.n)
    masks = c.masks
    refs = c.out_degrees()
    gam = [None] * len(c.gates)
    dlt = [None] * len(c.gates)
    scl = [1] * len(c.gates)
    for gid, g in enumerate(c.gates):
        k = g.kind
        ins = g.inputs
        if k == VAR:
            if g.label == x:
                gv, dv, s = [1], [0], 1
            else:
                q = p[g.label]
                s = q.denominator
                gv = dv = [q.numerator, e[g.label] * s]
        elif k == CONST:
            gv = dv = [g.label]
            s = 1
        elif len(ins) == 1 and k != NOT:
            gv, dv, s = gam[ins[0]], dlt[ins[0]], scl[ins[0]]
        else:
            if k == NOT:
                i = ins[0]
                s = scl[i]
                row = rows[(masks[gid] & ~xbit).bit_count()]
                gv = [r * s - v for r, v in zip(row, gam[i])]
                dv = gv if gam[i] is dlt[i] else [r * s - v for r, v in zip(row, dlt[i])]
            elif k == OR:
                i, j = ins
                s = scl[i]
                if scl[j] != s:
                    raise PreprocessingMissing(f"or-gate {gid} is not smooth")
                gv = [a + b for a, b in zip(gam[i], gam[j])]
                shared = gam[i] is dlt[i] and gam[j] is dlt[j]
                dv = gv if shared else [a + b for a, b in zip(dlt[i], dlt[j])]
            else:
                i, j = ins
                s = scl[i] * scl[j]
                gv = convolve(gam[i], gam[j])
                shared = gam[i] is dlt[i] and gam[j] is dlt[j]
                dv = gv if shared else convolve(dlt[i], dlt[j])
        gam[gid], dlt[gid], scl[gid] = gv, dv, s
        for i in ins:
            refs[i] -= 1
            if refs[i] == 0:
                gam[i] = dlt[i] = None
    o = c.output
    return gam[o], dlt[o], scl[o]


def product_coefficients(c: Circuit, p, e, x):
    """Output ``(gamma, delta)`` as Fractions, indexed ``0..n-1``.

    ``gamma[k]`` (resp. ``delta[k]``) is the sum over |S| = k subsets of
    ``X - {x}`` of the product-distribution expectation of the circuit
    conditioned on x=1 (resp. x=0) and on agreement with e on S.
    """
    _require_dd(c)
    _check_feature(c, x)
    check_entity(c, e)
    p = check_probmap(c, p)
    gv, dv, s = _gamma_delta(prepare(c), p, e, x)
    return [Fraction(v, s) for v in gv], [Fraction(v, s) for v in dv]


def shap_product(c: Circuit, p, e: Mapping[str, int], x: str) -> Fraction:
    """SHAP-score of ``x`` on ``e`` under the product distribution ``p``."""
    _require_dd(c)
    _check_feature(c, x)
    check_entity(c, e)
    p = check_probmap(c, p)
    gv, dv, s = _gamma_delta(prepare(c), p, e, x)
    w = shapley_weights(c.n)
    acc = Fraction(0)
    for k in range(c.n):
        acc += w[k] * (gv[k] - dv[k])
    return (e[x] - p[x]) * acc / s


def expectation(c: Circuit, p=None) -> Fraction:
    """Expected value of the classifier under uniform (``p=None``) or ``Pi_p``."""
    _require_prepared(c, "expectation")
    if p is None:
        return Fraction(model_count(c), 2 ** c.n)
    p = check_probmap(c, p)
    vals = []
    for g in c.gates:
        k = g.kind
        if k == VAR:
            vals.append(p[g.label])
        elif k == CONST:
            vals.append(Fraction(g.label))
        elif k == NOT:
            vals.append(1 - vals[g.inputs[0]])
        elif k == OR:
            vals.append(sum((vals[i] for i in g.inputs), Fraction(0)))
        else:
            v = Fraction(1)
            for i in g.inputs:
                v *= vals[i]
            vals.append(v)
    return vals[c.output]


# ------------------------------------------------------------- reports

@dataclass(frozen=True)
class ShapReport:
    scores: dict
    entity: dict
    distribution: dict | None  # None means uniform
    classifier_output: int
    expected_value: Fraction

    @property
    def total(self) -> Fraction:
        return sum(self.scores.values(), Fraction(0))


def _one(args):
    prepared, e, p, x = args
    if p is None:
        return shap_uniform(prepared, e, x)
    return shap_product(prepared, p, e, x)


def shap_all(c: Circuit, e: Mapping[str, int], p=None, workers: int | None = None) -> ShapReport:
    """Scores for every declared feature, checked against the efficiency identity.

    The circuit is prepared once and shared by the per-feature runs.
    ``workers > 1`` spreads features over processes; the result is identical.
    """
    _require_dd(c)
    check_entity(c, e)
    if p is not None:
        p = check_probmap(c, p)
    prepared = prepare(c)
    jobs = [(prepared, dict(e), p, x) for x in c.features]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        values = [_one(j) for j in jobs]
    scores = dict(zip(c.features, values))
    expected = expectation(prepared, p)
    out = evaluate(c, e)
    report = ShapReport(scores, dict(e), p, out, expected)
    if report.total != out - expected:
        raise EfficiencyViolation(
            f"sum of scores {report.total} != {out} - {expected}")
    return report


__all__ = [
    "alpha_table", "binomials", "check_probmap", "convolve", "expectation", "h_uniform",
    "is_prepared", "model_count", "product_coefficients", "shap_all", "shap_product",
    "shap_uniform", "shapley_weights", "ssat_profile", "ShapReport",
]
