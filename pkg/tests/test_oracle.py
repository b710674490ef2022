import random
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shapcirc import oracle
from shapcirc.circuit import Var, build_circuit, evaluate, truth_table
from shapcirc.errors import IndexOutOfRange, TooLarge, UnknownFeature
from shapcirc.generators import random_circuit, random_entity, random_probmap


def naive_phi(c, p, e, S):
    """Conditional expectation straight from the definition, entity by entity."""
    num = den = F(0)
    for bits in product((0, 1), repeat=c.n):
        other = dict(zip(c.features, bits))
        if any(other[f] != e[f] for f in S):
            continue
        w = F(1)
        for f in c.features:
            if f in S:
                continue
            q = F(1, 2) if p is None else p[f]
            w *= q if other[f] else 1 - q
        num += w * evaluate(c, other)
        den += w
    return num / den


def setup(seed, n):
    rng = random.Random(seed)
    c = random_circuit(n, 10, rng)
    return c, random_entity(c.features, rng), random_probmap(c.features, rng)


@given(st.integers(0, 10 ** 6), st.integers(1, 5), st.data())
def test_phi_matches_definition(seed, n, data):
    c, e, p = setup(seed, n)
    S = data.draw(st.sets(st.sampled_from(c.features)))
    for dist in (None, p):
        assert oracle.brute_phi(c, dist, e, S) == naive_phi(c, dist, e, S)


@given(st.integers(0, 10 ** 6), st.integers(1, 7))
def test_efficiency_by_construction(seed, n):
    c, e, p = setup(seed, n)
    for dist in (None, p):
        total = sum(oracle.brute_shap_all(c, dist, e).values())
        assert total == evaluate(c, e) - oracle.brute_expectation(c, dist)


@given(st.integers(0, 10 ** 6), st.integers(1, 6))
def test_single_and_all_agree(seed, n):
    c, e, p = setup(seed, n)
    every = oracle.brute_shap_all(c, p, e)
    assert all(oracle.brute_shap(c, p, e, x) == every[x] for x in c.features)


@given(st.integers(0, 10 ** 6), st.integers(1, 7))
def test_ssat_sums_to_count(seed, n):
    c, e, _ = setup(seed, n)
    assert sum(oracle.brute_ssat(c, e, k) for k in range(n + 1)) == truth_table(c).bit_count()
    assert oracle.brute_count(c) == truth_table(c).bit_count()


@given(st.integers(0, 10 ** 6), st.integers(1, 6))
def test_h_edges(seed, n):
    c, e, p = setup(seed, n)
    assert oracle.brute_h(c, e, 0) == oracle.brute_count(c)
    assert oracle.brute_h(c, e, n) == evaluate(c, e)
    assert oracle.brute_h(c, e, n, p) == evaluate(c, e)
    assert oracle.brute_h(c, e, 0, p) == oracle.brute_expectation(c, p)


def test_phi_extremes(example, example_entity):
    assert oracle.brute_phi(example, None, example_entity, []) == F(5, 16)
    assert oracle.brute_phi(example, None, example_entity, example.features) == 1


def test_zero_probability_is_well_defined():
    c = build_circuit([Var("x")], 0, ["x", "y"])
    p = {"x": F(0), "y": F(1, 2)}
    # conditioning on x=1 must not divide by the zero mass of x=1
    assert oracle.brute_phi(c, p, {"x": 1, "y": 0}, ["x"]) == 1
    assert oracle.brute_shap(c, p, {"x": 1, "y": 0}, "x") == 1


def test_caps(monkeypatch, example, example_entity):
    monkeypatch.setenv("SHAPCIRC_MAX_BRUTE", "3")
    with pytest.raises(TooLarge):
        oracle.brute_shap(example, None, example_entity, "fg")
    with pytest.raises(TooLarge):
        oracle.brute_count(example)


def test_argument_errors(example, example_entity):
    with pytest.raises(UnknownFeature):
        oracle.brute_shap(example, None, example_entity, "zz")
    with pytest.raises(UnknownFeature):
        oracle.brute_phi(example, None, example_entity, ["zz"])
    with pytest.raises(IndexOutOfRange):
        oracle.brute_ssat(example, example_entity, 7)
    with pytest.raises(IndexOutOfRange):
        oracle.brute_h(example, example_entity, -1)


def test_example_profile(example, example_entity):
    assert [oracle.brute_ssat(example, example_entity, k) for k in range(5)] == [0, 0, 2, 2, 1]
