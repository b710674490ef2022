from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shapcirc.circuit import (certify, check_decomposable, check_deterministic_bruteforce,
                              entity_from_index, evaluate, truth_table)
from shapcirc.engine import model_count, shap_uniform
from shapcirc.errors import (BadRational, CircuitSyntaxError, DecomposabilityViolation, DuplicateId,
                             ExtraFeature, MissingFeature, MissingOutput, NotFree, NotThreeCnf,
                             PositionedError, PreconditionViolated, RepeatedFeatureInTerm,
                             UnknownGateRef, ValueOutOfRange)
from shapcirc.frontends import (Bdd, Internal, Leaf, encode_bdd, encode_cnf3, encode_dnf, parse_bdd,
                                parse_circuit, parse_cnf, parse_dnf, parse_entity, parse_nnf,
                                parse_probmap, render_circuit)
from shapcirc.frontends.formulas import CnfFormula, DnfFormula, formula_models
from shapcirc.generators import random_circuit, random_dnf, random_fbdd
from shapcirc.transforms import prepare

EXAMPLE_NNF = """\
c fg=1 dtr=2 nf=3 na=4
nnf 8 7 4
L 1
L 2
L -2
L 3
L 4
A 3 2 3 4
O 2 2 1 5
A 2 0 6
"""


def equivalent(a, b):
    return a.features == b.features and truth_table(a) == truth_table(b)


# ---------------------------------------------------------------- native

def test_native_small():
    c = parse_circuit("features x y\n0 var x\n1 var y\n2 and 0 1\noutput 2\n")
    assert len(c) == 3 and c.features == ("x", "y")


def test_native_example(example):
    assert check_decomposable(example) and check_deterministic_bruteforce(example)


def test_native_ids_are_tokens():
    c = parse_circuit("features x\nA var x  # literal\nB not A\noutput B\n")
    assert truth_table(c) == 0b01


@pytest.mark.parametrize("text, exc, line, col", [
    ("features x\n0 var x\n1 and 0 5\noutput 1\n", UnknownGateRef, 3, 9),
    ("features x\n0 var x\n0 not 0\noutput 0\n", DuplicateId, 3, 1),
    ("features x\n0 var x\n", MissingOutput, 2, 1),
    ("features x\n0 var y\noutput 0\n", CircuitSyntaxError, 2, 7),
    ("features x\n0 xor 0\noutput 0\n", CircuitSyntaxError, 2, 3),
    ("0 var x\n", CircuitSyntaxError, 1, 1),
    ("features x\n0 const 2\noutput 0\n", CircuitSyntaxError, 2, 3),
    ("features x\n0 var x\n1 not 0 0\noutput 1\n", CircuitSyntaxError, 3, 9),
    ("features x\n0 var x\n1 not 0\noutput 0\n", CircuitSyntaxError, 4, 1),
    ("features x\n0 var x\noutput 7\n", UnknownGateRef, 3, 8),
])
def test_native_errors(text, exc, line, col):
    with pytest.raises(exc) as info:
        parse_circuit(text)
    assert (info.value.line, info.value.col) == (line, col)


@given(st.integers(0, 10 ** 6), st.integers(1, 8))
def test_render_roundtrip(seed, n):
    c = random_circuit(n, 12, seed)
    assert equivalent(parse_circuit(render_circuit(c)), c)


# ---------------------------------------------------------------- nnf

def test_nnf_and():
    c = parse_nnf("nnf 3 2 2\nL 1\nL 2\nA 2 0 1\n")
    assert c.features == ("v1", "v2") and truth_table(c) == 0b1000
    assert c.flags.deterministic_trusted and c.flags.decomposable_checked


def test_nnf_negative_literal():
    c = parse_nnf("nnf 1 0 1\nL -1\n", ["x"])
    assert [g.kind for g in c.gates] == ["var", "not"]


def test_nnf_constants():
    assert truth_table(parse_nnf("nnf 1 0 0\nA 0\n")) == 1
    assert truth_table(parse_nnf("nnf 1 0 0\nO 0 0\n")) == 0


def test_nnf_example_matches_native(example):
    c = parse_nnf(EXAMPLE_NNF, ["fg", "dtr", "nf", "na"])
    assert equivalent(c, example)
    assert model_count(prepare(c)) == 5


def test_nnf_prunes_unreachable():
    c = parse_nnf("nnf 3 1 2\nL 1\nL 2\nA 1 1\n")
    assert [g.label for g in c.gates] == ["v2", None]


def test_nnf_rejects_non_decomposable():
    with pytest.raises(DecomposabilityViolation):
        parse_nnf("nnf 3 2 1\nL 1\nL -1\nA 2 0 1\n")


@pytest.mark.parametrize("text, exc", [
    ("", CircuitSyntaxError),
    ("nnf 2 1\n", CircuitSyntaxError),
    ("nnf 2 1 1\nL 1\nA 1 3\n", UnknownGateRef),
    ("nnf 2 2 1\nL 1\nA 1 0\n", CircuitSyntaxError),
    ("nnf 1 0 1\nL 2\n", CircuitSyntaxError),
    ("nnf 1 0 1\nX 2\n", CircuitSyntaxError),
    ("nnf 2 1 1\nL 1\nA 2 0\n", CircuitSyntaxError),
    ("nnf 1 0 1\nL one\n", CircuitSyntaxError),
])
def test_nnf_errors(text, exc):
    with pytest.raises(exc) as info:
        parse_nnf(text)
    assert info.value.line is not None


# ---------------------------------------------------------------- bdd

def test_bdd_single_leaf():
    c = encode_bdd(parse_bdd("leaf a 1\nroot a\n"))
    assert [g.kind for g in c.gates] == ["const"] and truth_table(c) == 1


def test_bdd_one_variable():
    c = encode_bdd(parse_bdd("node r x z o\nleaf z 0\nleaf o 1\nroot r\n"))
    assert [evaluate(c, {"x": v}) for v in (0, 1)] == [0, 1]


def test_dt_conjunction():
    text = "root r\nnode r x l0 s\nnode s y l1 l2\nleaf l0 0\nleaf l1 0\nleaf l2 1\n"
    b = parse_bdd(text)
    c = encode_bdd(b, tree=True)
    accepted = [i for i in range(4) if (truth_table(c) >> i) & 1]
    assert accepted == [3]
    assert check_deterministic_bruteforce(c) and check_decomposable(c)


def test_bdd_not_free():
    text = "root r\nnode r x a b\nnode a x z o\nleaf b 1\nleaf z 0\nleaf o 1\n"
    with pytest.raises(NotFree) as info:
        encode_bdd(parse_bdd(text))
    assert info.value.feature == "x"


def test_bdd_deep_repeat_through_sharing():
    # x repeats only along a path that goes through a shared node
    b = Bdd({"r": Internal("x", "s", "t"), "s": Internal("y", "L0", "t"),
             "t": Internal("z", "u", "L1"), "u": Internal("x", "L0", "L1"),
             "L0": Leaf(0), "L1": Leaf(1)}, "r")
    with pytest.raises(NotFree):
        encode_bdd(b)


def test_dt_mode_rejects_sharing():
    text = "root r\nnode r x a a2\nnode a y z o\nnode a2 y z o\nleaf z 0\nleaf o 1\n"
    b = parse_bdd(text)
    encode_bdd(b)  # a fine BDD
    with pytest.raises(PreconditionViolated):
        encode_bdd(b, tree=True)


@pytest.mark.parametrize("text, exc", [
    ("node r x a b\nroot r\n", UnknownGateRef),
    ("leaf a 1\nleaf a 0\nroot a\n", DuplicateId),
    ("leaf a 1\n", MissingOutput),
    ("leaf a 2\nroot a\n", CircuitSyntaxError),
    ("node r x r r\nroot r\n", CircuitSyntaxError),
    ("branch r\n", CircuitSyntaxError),
])
def test_bdd_errors(text, exc):
    with pytest.raises(exc) as info:
        parse_bdd(text)
    assert info.value.line is not None


@given(st.integers(0, 10 ** 6), st.integers(1, 9), st.booleans())
def test_bdd_encoding_equivalent(seed, n, ordered):
    b = random_fbdd(n, seed, ordered=ordered)
    c = encode_bdd(b)
    assert check_decomposable(c) and check_deterministic_bruteforce(c)
    for i in range(2 ** n):
        e = entity_from_index(b.features, i)
        assert evaluate(c, e) == b.evaluate(e)


# ---------------------------------------------------------------- cnf / dnf

def test_cnf3_single_clause():
    f = parse_cnf("p cnf 3 1\n1 2 3 0\n", ["x", "y", "z"])
    c = encode_cnf3(f)
    ors = [g for g in c.gates if g.kind == "or"]
    assert len(ors) == 1 and len(ors[0].inputs) == 7
    assert all(len(c.gates[i].inputs) == 3 for i in ors[0].inputs)
    assert truth_table(c).bit_count() == 7
    assert check_deterministic_bruteforce(c)


def test_cnf3_two_clauses():
    f = parse_cnf("c demo\np cnf 3 2\n1 2 3 0\n-1 2 3 0\n")
    c = encode_cnf3(f)
    brute = sum(formula_models(f, entity_from_index(f.features, i)) for i in range(8))
    assert truth_table(c).bit_count() == brute == 6
    assert check_deterministic_bruteforce(c)


def test_cnf3_clause_across_lines():
    f = parse_cnf("p cnf 3 1\n1 2\n3 0\n")
    assert len(f.clauses[0]) == 3


def test_not_three_cnf():
    with pytest.raises(NotThreeCnf) as info:
        encode_cnf3(parse_cnf("p cnf 3 2\n1 2 3 0\n1 1 2 0\n"))
    assert info.value.line == 3
    with pytest.raises(NotThreeCnf):
        encode_cnf3(CnfFormula(("a", "b"), ((("a", 1), ("b", 1)),)))


def test_dnf_single_term():
    c = certify(encode_dnf(parse_dnf("p dnf 2 1\n1 -2 0\n", ["x", "y"])))
    assert shap_uniform(c, {"x": 1, "y": 0}, "x") == F(3, 8)


def test_dnf_disjunction_not_deterministic():
    c = encode_dnf(parse_dnf("p dnf 2 2\n1 0\n2 0\n", ["x", "y"]))
    assert check_decomposable(c)
    chk = check_deterministic_bruteforce(c)
    assert not chk and chk.witness == {"x": 1, "y": 1}


def test_dnf_edge_cases():
    assert truth_table(encode_dnf(DnfFormula(("x",), ((),)))) == 0b11
    assert truth_table(encode_dnf(DnfFormula(("x",), ()))) == 0
    with pytest.raises(RepeatedFeatureInTerm) as info:
        encode_dnf(parse_dnf("p dnf 2 1\n1 -1 0\n"))
    assert info.value.line == 2


@given(st.integers(0, 10 ** 6), st.integers(3, 8), st.integers(1, 5))
def test_random_dnf(seed, n, m):
    f = random_dnf(n, m, seed)
    c = encode_dnf(f)
    assert check_decomposable(c)
    brute = sum(formula_models(f, entity_from_index(f.features, i)) for i in range(2 ** n))
    assert truth_table(c).bit_count() == brute


@pytest.mark.parametrize("text", [
    "1 2 3 0\n", "p cnf 3\n", "p cnf 3 1\n1 2 4 0\n", "p cnf 3 1\n1 2 3\n",
    "p cnf 3 2\n1 2 3 0\n", "p cnf 3 1\n1 a 3 0\n", "p dnf 3 1\n1 0\n",
])
def test_dimacs_errors(text):
    with pytest.raises(CircuitSyntaxError):
        parse_cnf(text)


# ---------------------------------------------------------------- values

FEATS = ["fg", "dtr", "nf", "na"]


def test_entity_example():
    assert parse_entity('{"fg":1,"dtr":1,"nf":0,"na":1}', FEATS) == \
        {"fg": 1, "dtr": 1, "nf": 0, "na": 1}


def test_probmap_forms():
    p = parse_probmap('{"fg":"1/3","dtr":0.1,"nf":1,"na":"0.25"}', FEATS)
    assert p == {"fg": F(1, 3), "dtr": F(1, 10), "nf": F(1), "na": F(1, 4)}


@pytest.mark.parametrize("text, exc", [
    ('{"x":"7/6"}', ValueOutOfRange),
    ('{"x":-0.5}', ValueOutOfRange),
    ('{"x":"a/b"}', BadRational),
    ('{"x":"1/0"}', BadRational),
    ('{"x":true}', BadRational),
    ('{"x":NaN}', BadRational),
    ('{}', MissingFeature),
    ('{"x":"1/2","y":"1/2"}', ExtraFeature),
    ('{"x":', CircuitSyntaxError),
    ('[0.5]', CircuitSyntaxError),
    ('{"x":0.5,"x":0.5}', DuplicateId),
])
def test_probmap_errors(text, exc):
    with pytest.raises(exc) as info:
        parse_probmap(text, ["x"])
    assert isinstance(info.value, PositionedError) and info.value.line is not None


def test_probmap_single():
    assert parse_probmap('{"x":"1/3"}', ["x"]) == {"x": F(1, 3)}


@pytest.mark.parametrize("text, exc", [
    ('{"x":2}', ValueOutOfRange),
    ('{"x":0.5}', ValueOutOfRange),
    ('{"x":true}', ValueOutOfRange),
    ('{"x":1,\n "y":0}', ExtraFeature),
    ('{}', MissingFeature),
])
def test_entity_errors(text, exc):
    with pytest.raises(exc):
        parse_entity(text, ["x"])


def test_extra_feature_position():
    with pytest.raises(ExtraFeature) as info:
        parse_entity('{"x":1,\n "y":0}', ["x"])
    assert (info.value.line, info.value.col) == (2, 2)
