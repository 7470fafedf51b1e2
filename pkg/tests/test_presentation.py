import json

import pytest
from hypothesis import given, strategies as st

from toricflip.constructions import blowup_at_points, projective_space, run_construction
from toricflip.presentation import (FanPresentation, PresentationError, PrimitiveRelation,
                                    fano_degree, is_fano, label_key, to_bigint_dict, validate)


R = PrimitiveRelation


def test_relation_basics():
    r = R({"y1", "y2"}, {"x3": 1, "x4": 1, "x5": 1})
    assert r.lhs == {"y1", "y2"}
    assert r.rhs == (("x3", 1), ("x4", 1), ("x5", 1))
    assert r.degree == -1
    assert str(r) == "y1 + y2 = x3 + x4 + x5"
    assert r.reversed() == R({"x3", "x4", "x5"}, {"y1": 1, "y2": 1})
    assert R(["a"], [("b", 2)]) == R({"a"}, {"b": 2})


@pytest.mark.parametrize("lhs, rhs", [
    (set(), {}),
    ({"a"}, {"a": 1}),
    ({"a"}, {"b": 0}),
    ({"a"}, {"b": -2}),
])
def test_relation_rejects(lhs, rhs):
    with pytest.raises(PresentationError):
        R(lhs, rhs)


def test_label_order_is_natural():
    assert sorted(["x10", "y1", "x2", "x1"], key=label_key) == ["x1", "x2", "x10", "y1"]


def test_validate_projective_space():
    assert validate(projective_space(3)) == []


def test_validate_antichain():
    gens = {"x1": [1, 0], "x2": [0, 1], "x3": [-1, -1], "z": [1, 1]}
    F = FanPresentation(2, gens, [R({"x1", "x2"}, {"z": 1}), R({"x1", "x2", "x3"})])
    problems = validate(F)
    assert len(problems) == 1 and "antichain violated" in problems[0]


def test_validate_unbalanced():
    B = blowup_at_points(4, 2)
    good = B.relation({"y1", "y2"})
    bad = R(good.lhs, {"x3": 2, "x4": 1, "x5": 1})
    F = B.with_relations([bad if r == good else r for r in B.relations])
    problems = validate(F)
    assert len(problems) == 1 and "relation unbalanced" in problems[0]


def test_validate_rhs_not_cone():
    gens = {"x1": [1, 0], "x2": [0, 1], "z": [1, 1]}
    F = FanPresentation(2, gens, [R({"x1", "x2"}, {"z": 1}), R({"z"}, {"x1": 1, "x2": 1})])
    assert any(p.startswith("{z}") and "not a cone" in p for p in validate(F))


def test_validate_unknown_label():
    F = FanPresentation(1, {"a": [1], "b": [-1]}, [R({"a", "c"})])
    assert any("unknown labels" in p for p in validate(F))


@pytest.mark.parametrize("d", range(3, 8))
def test_constructed_presentations_valid(d):
    assert validate(projective_space(d)) == []
    for n in range(1, d + 2):
        assert validate(blowup_at_points(d, n)) == []


def test_fano_degree_examples():
    assert fano_degree(projective_space(3).relations[0]) == 4
    assert fano_degree(R({"y1", "y2"}, {"x3": 1, "x4": 1})) == 0
    assert fano_degree(R({"x2", "x3", "x4", "x5"}, {"y1": 1})) == 3


def test_is_fano_examples():
    assert is_fano(projective_space(4))
    assert not is_fano(blowup_at_points(4, 2))
    assert is_fano(run_construction(4, 2).final)


def test_is_fano_rejects_invalid():
    gens = {"x1": [1, 0], "x2": [0, 1], "x3": [-1, -1]}
    F = FanPresentation(2, gens, [R({"x1", "x2"})])
    with pytest.raises(PresentationError, match="invalid"):
        is_fano(F)


@pytest.mark.parametrize("d, n", [(3, 1), (3, 2), (5, 4), (7, 8)])
def test_not_fano_for_two_or_more_points(d, n):
    assert is_fano(blowup_at_points(d, n)) == (n == 1)


@given(st.permutations(["a", "b", "c", "d", "e", "f"]))
def test_degree_invariant_under_relabeling(perm):
    B = blowup_at_points(4, 2)
    mapping = dict(zip(B.labels, perm + ["g"]))
    C = B.relabel(mapping)
    assert sorted(r.degree for r in C.relations) == sorted(r.degree for r in B.relations)
    assert validate(C) == []


def test_is_fano_monotone_in_degrees():
    # only the relation degrees matter: a presentation whose relations all
    # have positive degree is Fano, one with a nonpositive degree is not
    B = blowup_at_points(4, 3)
    assert [r for r in B.relations if r.degree <= 0]
    F = run_construction(4, 3).final
    assert all(r.degree > 0 for r in F.relations) and is_fano(F)


def test_equality_ignores_relation_order():
    B = blowup_at_points(4, 3)
    C = B.with_relations(reversed(B.relations))
    assert B == C and hash(B) == hash(C)
    assert B != blowup_at_points(4, 2)


def test_json_round_trip_and_format():
    B = blowup_at_points(3, 2)
    text = B.to_json()
    data = json.loads(text)
    assert data["dim"] == 3
    assert data["generators"]["y1"] == [-1, 0, 0]
    assert {"lhs": ["y1", "y2"], "rhs": [["x3", 1], ["x4", 1]]} in data["relations"]
    assert list(data) == sorted(data)
    assert FanPresentation.from_json(text) == B
    assert FanPresentation.from_json(text).to_json() == text


def test_json_bigint_strings():
    B = blowup_at_points(3, 2)
    data = to_bigint_dict(B.to_dict())
    assert data["bigint"] is True and data["generators"]["x4"] == ["-1", "-1", "-1"]
    assert FanPresentation.from_dict(data) == B
    huge = {"dim": "1", "bigint": True, "generators": {"a": [str(10**30)], "b": ["-1"]},
            "relations": []}
    assert FanPresentation.from_dict(huge).generators["a"] == (10**30,)


def test_maximal_cones_from_collections():
    P = projective_space(3)
    assert sorted(sorted(c) for c in P.maximal_cones) == [
        ["x1", "x2", "x3"], ["x1", "x2", "x4"], ["x1", "x3", "x4"], ["x2", "x3", "x4"]]


def test_relation_of_recovers_relations():
    B = blowup_at_points(5, 3)
    for r in B.relations:
        assert B.relation_of(r.lhs) == r
