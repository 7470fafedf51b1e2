import json
from itertools import combinations, product
from pathlib import Path

import pytest

from toricflip.constructions import blowup_at_points, projective_space, run_construction
from toricflip.oracle import (ConeComplex, OracleError, check_projective, check_smooth_complete,
                              projectivity_certificate, recompute, reconstruct, verify,
                              wall_matrix)
from toricflip.presentation import FanPresentation, PrimitiveRelation as R
from toricflip.transforms import star_flip

FIXTURES = Path(__file__).parent / "fixtures"


def cones(C):
    return {frozenset(c) for c in C.max_cones}


@pytest.mark.parametrize("d", range(1, 6))
def test_reconstruct_projective_space(d):
    P = projective_space(d)
    C = reconstruct(P)
    assert cones(C) == {frozenset(c) for c in combinations(P.labels, d)}


def test_reconstruct_b42_has_11_cones():
    assert len(reconstruct(blowup_at_points(4, 2)).max_cones) == 5 + 2 * 3


def test_reconstruct_bundle_endpoint_by_product():
    C = reconstruct(run_construction(4, 2).final)
    expected = {frozenset((a, b) + base)
                for a, b in product(["x1", "y1"], ["x2", "y2"])
                for base in combinations(["x3", "x4", "x5"], 2)}
    assert cones(C) == expected and len(expected) == 12


def test_reconstruct_unrealizable():
    # balanced relations, but f repeats a and {a, f} is left collection-free
    gens = {"a": [1, 0], "b": [-1, 0], "c": [0, 1], "e": [0, -1], "f": [1, 0]}
    F = FanPresentation(2, gens, [R({"a", "b"}), R({"c", "e"}), R({"f", "b"})])
    with pytest.raises(OracleError, match="not realizable"):
        reconstruct(F)


def test_smooth_complete_examples():
    assert check_smooth_complete(reconstruct(projective_space(3))).ok
    assert check_smooth_complete(reconstruct(blowup_at_points(6, 3))).ok


def test_deleting_a_cone_breaks_completeness():
    C = reconstruct(blowup_at_points(4, 2))
    victim = sorted(C.max_cones, key=sorted)[0]
    report = check_smooth_complete(C.without(victim))
    assert report.smooth and not report.complete
    assert report.bad_facets and all(k == 1 for _, k in report.bad_facets)
    assert len(report.bad_facets) == 4


def test_non_unimodular_cone_reported():
    gens = {"a": [1, 0], "b": [1, 2], "c": [-1, -1]}
    C = ConeComplex(2, gens, [{"a", "b"}, {"b", "c"}, {"a", "c"}])
    report = check_smooth_complete(C)
    assert not report.smooth and report.non_unimodular == [("a", "b")]


def test_overlapping_cones_reported():
    # the four quadrants plus a subdivision of the first one by e
    gens = {"a": [1, 0], "b": [0, 1], "c": [-1, 0], "d": [0, -1], "e": [1, 1]}
    C = ConeComplex(2, gens, [{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"},
                              {"a", "e"}, {"e", "b"}])
    report = check_smooth_complete(C)
    assert not report.complete
    assert report.bad_facets


def test_empty_complex():
    report = check_smooth_complete(ConeComplex(2, {"a": [1, 0]}, []))
    assert report.empty and not report.complete


def test_recompute_projective_space():
    for d in range(1, 6):
        F = recompute(reconstruct(projective_space(d)))
        assert F.relations == (R(projective_space(d).labels),)


@pytest.mark.parametrize("d, n", [(3, 2), (4, 4), (5, 3), (6, 7)])
def test_recompute_blowup(d, n):
    B = blowup_at_points(d, n)
    F = recompute(reconstruct(B))
    assert F == B and len(F.relations) == n * (n + 3) // 2


def test_recompute_after_antiflip():
    B = blowup_at_points(4, 2)
    F = recompute(reconstruct(star_flip(B, B.relation({"y1", "y2"}))))
    assert set(F.relations) == {R({"x1", "y1"}), R({"x2", "y2"}),
                                R({"x3", "x4", "x5"}, {"y1": 1, "y2": 1})}


def test_recompute_rejects_overlapping_fan():
    # two of the three cones of P^2
    gens = {"a": [1, 0], "b": [0, 1], "c": [-1, -1]}
    C = ConeComplex(2, gens, [{"a", "b"}, {"b", "c"}])
    # {a,c} is a minimal non-face; a + c = (0,-1) lies in no cone
    with pytest.raises(OracleError, match="not a fan"):
        recompute(C)


def test_projective_examples():
    assert check_projective(reconstruct(projective_space(4)))
    assert check_projective(reconstruct(blowup_at_points(6, 2)))
    for F in run_construction(4, 3).presentations:
        assert check_projective(reconstruct(F))


def _certificate_holds(C):
    cert = projectivity_certificate(C)
    labels, rows = wall_matrix(C)
    if cert.support is not None:
        psi = [cert.support[v] for v in labels]
        return all(sum(a * p for a, p in zip(row, psi)) > 0 for row in rows)
    y = cert.obstruction
    assert all(w >= 0 for w in y) and any(y)
    assert all(sum(w * row[k] for w, row in zip(y, rows)) == 0 for k in range(len(labels)))
    return False


def test_support_function_is_strictly_convex():
    assert _certificate_holds(reconstruct(blowup_at_points(5, 4)))


def _fixture():
    return FanPresentation.from_json((FIXTURES / "nonprojective_4fold.json").read_text())


def test_nonprojective_fixture():
    F = _fixture()
    C = reconstruct(F)
    assert check_smooth_complete(C).ok
    assert recompute(C) == F
    assert not check_projective(C)
    assert not _certificate_holds(C)
    report = verify(F)
    assert report.projective is False and not report.ok


def test_wall_rows_pair_with_linear_functions_to_zero():
    # a global linear function is convex but not strictly: every row vanishes on it
    C = reconstruct(blowup_at_points(4, 3))
    labels, rows = wall_matrix(C)
    for k in range(4):
        psi = [C.generators[v][k] for v in labels]
        assert all(sum(a * p for a, p in zip(row, psi)) == 0 for row in rows)


def test_cone_complex_json():
    C = reconstruct(blowup_at_points(3, 2))
    data = json.loads(C.to_json())
    assert set(data) == {"dim", "generators", "max_cones"}
    assert all(c == sorted(c, key=lambda v: (v[0], int(v[1:]))) for c in data["max_cones"])
    assert ConeComplex.from_dict(data) == C
    assert ConeComplex.from_dict(data).to_json() == C.to_json()


def test_verify_without_projectivity():
    report = verify(_fixture(), projective=False)
    assert report.ok and report.projective is None
