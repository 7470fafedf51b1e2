import pytest

from toricflip.constructions import (blowup_at_points, projective_space, run_construction,
                                     stage_relations)
from toricflip.lattice import Constraint, lp_feasible
from toricflip.mori import MoriError, classify, cycle_class, decompose, is_extremal
from toricflip.presentation import PrimitiveRelation as R
from toricflip.transforms import star_flip


def exposed(F, rel):
    """Dual test: some linear form on the cycle space vanishes on the cycle of
    ``rel`` and is strictly positive on every other cycle not on its ray."""
    labels = F.labels
    target = cycle_class(F, rel).vector(labels)
    cons = [Constraint({f"h_{v}": t for v, t in zip(labels, target) if t}, "==", 0)]
    for S in F.relations:
        vec = cycle_class(F, S).vector(labels)
        if S == rel or _same_ray(vec, target):
            continue
        cons.append(Constraint({f"h_{v}": t for v, t in zip(labels, vec) if t}, ">", 0))
    return lp_feasible(cons) is not None


def _same_ray(a, b):
    k = next(i for i, x in enumerate(b) if x)
    return a[k] * b[k] > 0 and all(x * b[k] == y * a[k] for x, y in zip(a, b))


def test_cycle_class_examples():
    P = projective_space(3)
    assert cycle_class(P, P.relations[0]).vector(P.labels) == [1, 1, 1, 1]
    B = blowup_at_points(4, 2)
    assert B.labels == ["x1", "x2", "x3", "x4", "x5", "y1", "y2"]
    assert cycle_class(B, B.relation({"y1", "y2"})).vector(B.labels) == [0, 0, -1, -1, -1, 1, 1]
    assert cycle_class(B, B.relation({"x1", "y1"})).vector(B.labels) == [1, 0, 0, 0, 0, 1, 0]


def test_cycle_class_foreign_relation():
    with pytest.raises(MoriError):
        cycle_class(projective_space(3), R({"x1", "x2"}))


@pytest.mark.parametrize("d, n", [(3, 4), (5, 2), (6, 5)])
def test_cycles_are_relations(d, n):
    for F in (blowup_at_points(d, n), run_construction(4, 4).final):
        for rel in F.relations:
            assert cycle_class(F, rel).is_relation(F)


def test_extremal_examples():
    assert is_extremal(projective_space(5), projective_space(5).relations[0])
    B = blowup_at_points(4, 2)
    assert is_extremal(B, B.relation({"y1", "y2"}))


def test_x_plus_y_not_extremal_at_small_endpoint():
    F = run_construction(4, 3).final
    labels = F.labels
    for i in (1, 2, 3):
        rel = F.relation({f"x{i}", f"y{i}"})
        assert not is_extremal(F, rel)
        weights = decompose(F, rel)
        assert weights and all(w > 0 for w in weights.values())
        assert all(S.lhs != rel.lhs for S in weights)
        assert _weighted_sum(F, weights) == cycle_class(F, rel).vector(labels)


def _weighted_sum(F, weights):
    total = [0] * len(F.labels)
    for S, w in weights.items():
        for k, c in enumerate(cycle_class(F, S).vector(F.labels)):
            total[k] += w * c
    return total


@pytest.mark.parametrize("d", range(3, 7))
def test_blowup_families_extremal(d):
    for n in range(2, d + 2):
        B = blowup_at_points(d, n)
        fams = stage_relations(d, n, 1)
        assert all(is_extremal(B, rel) for rel in fams["II"] + fams["III"]), (d, n)
        # x_i + y_i = 0 splits as (x_i + ... = y_j) + (y_i + y_j = ...) for any j != i
        for rel in fams["I"]:
            weights = decompose(B, rel)
            assert weights is not None
            assert _weighted_sum(B, weights) == cycle_class(B, rel).vector(B.labels)


@pytest.mark.parametrize("F", [
    blowup_at_points(4, 3),
    blowup_at_points(5, 4),
    run_construction(4, 3).final,
    run_construction(4, 4).final,
    run_construction(6, 2).final,
], ids=["B43", "B54", "end43", "end44", "end62"])
def test_extremality_matches_dual_oracle(F):
    for rel in F.relations:
        assert is_extremal(F, rel) == exposed(F, rel), str(rel)


def test_extremality_matches_dual_oracle_along_run():
    for F in run_construction(4, 4).presentations:
        for rel in F.relations:
            assert is_extremal(F, rel) == exposed(F, rel)


def test_classify_examples():
    P = projective_space(4)
    assert classify(P, P.relations[0]) == ("fiber", "n/a")
    B = blowup_at_points(4, 2)
    assert classify(B, B.relation({"x2", "x3", "x4", "x5"})) == ("divisorial", "n/a")
    assert classify(B, B.relation({"y1", "y2"})) == ("small", "antiflip")
    B3 = blowup_at_points(3, 2)
    assert classify(B3, B3.relation({"y1", "y2"})) == ("small", "flop")


def test_classify_flip_direction():
    B = blowup_at_points(4, 2)
    F = star_flip(B, B.relation({"y1", "y2"}))
    assert classify(F, F.relation({"x3", "x4", "x5"})) == ("small", "flip")


def test_classify_rejects_non_extremal():
    F = run_construction(4, 3).final
    with pytest.raises(MoriError, match="not extremal"):
        classify(F, F.relation({"x1", "y1"}))


@pytest.mark.parametrize("d, n", [(4, 3), (4, 4), (4, 5), (6, 4)])
def test_small_endpoint_extremal_relations_are_small(d, n):
    F = run_construction(d, n).final
    ext = [rel for rel in F.relations if is_extremal(F, rel)]
    assert ext
    assert all(classify(F, rel)[0] == "small" for rel in ext)
