"""
Rewrite rules on primitive relations: blow-up along a cone, blow-down along
an extremal divisorial relation, and the wall crossing (anti-flip, flop or
flip) along an extremal relation with unit coefficients.

Each rule produces the new set of primitive collections combinatorially from
the old one.  The relations of collections whose old relation is no longer
valid are then read off from the cone structure of the output fan.
"""

from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Set

from .lattice import vector_sum
from .presentation import (FanPresentation, PresentationError, PrimitiveRelation,
                           sort_labels)


class TransformError(ValueError):
    pass


@dataclass(frozen=True)
class FlipSpec:
    """The wall to cross: its relation ``u_1+...+u_l = v_1+...+v_m``.
    After the crossing ``{v_1..v_m}`` is a primitive collection."""
    relation: PrimitiveRelation

    def __post_init__(self):
        if any(a != 1 for _, a in self.relation.rhs):
            raise TransformError("wall relation must have unit coefficients")
        if not self.relation.rhs:
            raise TransformError("wall relation has empty right-hand side")


def _fmt(labels) -> str:
    return "{" + ",".join(sort_labels(labels)) + "}"


def _minimal(sets: Iterable[FrozenSet[str]]) -> Set[FrozenSet[str]]:
    sets = set(sets)
    return {s for s in sets if not any(t < s for t in sets)}


def _assemble(source: FanPresentation, generators, collections: List[FrozenSet[str]],
              keep: dict) -> FanPresentation:
    """Build the output presentation.  ``keep`` maps a collection to its old
    relation, reused when its right-hand side is still a cone of the output."""
    skeleton = FanPresentation(source.dim, generators,
                               [PrimitiveRelation(c) for c in collections])
    relations = []
    for c in collections:
        old = keep.get(c)
        if old is not None and old.rhs_labels <= set(generators) and skeleton.is_face(old.rhs_labels):
            relations.append(old)
        else:
            relations.append(skeleton.relation_of(c))
    return FanPresentation(source.dim, generators, relations)


def blow_up(F: FanPresentation, cone: Iterable[str], new_label: str) -> FanPresentation:
    """Star subdivision of ``F`` at the cone spanned by ``cone``; the new ray
    is the sum of the cone's rays and is called ``new_label``."""
    cone = frozenset(cone)
    if len(cone) < 2:
        raise TransformError("center must have codimension ≥ 2")
    if new_label in F.generators:
        raise TransformError(f"duplicate label {new_label}")
    if not cone <= set(F.generators) or not F.is_face(cone):
        raise TransformError(f"not a face: {_fmt(cone)}")

    v = vector_sum((F.generators[u] for u in cone), F.dim)
    generators = dict(F.generators)
    generators[new_label] = v

    collections = [cone]
    keep = {cone: PrimitiveRelation(cone, {new_label: 1})}
    for r in F.relations:
        if not cone <= r.lhs:
            collections.append(r.lhs)
            keep[r.lhs] = r
    meeting = [P - cone for P in F.collections if P & cone]
    for diff in sorted(_minimal(meeting), key=sort_labels):
        new = diff | {new_label}
        if new not in keep:
            collections.append(new)
            keep[new] = None
    return _assemble(F, generators, collections, keep)


def blow_down(F: FanPresentation, relation: PrimitiveRelation,
              check_extremal: bool = True) -> FanPresentation:
    """Contract the divisor of ``relation = u_1+...+u_l = v``."""
    if relation not in F.relations:
        raise TransformError(f"relation {relation} is not a relation of the fan")
    if len(relation.rhs) != 1 or relation.rhs[0][1] != 1:
        raise TransformError("not a divisorial wall")
    if check_extremal:
        from .mori import is_extremal
        if not is_extremal(F, relation):
            raise TransformError("not extremal")
    U = relation.lhs
    (v, _), = relation.rhs
    source = set(F.collections)

    generators = {k: p for k, p in F.generators.items() if k != v}
    collections = []
    keep = {}
    for r in F.relations:
        if r.lhs != U and v not in r.lhs:
            collections.append(r.lhs)
            keep[r.lhs] = r
    for P in F.collections:
        if v not in P:
            continue
        base = P - {v}
        if any(base | S in source for S in _proper_subsets(U)):
            continue
        new = base | U
        if new not in keep:
            collections.append(new)
            keep[new] = None
    return _assemble(F, generators, collections, keep)


def _proper_subsets(U: FrozenSet[str]):
    items = sort_labels(U)
    for bits in range(2 ** len(items) - 1):
        yield frozenset(u for i, u in enumerate(items) if bits >> i & 1)


def star_flip(F: FanPresentation, spec, check_extremal: bool = True) -> FanPresentation:
    """Cross the wall of an extremal relation ``u_1+...+u_l = v_1+...+v_m``.

    The generators are unchanged; afterwards ``v_1+...+v_m = u_1+...+u_l``
    is a primitive relation.  Works for l < m, l = m and l > m alike.
    """
    if isinstance(spec, PrimitiveRelation):
        spec = FlipSpec(spec)
    relation = spec.relation
    if relation not in F.relations:
        raise TransformError(f"relation {relation} is not a relation of the fan")
    if check_extremal:
        from .mori import is_extremal
        if not is_extremal(F, relation):
            raise TransformError("not extremal")
    U = relation.lhs
    V = relation.rhs_labels
    source = F.collections

    reversed_rel = relation.reversed()
    collections = [V]
    keep = {V: reversed_rel}
    for r in F.relations:
        if not V <= r.lhs and r.lhs != U:
            collections.append(r.lhs)
            keep[r.lhs] = r

    def contains_collection(labels):
        return any(P <= labels for P in source)

    minimal = _minimal(P - V for P in source if P & V)
    candidates = set()
    for diff in minimal:
        if any(contains_collection(diff | S) for S in _proper_subsets(U)):
            continue
        candidates.add(diff | U)
    for new in sorted(candidates, key=sort_labels):
        if new not in keep:
            collections.append(new)
            keep[new] = None
    return _assemble(F, F.generators, collections, keep)


def flip_kind(relation: PrimitiveRelation) -> str:
    """'antiflip' if l < m, 'flop' if l = m, 'flip' if l > m."""
    l, m = len(relation.lhs), len(relation.rhs)
    return "antiflip" if l < m else "flop" if l == m else "flip"


__all__ = ["FlipSpec", "TransformError", "blow_up", "blow_down", "star_flip",
           "flip_kind", "PresentationError"]
