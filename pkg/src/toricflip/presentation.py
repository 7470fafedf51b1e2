"""
Fans presented by generators and primitive relations.

A smooth complete fan is determined by its rays together with the list of
primitive relations ``u_1 + ... + u_l = a_1 v_1 + ... + a_m v_m``.  The
collection on the left is always a set (unit coefficients); the right-hand
side is stored as sorted ``(label, coefficient)`` pairs so that relations are
hashable and serialize canonically.
"""

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .lattice import CoordinateMap, LatticePoint, vector_sum


class PresentationError(ValueError):
    pass


_LABEL_RE = re.compile(r"(\d+)")


def label_key(label: str):
    """Natural sort key: ``x2 < x10 < y1``."""
    return tuple(int(p) if p.isdigit() else p for p in _LABEL_RE.split(label))


def sort_labels(labels: Iterable[str]) -> List[str]:
    return sorted(labels, key=label_key)


@dataclass(frozen=True)
class PrimitiveRelation:
    lhs: FrozenSet[str]
    rhs: Tuple[Tuple[str, int], ...] = ()

    def __init__(self, lhs: Iterable[str], rhs=()):
        lhs = frozenset(lhs)
        if isinstance(rhs, Mapping):
            rhs = rhs.items()
        rhs = tuple(sorted(((str(v), a) for v, a in rhs), key=lambda p: label_key(p[0])))
        if not lhs:
            raise PresentationError("empty primitive collection")
        keys = [v for v, _ in rhs]
        if len(set(keys)) != len(keys):
            raise PresentationError("repeated label on right-hand side")
        for v, a in rhs:
            if isinstance(a, bool) or not isinstance(a, int) or a <= 0:
                raise PresentationError(f"coefficient of {v} must be a positive int")
        if lhs & set(keys):
            raise PresentationError("lhs and rhs share a label")
        object.__setattr__(self, "lhs", lhs)
        object.__setattr__(self, "rhs", rhs)

    @property
    def rhs_map(self) -> Dict[str, int]:
        return dict(self.rhs)

    @property
    def rhs_labels(self) -> FrozenSet[str]:
        return frozenset(v for v, _ in self.rhs)

    @property
    def degree(self) -> int:
        return fano_degree(self)

    def reversed(self) -> "PrimitiveRelation":
        """The relation read right to left (only for unit coefficients)."""
        if any(a != 1 for _, a in self.rhs):
            raise PresentationError("only unit-coefficient relations can be reversed")
        return PrimitiveRelation(self.rhs_labels, {u: 1 for u in self.lhs})

    def to_dict(self) -> dict:
        return {"lhs": sort_labels(self.lhs), "rhs": [[v, a] for v, a in self.rhs]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "PrimitiveRelation":
        return cls(data["lhs"], [(v, _read_int(a)) for v, a in data["rhs"]])

    def __str__(self):
        left = " + ".join(sort_labels(self.lhs))
        right = " + ".join(v if a == 1 else f"{a}*{v}" for v, a in self.rhs) or "0"
        return f"{left} = {right}"


def fano_degree(relation: PrimitiveRelation) -> int:
    return len(relation.lhs) - sum(a for _, a in relation.rhs)


def _read_int(value) -> int:
    if isinstance(value, str):
        return int(value)
    if isinstance(value, bool) or not isinstance(value, int):
        raise PresentationError(f"expected an integer, got {value!r}")
    return value


@dataclass(frozen=True, eq=False)
class FanPresentation:
    """Generators of a smooth complete fan plus all of its primitive relations.

    Equality compares the generator map and the *set* of relations; the
    relation order is kept only for readable output.
    """
    dim: int
    generators: Mapping[str, LatticePoint]
    relations: Tuple[PrimitiveRelation, ...] = field(default=())

    def __post_init__(self):
        if isinstance(self.dim, bool) or not isinstance(self.dim, int) or self.dim < 1:
            raise PresentationError("dimension must be a positive int")
        gens = {str(k): LatticePoint(v) for k, v in self.generators.items()}
        for k, v in gens.items():
            if v.dim != self.dim:
                raise PresentationError(f"generator {k} has length {v.dim}, expected {self.dim}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relations", tuple(self.relations))

    def __eq__(self, other):
        if not isinstance(other, FanPresentation):
            return NotImplemented
        return (self.dim == other.dim and self.generators == other.generators
                and set(self.relations) == set(other.relations))

    def __hash__(self):
        return hash((self.dim, frozenset(self.generators.items()),
                     frozenset(self.relations)))

    @property
    def labels(self) -> List[str]:
        return sort_labels(self.generators)

    @property
    def picard_number(self) -> int:
        return len(self.generators) - self.dim

    @property
    def collections(self) -> List[FrozenSet[str]]:
        return [r.lhs for r in self.relations]

    def relation(self, lhs: Iterable[str]) -> PrimitiveRelation:
        """Look up a relation by its primitive collection."""
        lhs = frozenset(lhs)
        for r in self.relations:
            if r.lhs == lhs:
                return r
        raise KeyError(f"no primitive collection {{{','.join(sort_labels(lhs))}}}")

    def with_relations(self, relations: Iterable[PrimitiveRelation],
                       generators: Optional[Mapping[str, LatticePoint]] = None
                       ) -> "FanPresentation":
        return FanPresentation(self.dim, self.generators if generators is None else generators,
                               tuple(relations))

    def relabel(self, mapping: Mapping[str, str]) -> "FanPresentation":
        m = lambda v: mapping.get(v, v)  # noqa: E731
        rels = [PrimitiveRelation({m(u) for u in r.lhs}, [(m(v), a) for v, a in r.rhs])
                for r in self.relations]
        return FanPresentation(self.dim, {m(k): v for k, v in self.generators.items()}, rels)

    def sorted_relations(self) -> List[PrimitiveRelation]:
        """Relations in canonical order: by size of collection, then labels."""
        return sorted(self.relations, key=lambda r: (len(r.lhs), [label_key(v) for v in sort_labels(r.lhs)],
                                                     [(label_key(v), a) for v, a in r.rhs]))

    # -- cone structure implied by the collections -----------------------

    @cached_property
    def _bits(self) -> Dict[str, int]:
        return {v: 1 << i for i, v in enumerate(self.labels)}

    def mask(self, labels: Iterable[str]) -> int:
        bits = self._bits
        out = 0
        for v in labels:
            out |= bits[v]
        return out

    def unmask(self, mask: int) -> FrozenSet[str]:
        return frozenset(v for v, b in self._bits.items() if mask & b)

    @cached_property
    def _collection_masks(self) -> List[int]:
        return [self.mask(c) for c in self.collections]

    def is_face(self, labels: Iterable[str]) -> bool:
        """True iff ``labels`` contains no primitive collection."""
        m = self.mask(labels)
        return not any(m & c == c for c in self._collection_masks)

    @cached_property
    def maximal_cones(self) -> Tuple[FrozenSet[str], ...]:
        """All ``dim``-element label sets containing no primitive collection.

        Found by depth-first extension of faces, so only faces of the fan are
        ever visited.  Raises if some face has more than ``dim`` rays, which
        no simplicial fan in dimension ``dim`` can have.
        """
        labels = self.labels
        bits = [1 << i for i in range(len(labels))]
        colls = self._collection_masks
        found = []

        def extend(mask, size, start):
            if size == self.dim:
                found.append(mask)
            for j in range(start, len(labels)):
                m = mask | bits[j]
                if not any(m & c == c for c in colls):
                    if size == self.dim:
                        raise PresentationError(
                            "presentation has a face with more than dim rays")
                    extend(m, size + 1, j + 1)

        extend(0, 0, 0)
        return tuple(self.unmask(m) for m in found)

    @cached_property
    def _coordinate_maps(self) -> Dict[FrozenSet[str], Tuple[List[str], CoordinateMap]]:
        out = {}
        for cone in self.maximal_cones:
            order = sort_labels(cone)
            out[cone] = (order, CoordinateMap([self.generators[v] for v in order]))
        return out

    def locate(self, vector) -> Tuple[FrozenSet[str], Dict[str, object]]:
        """The unique cone containing ``vector`` in its relative interior,
        with the coefficients expressing it there."""
        hits = {}
        for order, cmap in self._coordinate_maps.values():
            coords = cmap.coords(vector)
            if all(c >= 0 for c in coords):
                support = {v: c for v, c in zip(order, coords) if c != 0}
                hits[frozenset(support)] = support
        if len(hits) != 1:
            raise PresentationError(
                f"vector {list(vector)} lies in the relative interior of "
                f"{len(hits)} cones; not a complete fan")
        (cone, coeffs), = hits.items()
        return cone, coeffs

    def relation_of(self, collection: Iterable[str]) -> PrimitiveRelation:
        """Compute the primitive relation of ``collection`` from this fan's
        cone structure (sum the rays, find the cone containing the sum)."""
        collection = frozenset(collection)
        total = vector_sum((self.generators[u] for u in collection), self.dim)
        _, coeffs = self.locate(total)
        rhs = []
        for v, c in coeffs.items():
            if c != int(c):
                raise PresentationError(
                    f"non-integral coefficient {c} for {v}; the cone is not smooth")
            rhs.append((v, int(c)))
        return PrimitiveRelation(collection, rhs)

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "generators": {k: list(self.generators[k]) for k in self.labels},
            "relations": [r.to_dict() for r in self.sorted_relations()],
        }

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    @classmethod
    def from_dict(cls, data: Mapping) -> "FanPresentation":
        gens = {k: [_read_int(a) for a in v] for k, v in data["generators"].items()}
        rels = [PrimitiveRelation.from_dict(r) for r in data["relations"]]
        return cls(_read_int(data["dim"]), gens, tuple(rels))

    @classmethod
    def from_json(cls, text: str) -> "FanPresentation":
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        return (f"FanPresentation(dim={self.dim}, {len(self.generators)} generators, "
                f"{len(self.relations)} relations)")

    def __str__(self):
        return "\n".join(str(r) for r in self.sorted_relations())


def to_bigint_dict(data: dict) -> dict:
    """Variant of ``to_dict`` output with every integer written as a string,
    flagged by ``"bigint": true``."""
    out = {
        "bigint": True,
        "dim": str(data["dim"]),
        "generators": {k: [str(a) for a in v] for k, v in data["generators"].items()},
        "relations": [{"lhs": r["lhs"], "rhs": [[v, str(a)] for v, a in r["rhs"]]}
                      for r in data["relations"]],
    }
    return out


def validate(F: FanPresentation) -> List[str]:
    """List every violated invariant of the presentation; empty means valid."""
    out = []
    known = set(F.generators)
    seen = set()
    for r in F.relations:
        name = f"{{{','.join(sort_labels(r.lhs))}}}"
        if r.lhs in seen:
            out.append(f"{name}: duplicate primitive collection")
        seen.add(r.lhs)
        missing = (r.lhs | r.rhs_labels) - known
        if missing:
            out.append(f"{name}: unknown labels {sort_labels(missing)}")
            continue
        total = vector_sum((F.generators[u] for u in r.lhs), F.dim)
        target = vector_sum((a * F.generators[v] for v, a in r.rhs), F.dim)
        if total != target:
            out.append(f"{name}: relation unbalanced")
        for other in F.relations:
            if other.lhs < r.lhs:
                out.append(f"{name}: antichain violated, contains "
                           f"{{{','.join(sort_labels(other.lhs))}}}")
            if other.lhs <= r.rhs_labels:
                out.append(f"{name}: right-hand side is not a cone, contains "
                           f"{{{','.join(sort_labels(other.lhs))}}}")
    return out


def is_fano(F: FanPresentation) -> bool:
    problems = validate(F)
    if problems:
        raise PresentationError("invalid: " + "; ".join(problems))
    return all(fano_degree(r) > 0 for r in F.relations)
