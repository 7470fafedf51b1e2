"""
Brute-force geometry used to check the rewrite rules.

``reconstruct`` turns a presentation into an explicit list of maximal cones
by trying every ``d``-subset of rays.  ``check_smooth_complete`` and
``check_projective`` certify the resulting complex with exact arithmetic,
and ``recompute`` derives the primitive relations back from the cones alone,
without looking at the presentation they came from.
"""

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, List, Mapping, NamedTuple, Optional, Tuple

from .lattice import (Constraint, CoordinateMap, LatticePoint, det, in_relative_interior,
                      lp_feasible, phase_one, vector_sum)
from .presentation import (FanPresentation, PrimitiveRelation, sort_labels, validate,
                           PresentationError)


class OracleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ConeComplex:
    dim: int
    generators: Mapping[str, LatticePoint]
    max_cones: FrozenSet[FrozenSet[str]]

    def __post_init__(self):
        object.__setattr__(self, "generators",
                           {k: LatticePoint(v) for k, v in self.generators.items()})
        object.__setattr__(self, "max_cones", frozenset(frozenset(c) for c in self.max_cones))

    def __eq__(self, other):
        if not isinstance(other, ConeComplex):
            return NotImplemented
        return (self.dim, self.generators, self.max_cones) == \
            (other.dim, other.generators, other.max_cones)

    @property
    def labels(self) -> List[str]:
        return sort_labels(self.generators)

    def sorted_cones(self) -> List[List[str]]:
        return sorted((sort_labels(c) for c in self.max_cones),
                      key=lambda c: [self.labels.index(v) for v in c])

    def without(self, cone) -> "ConeComplex":
        return ConeComplex(self.dim, self.generators, self.max_cones - {frozenset(cone)})

    def to_dict(self) -> dict:
        return {"dim": self.dim,
                "generators": {k: list(self.generators[k]) for k in self.labels},
                "max_cones": self.sorted_cones()}

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    @classmethod
    def from_dict(cls, data) -> "ConeComplex":
        return cls(int(data["dim"]), {k: [int(a) for a in v] for k, v in data["generators"].items()},
                   [frozenset(c) for c in data["max_cones"]])


def reconstruct(F: FanPresentation) -> ConeComplex:
    """Every ``dim``-subset of rays that contains no primitive collection is a
    maximal cone; such a subset with dependent rays means the relations do not
    describe a fan on these rays."""
    problems = validate(F)
    if problems:
        raise OracleError("invalid presentation: " + "; ".join(problems))
    collections = [set(c) for c in F.collections]
    cones = []
    for subset in combinations(F.labels, F.dim):
        s = set(subset)
        if any(c <= s for c in collections):
            continue
        if det([F.generators[v] for v in subset]) == 0:
            raise OracleError(f"presentation not realizable: {{{','.join(subset)}}} "
                              "contains no primitive collection but its rays are dependent")
        cones.append(frozenset(subset))
    return ConeComplex(F.dim, F.generators, cones)


@dataclass
class SmoothnessReport:
    non_unimodular: List[Tuple[str, ...]] = field(default_factory=list)
    bad_facets: List[Tuple[Tuple[str, ...], int]] = field(default_factory=list)
    improper_pairs: List[Tuple[Tuple[str, ...], Tuple[str, ...]]] = field(default_factory=list)
    empty: bool = False

    @property
    def smooth(self) -> bool:
        return not self.non_unimodular

    @property
    def complete(self) -> bool:
        return not (self.empty or self.non_unimodular or self.bad_facets or self.improper_pairs)

    @property
    def ok(self) -> bool:
        return self.smooth and self.complete

    def to_dict(self) -> dict:
        return {"smooth": self.smooth, "complete": self.complete,
                "non_unimodular": [list(c) for c in self.non_unimodular],
                "bad_facets": [{"facet": list(f), "neighbors": k} for f, k in self.bad_facets],
                "improper_pairs": [[list(a), list(b)] for a, b in self.improper_pairs]}


def _separated(C: ConeComplex, sigma, sigma2, cmaps) -> bool:
    """Is there a linear form vanishing on the common face, positive on the
    rest of ``sigma`` and negative on the rest of ``sigma2``?"""
    common = sigma & sigma2
    order, cmap = cmaps[sigma]
    free = [v for v in order if v not in common]
    rows = []
    for g in sort_labels(sigma2 - common):
        coords = dict(zip(order, cmap.coords(C.generators[g])))
        rows.append([coords[v] for v in free])
    # a linear form is fixed by its values on sigma's rays: 0 on the common
    # face, p_k > 0 on the others, so the form at g is sum(row_k * p_k)
    if all(sum(r) < 0 for r in rows):
        return True
    constraints = [Constraint({v: 1}, ">", 0) for v in free]
    constraints += [Constraint({v: a for v, a in zip(free, r) if a}, "<", 0) for r in rows]
    return lp_feasible(constraints) is not None


def check_smooth_complete(C: ConeComplex) -> SmoothnessReport:
    report = SmoothnessReport()
    cones = sorted(C.max_cones, key=sort_labels)
    if not cones:
        report.empty = True
        return report
    cmaps = {}
    for cone in cones:
        order = sort_labels(cone)
        if len(order) != C.dim:
            report.non_unimodular.append(tuple(order))
            continue
        d = det([C.generators[v] for v in order])
        if abs(d) != 1:
            report.non_unimodular.append(tuple(order))
            continue
        cmaps[cone] = (order, CoordinateMap([C.generators[v] for v in order]))
    if report.non_unimodular:
        return report

    facets = Counter()
    for cone in cones:
        for v in cone:
            facets[cone - {v}] += 1
    report.bad_facets = sorted(((tuple(sort_labels(f)), k) for f, k in facets.items() if k != 2),
                               key=lambda p: p[0])

    for i, a in enumerate(cones):
        for b in cones[i + 1:]:
            if not _separated(C, a, b, cmaps):
                report.improper_pairs.append((tuple(sort_labels(a)), tuple(sort_labels(b))))
    return report


def recompute(C: ConeComplex) -> FanPresentation:
    """Primitive relations of a smooth complete complex, from its cones only."""
    labels = C.labels
    bit = {v: 1 << i for i, v in enumerate(labels)}
    faces = set()
    for cone in C.max_cones:
        items = [bit[v] for v in cone]
        for k in range(len(items) + 1):
            for sub in combinations(items, k):
                faces.add(sum(sub))

    collections = []
    level = {0}
    for size in range(1, len(labels) + 1):
        if not level:
            break
        nxt = set()
        for face in level:
            top = face.bit_length()
            for j in range(top, len(labels)):
                cand = face | (1 << j)
                # every facet of the candidate must be a face
                if all((cand & ~(1 << i)) in faces for i in range(len(labels)) if cand >> i & 1):
                    if cand in faces:
                        nxt.add(cand)
                    else:
                        collections.append(cand)
        level = nxt

    cone_list = sorted(C.max_cones, key=sort_labels)
    cmaps = [(sort_labels(c), CoordinateMap([C.generators[v] for v in sort_labels(c)]))
             for c in cone_list]
    relations = []
    for mask in collections:
        P = frozenset(v for v in labels if mask & bit[v])
        total = vector_sum((C.generators[u] for u in P), C.dim)
        supports = {}
        for order, cmap in cmaps:
            coords = cmap.coords(total)
            if all(c >= 0 for c in coords):
                supports[frozenset(v for v, c in zip(order, coords) if c)] = \
                    {v: c for v, c in zip(order, coords) if c}
        if len(supports) != 1:
            raise OracleError(f"not a fan: sum of {{{','.join(sort_labels(P))}}} lies in "
                              f"the relative interior of {len(supports)} cones")
        (support, coeffs), = supports.items()
        order = sort_labels(support)
        if not in_relative_interior([C.generators[v] for v in order], total):
            raise OracleError("not a fan: relative interior check failed")
        if any(c != int(c) for c in coeffs.values()):
            raise OracleError("not a fan: non-integral relation coefficients")
        relations.append(PrimitiveRelation(P, {v: int(c) for v, c in coeffs.items()}))
    return FanPresentation(C.dim, C.generators, relations)


def wall_matrix(C: ConeComplex) -> Tuple[List[str], List[List[object]]]:
    """One row per interior wall ``tau = sigma & sigma2``: the coefficients
    of ``psi(b) - l_sigma(b)`` in the values of a piecewise linear function
    ``psi`` on the rays, where ``b`` is the ray of ``sigma2`` off the wall and
    ``l_sigma`` is the linear function agreeing with ``psi`` on ``sigma``.
    ``psi`` is strictly convex iff every row pairs positively with it."""
    labels = C.labels
    index = {v: i for i, v in enumerate(labels)}
    by_facet = {}
    for cone in C.max_cones:
        for v in cone:
            by_facet.setdefault(cone - {v}, []).append(cone)
    rows = []
    for facet in sorted(by_facet, key=sort_labels):
        pair = by_facet[facet]
        if len(pair) != 2:
            continue
        sigma, sigma2 = sorted(pair, key=sort_labels)
        order = sort_labels(sigma)
        (b,) = sigma2 - facet
        coords = CoordinateMap([C.generators[v] for v in order]).coords(C.generators[b])
        row = [0] * len(labels)
        row[index[b]] += 1
        for v, c in zip(order, coords):
            row[index[v]] -= c
        rows.append(row)
    return labels, rows


class ProjectivityCertificate(NamedTuple):
    """Exactly one side is set: ``support`` maps rays to values of a strictly
    convex piecewise linear function; ``obstruction`` gives nonnegative wall
    weights, not all zero, whose weighted sum of wall rows vanishes."""
    labels: List[str]
    rows: List[List[object]]
    support: Optional[Dict[str, object]]
    obstruction: Optional[List[object]]


def projectivity_certificate(C: ConeComplex) -> ProjectivityCertificate:
    """Decide whether a strictly convex support function exists.

    By Gordan's alternative, either some psi pairs positively with every wall
    row, or a nonnegative nonzero combination of the rows vanishes.  The
    second system is solved exactly; if it is infeasible, its Farkas
    certificate is such a psi.  Both outcomes are checked before returning.
    """
    labels, rows = wall_matrix(C)
    if not rows:
        return ProjectivityCertificate(labels, rows, None, [])
    # y >= 0, W^T y = 0, sum(y) = 1
    A = [[row[k] for row in rows] for k in range(len(labels))]
    A.append([1] * len(rows))
    b = [0] * len(labels) + [1]
    result = phase_one(A, b)
    if result.solution is not None:
        y = result.solution
        if any(sum(yi * row[k] for yi, row in zip(y, rows)) for k in range(len(labels))):
            raise RuntimeError("obstruction certificate does not vanish")
        return ProjectivityCertificate(labels, rows, None, y)
    y = result.farkas
    psi = {v: -y[k] for k, v in enumerate(labels)}
    for row in rows:
        if sum(a * psi[v] for a, v in zip(row, labels)) <= 0:
            raise RuntimeError("Farkas certificate does not give a convex function")
    return ProjectivityCertificate(labels, rows, psi, None)


def support_function(C: ConeComplex) -> Optional[Dict[str, object]]:
    """Values on the rays of a strictly convex piecewise linear function, or
    None when none exists."""
    return projectivity_certificate(C).support


def check_projective(C: ConeComplex) -> bool:
    return support_function(C) is not None


@dataclass
class VerifyReport:
    violations: List[str]
    smooth_complete: Optional[SmoothnessReport] = None
    round_trip: Optional[bool] = None
    projective: Optional[bool] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return (not self.violations and self.error is None and self.smooth_complete is not None
                and self.smooth_complete.ok and bool(self.round_trip)
                and self.projective is not False)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": self.violations, "error": self.error,
                "smooth_complete": self.smooth_complete.to_dict() if self.smooth_complete else None,
                "round_trip": self.round_trip, "projective": self.projective}


def verify(F: FanPresentation, projective: bool = True) -> VerifyReport:
    """Run every oracle check on ``F`` in order, stopping at the first
    failure. Projectivity is skipped when ``projective`` is false."""
    report = VerifyReport(violations=validate(F))
    if report.violations:
        return report
    try:
        C = reconstruct(F)
    except OracleError as exc:
        report.error = str(exc)
        return report
    report.smooth_complete = check_smooth_complete(C)
    if not report.smooth_complete.ok:
        return report
    try:
        report.round_trip = recompute(C) == F
    except OracleError as exc:
        report.error = str(exc)
        return report
    if projective:
        report.projective = check_projective(C)
    return report


__all__ = ["ConeComplex", "OracleError", "SmoothnessReport", "VerifyReport",
           "reconstruct", "check_smooth_complete", "recompute", "check_projective",
           "support_function", "projectivity_certificate", "ProjectivityCertificate", "wall_matrix", "verify", "PresentationError"]
