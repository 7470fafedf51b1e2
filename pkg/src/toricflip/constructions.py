"""
Projective space, its blow-ups at torus-invariant points, and the sequence
of anti-flips that turns ``B^d_n`` into a smooth Fano variety whenever one
exists in its codimension-one isomorphism class.

Labels are ``x1..x{d+1}`` for the rays of P^d and ``y1..yn`` for the
exceptional rays, with ``y_i = -x_i``.
"""

import json
import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence

from .lattice import LatticePoint
from .mori import classify, is_extremal
from .presentation import FanPresentation, PrimitiveRelation, fano_degree, is_fano
from .transforms import FlipSpec, blow_up, star_flip


class ConstructionError(RuntimeError):
    pass


def xs(d: int) -> List[str]:
    return [f"x{i}" for i in range(1, d + 2)]


def ys(n: int) -> List[str]:
    return [f"y{i}" for i in range(1, n + 1)]


def projective_space(d: int) -> FanPresentation:
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ValueError(f"projective space needs d >= 1, got {d!r}")
    gens = {f"x{i + 1}": LatticePoint.basis(d, i) for i in range(d)}
    gens[f"x{d + 1}"] = LatticePoint([-1] * d)
    return FanPresentation(d, gens, [PrimitiveRelation(gens)])


def _complement_x(d: int, indices) -> List[str]:
    skip = set(indices)
    return [f"x{i}" for i in range(1, d + 2) if i not in skip]


def stage_relations(d: int, n: int, r: int) -> Dict[str, List[PrimitiveRelation]]:
    """The three relation families of the stage-``r`` fan Sigma^d_{n,r}.

    I:   x_i + y_i = 0
    II:  sum of the x's outside I = sum of y_i for i in I,  |I| = r
    III: sum of y_j for j in J = sum of the x's outside J,  |J| = r + 1
    """
    idx = range(1, n + 1)
    fam1 = [PrimitiveRelation({f"x{i}", f"y{i}"}) for i in idx]
    fam2 = [PrimitiveRelation(_complement_x(d, I), {f"y{i}": 1 for i in I})
            for I in combinations(idx, r)]
    fam3 = [PrimitiveRelation({f"y{j}" for j in J}, {x: 1 for x in _complement_x(d, J)})
            for J in combinations(idx, r + 1)]
    return {"I": fam1, "II": fam2, "III": fam3}


def bundle_relations(d: int, n: int) -> List[PrimitiveRelation]:
    """Relations of the (P^1)^n-bundle over P^{d-n} reached in the first case."""
    rels = [PrimitiveRelation({f"x{i}", f"y{i}"}) for i in range(1, n + 1)]
    rels.append(PrimitiveRelation([f"x{i}" for i in range(n + 1, d + 2)], {y: 1 for y in ys(n)}))
    return rels


def blowup_at_points(d: int, n: int) -> FanPresentation:
    """Blow up P^d at the fixed points omitting x_1, ..., x_n in turn."""
    if d < 2 or not 1 <= n <= d + 1:
        raise ValueError(f"need d >= 2 and 1 <= n <= d+1, got d={d}, n={n}")
    F = projective_space(d)
    for i in range(1, n + 1):
        F = blow_up(F, _complement_x(d, [i]), f"y{i}")
    expected = stage_relations(d, n, 1)
    if set(F.relations) != {r for fam in expected.values() for r in fam}:
        raise ConstructionError(f"blow-up of P^{d} at {n} points has unexpected relations")
    return F


def stage_family(F: FanPresentation, r: int) -> Optional[Dict[str, List[PrimitiveRelation]]]:
    """The families of ``F`` if it is exactly the stage-``r`` fan, else None."""
    d = F.dim
    n = sum(1 for v in F.generators if v.startswith("y"))
    if set(F.generators) != set(xs(d)) | set(ys(n)):
        return None
    fams = stage_relations(d, n, r)
    if set(F.relations) != {rel for fam in fams.values() for rel in fam}:
        return None
    return fams


def antiflip_schedule(F: FanPresentation, r: int) -> List[FlipSpec]:
    """Walls of family III of the stage-``r`` fan, in lexicographic order of
    their index tuples."""
    fams = stage_family(F, r)
    if fams is None:
        raise ConstructionError("not a stage presentation")
    return [FlipSpec(rel) for rel in fams["III"]]


def predicted_flip_count(d: int, n: int) -> Optional[int]:
    if 2 * n - 1 < d:
        return 2 ** n - n - 1
    if d % 2 == 0:
        return sum(comb(n, r) for r in range(2, d // 2 + 1))
    return None


@dataclass
class FlipRecord:
    stage: int
    step: int
    relation: PrimitiveRelation
    degree: int
    kind: tuple
    extremal: bool

    def to_dict(self) -> dict:
        return {"stage": self.stage, "step": self.step, "relation": self.relation.to_dict(),
                "degree": self.degree, "kind": list(self.kind), "extremal": self.extremal}


@dataclass
class ConstructionReport:
    d: int
    n: int
    outcome: str = ""
    schedule: List[FlipRecord] = field(default_factory=list)
    stage_snapshots: Dict[int, FanPresentation] = field(default_factory=dict)
    intermediates: List[FanPresentation] = field(default_factory=list)
    final: Optional[FanPresentation] = None
    final_stage: int = 1
    c: Optional[int] = None
    obstruction: Optional[FlipRecord] = None
    notes: List[str] = field(default_factory=list)

    @property
    def flip_count(self) -> int:
        return len(self.schedule)

    @property
    def presentations(self) -> List[FanPresentation]:
        """Every fan met along the run, starting with B^d_n."""
        return list(self.intermediates)

    def to_dict(self, snapshot_refs: Optional[Dict[int, str]] = None) -> dict:
        out = {
            "d": self.d, "n": self.n, "outcome": self.outcome,
            "flip_count": self.flip_count,
            "predicted_flip_count": predicted_flip_count(self.d, self.n),
            "final_stage": self.final_stage,
            "schedule": [rec.to_dict() for rec in self.schedule],
            "notes": self.notes,
        }
        if self.c is not None:
            out["c"] = self.c
        if self.obstruction is not None:
            out["obstruction"] = self.obstruction.to_dict()
        if snapshot_refs is not None:
            out["stage_snapshots"] = {str(r): snapshot_refs[r] for r in sorted(snapshot_refs)}
        else:
            out["stage_snapshots"] = {str(r): F.to_dict()
                                      for r, F in sorted(self.stage_snapshots.items())}
        if self.final is not None:
            out["final"] = self.final.to_dict()
            out["final_is_fano"] = is_fano(self.final)
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), sort_keys=True)


def run_construction(d: int, n: int, shuffle: Optional[int] = None,
                     verify=None) -> ConstructionReport:
    """Run the stage-by-stage anti-flip sequence starting from B^d_n.

    ``shuffle`` is an optional RNG seed that permutes the flip order inside
    each stage.  ``verify`` is an optional callable applied to every
    presentation met along the way; it should raise on failure.
    """
    if d < 3 or not 2 <= n <= d + 1:
        raise ValueError(f"need d >= 3 and 2 <= n <= d+1, got d={d}, n={n}")
    rng = random.Random(shuffle) if shuffle is not None else None
    report = ConstructionReport(d, n)
    F = blowup_at_points(d, n)
    report.intermediates.append(F)
    if verify:
        verify(F)
    r = 1
    while True:
        fams = stage_family(F, r)
        if fams is None:
            raise ConstructionError(f"stage {r}: presentation lost the expected shape")
        report.stage_snapshots[r] = F
        walls = antiflip_schedule(F, r)
        if walls and fano_degree(walls[0].relation) == 0:
            wall = walls[0].relation
            ext = is_extremal(F, wall)
            report.obstruction = FlipRecord(r, 0, wall, 0, classify(F, wall, check=False), ext)
            if not ext:
                raise ConstructionError(f"stage {r}: degree-0 wall {wall} is not extremal")
            report.outcome = "flop_obstruction"
            report.final_stage = r
            report.notes.append(f"degree-0 extremal wall at r={r} (2r+1 = d): crossing it is "
                                "a flop, so no smooth Fano model is reached")
            return report
        if 2 * r + 1 > d or r == n:
            break
        if rng is not None:
            rng.shuffle(walls)
        for step, spec in enumerate(walls, 1):
            rel = spec.relation
            ext = is_extremal(F, rel)
            kind = classify(F, rel, check=False)
            record = FlipRecord(r, step, rel, fano_degree(rel), kind, ext)
            if not ext:
                raise ConstructionError(f"stage {r}, step {step}: wall {rel} is not extremal")
            if kind != ("small", "antiflip"):
                raise ConstructionError(f"stage {r}, step {step}: wall {rel} classifies as {kind}")
            F = star_flip(F, spec, check_extremal=False)
            report.schedule.append(record)
            report.intermediates.append(F)
            if verify:
                verify(F)
        r += 1

    report.final = F
    report.final_stage = r
    if not is_fano(F):
        raise ConstructionError(f"end of run at stage {r} is not Fano")
    if r == n:
        report.outcome = "bundle_fano"
        if set(F.relations) != set(bundle_relations(d, n)):
            raise ConstructionError("bundle endpoint has unexpected relations")
        report.notes.append(f"(P^1)^{n}-bundle over P^{d - n}")
    else:
        report.outcome = "small_fano"
        report.c = r
        if d % 2 or r != d // 2:
            raise ConstructionError(f"small endpoint at r={r} for d={d}")
        if n == d:
            report.notes.append("expected to be the pseudo-symmetric toric Fano variety "
                                "of this dimension (not checked)")
        elif n == d + 1:
            report.notes.append("expected to be the symmetric toric Fano variety "
                                "of this dimension (not checked)")
    predicted = predicted_flip_count(d, n)
    if predicted != report.flip_count:
        raise ConstructionError(f"{report.flip_count} flips, expected {predicted}")
    return report
