"""
Numerical 1-cycles of primitive relations and extremality in the cone they
span.

The cycle of ``u_1+...+u_l = a_1 v_1+...+a_m v_m`` is the integer vector on
the generators with +1 on each u, -a_j on each v_j and 0 elsewhere.  These
cycles span the Mori cone, so a relation is extremal exactly when its cycle
is not a nonnegative combination of the cycles that are not proportional
to it.
"""

from typing import Dict, NamedTuple

from .lattice import Constraint, lp_feasible, vector_sum
from .presentation import FanPresentation, PrimitiveRelation, validate, PresentationError


class MoriError(ValueError):
    pass


class CycleClass(NamedTuple):
    coeffs: Dict[str, int]

    def vector(self, labels):
        return [self.coeffs.get(v, 0) for v in labels]

    def is_relation(self, F: FanPresentation) -> bool:
        """Whether sum(coeff * generator) vanishes exactly."""
        total = vector_sum((c * F.generators[v] for v, c in self.coeffs.items()), F.dim)
        return not any(total)


def cycle_class(F: FanPresentation, R: PrimitiveRelation) -> CycleClass:
    if R not in F.relations:
        raise MoriError(f"relation {R} is not a relation of the fan")
    coeffs = {v: 0 for v in F.generators}
    for u in R.lhs:
        coeffs[u] = 1
    for v, a in R.rhs:
        coeffs[v] = -a
    return CycleClass(coeffs)


def _positive_multiple(a, b) -> bool:
    """Is the integer vector ``a`` a positive rational multiple of ``b``?"""
    i = next((k for k, x in enumerate(b) if x != 0), None)
    if i is None or a[i] == 0 or (a[i] > 0) != (b[i] > 0):
        return False
    return all(x * b[i] == y * a[i] for x, y in zip(a, b))


def decompose(F: FanPresentation, R: PrimitiveRelation):
    """Nonnegative rational weights on the other relations whose cycles sum to
    the cycle of ``R``, or None if no such combination exists.  Relations
    with cycles proportional to ``R`` are excluded."""
    labels = F.labels
    target = cycle_class(F, R).vector(labels)
    others = []
    for i, S in enumerate(F.relations):
        if S == R:
            continue
        vec = cycle_class(F, S).vector(labels)
        if _positive_multiple(vec, target):
            continue
        others.append((f"w{i}", S, vec))
    constraints = [Constraint({name: 1}, ">=", 0) for name, _, _ in others]
    for k, t in enumerate(target):
        constraints.append(Constraint({name: vec[k] for name, _, vec in others if vec[k]},
                                      "==", t))
    solution = lp_feasible(constraints)
    if solution is None:
        return None
    return {S: solution.get(name, 0) for name, S, _ in others if solution.get(name, 0)}


def is_extremal(F: FanPresentation, R: PrimitiveRelation) -> bool:
    problems = validate(F)
    if problems:
        raise PresentationError("invalid: " + "; ".join(problems))
    return decompose(F, R) is None


def classify(F: FanPresentation, R: PrimitiveRelation, check: bool = True):
    """Contraction type of an extremal relation read off from its shape.

    Returns ``(kind, surgery)`` with kind one of 'fiber', 'divisorial',
    'small' and surgery one of 'antiflip', 'flop', 'flip' for small
    contractions with unit coefficients, else 'n/a'.
    """
    if check and not is_extremal(F, R):
        raise MoriError("not extremal")
    m = len(R.rhs)
    if m == 0:
        return ("fiber", "n/a")
    if m == 1:
        # exceptional locus is the divisor of the single rhs ray, whatever
        # its coefficient
        return ("divisorial", "n/a")
    if any(a != 1 for _, a in R.rhs):
        return ("small", "n/a")
    l = len(R.lhs)
    return ("small", "antiflip" if l < m else "flop" if l == m else "flip")
