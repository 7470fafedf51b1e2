"""
Exact integer and rational linear algebra on lattice points and simplicial
cones, plus a small exact LP feasibility solver.

Nothing in here touches floating point.  Integers are Python ints and
rationals are :class:`fractions.Fraction`.
"""

from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence


class LatticeError(ValueError):
    """Raised for malformed input to the lattice routines."""


class LatticePoint(tuple):
    """An integer vector in N = Z^d.

    Behaves like a tuple of ints, but ``+``, ``-`` and integer ``*`` act
    coordinatewise instead of concatenating.
    """

    def __new__(cls, coords: Iterable[int]):
        coords = tuple(coords)
        for c in coords:
            if isinstance(c, bool) or not isinstance(c, int):
                raise LatticeError(f"lattice coordinates must be ints, got {c!r}")
        return super().__new__(cls, coords)

    @property
    def dim(self) -> int:
        return len(self)

    @classmethod
    def zero(cls, d: int) -> "LatticePoint":
        return cls([0] * d)

    @classmethod
    def basis(cls, d: int, i: int) -> "LatticePoint":
        """The standard basis vector e_{i+1} of Z^d (0-based ``i``)."""
        return cls([1 if j == i else 0 for j in range(d)])

    def _check(self, other):
        if len(other) != len(self):
            raise LatticeError("shape")

    def __add__(self, other):
        self._check(other)
        return LatticePoint(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        self._check(other)
        return LatticePoint(a - b for a, b in zip(self, other))

    def __neg__(self):
        return LatticePoint(-a for a in self)

    def __mul__(self, k):
        if isinstance(k, bool) or not isinstance(k, int):
            return NotImplemented
        return LatticePoint(k * a for a in self)

    __rmul__ = __mul__

    def __repr__(self):
        return f"LatticePoint({list(self)})"


def vector_sum(vectors: Iterable[Sequence[int]], d: int) -> LatticePoint:
    total = [0] * d
    for v in vectors:
        if len(v) != d:
            raise LatticeError("shape")
        for i, a in enumerate(v):
            total[i] += a
    return LatticePoint(total)


def det(vectors: Sequence[Sequence[int]]) -> int:
    """Exact determinant of the square integer matrix with the given rows.

    Uses Bareiss fraction-free elimination, so every intermediate value is an
    integer.
    """
    n = len(vectors)
    if any(len(v) != n for v in vectors):
        raise LatticeError("shape")
    if n == 0:
        return 1
    m = [list(v) for v in vectors]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def rank(vectors: Sequence[Sequence[int]]) -> int:
    if not vectors:
        return 0
    rows = [[Fraction(a) for a in v] for v in vectors]
    return len(_row_echelon(rows)[1])


def _row_echelon(rows):
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [a / pv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def solve(cone_gens: Sequence[Sequence[int]],
          target: Sequence[int]) -> Optional[list]:
    """Coefficients c with sum(c_j * g_j) == target, or None if target is
    not in the linear span.  The generators must be linearly independent."""
    m = len(cone_gens)
    d = len(target)
    if any(len(g) != d for g in cone_gens):
        raise LatticeError("shape")
    if m == 0:
        return [] if all(t == 0 for t in target) else None
    # augmented system: rows are coordinates, columns are generators
    rows = [[Fraction(g[i]) for g in cone_gens] + [Fraction(target[i])]
            for i in range(d)]
    rows, pivots = _row_echelon(rows)
    if sum(p < m for p in pivots) < m:
        raise LatticeError("not simplicial")
    if m in pivots:
        return None
    return [rows[i][m] for i in range(m)]


def solve_nonneg(cone_gens: Sequence[Sequence[int]],
                 target: Sequence[int]) -> Optional[list]:
    """Nonnegative rational coefficients expressing ``target`` in the
    simplicial cone spanned by ``cone_gens``, or None if it lies outside."""
    coeffs = solve(cone_gens, target)
    if coeffs is None or any(c < 0 for c in coeffs):
        return None
    return coeffs


def in_relative_interior(cone_gens: Sequence[Sequence[int]],
                         target: Sequence[int]) -> bool:
    coeffs = solve_nonneg(cone_gens, target)
    return coeffs is not None and all(c > 0 for c in coeffs)


class CoordinateMap:
    """Precomputed inverse of a full-rank square cone.

    ``coords(v)`` returns the coefficients of ``v`` in the cone's generator
    basis as integers when the cone is unimodular, Fractions otherwise.  Used
    in the hot loops of the oracle, where the same cone is queried many times.
    """

    def __init__(self, cone_gens: Sequence[Sequence[int]]):
        d = len(cone_gens)
        if any(len(g) != d for g in cone_gens):
            raise LatticeError("shape")
        self.det = det(cone_gens)
        if self.det == 0:
            raise LatticeError("not simplicial")
        # columns = generators; invert via Gauss-Jordan on [G | I]
        rows = [[Fraction(cone_gens[j][i]) for j in range(d)]
                + [Fraction(int(i == k)) for k in range(d)] for i in range(d)]
        rows, _ = _row_echelon(rows)
        inv = [row[d:] for row in rows]
        if abs(self.det) == 1:
            inv = [[int(a) for a in row] for row in inv]
        self._inv = inv

    def coords(self, v: Sequence[int]) -> list:
        return [sum(a * b for a, b in zip(row, v)) for row in self._inv]


# --------------------------------------------------------------------------
# exact LP feasibility

SENSES = ("<=", ">=", "==", "<", ">")


class Constraint(NamedTuple):
    """``sum(coeffs[v] * v) <sense> rhs`` over named rational variables."""
    coeffs: Mapping[str, object]
    sense: str
    rhs: object = 0

    def holds(self, assignment: Mapping[str, Fraction]) -> bool:
        lhs = sum((Fraction(a) * assignment[v] for v, a in self.coeffs.items()),
                  Fraction(0))
        rhs = Fraction(self.rhs)
        return {"<=": lhs <= rhs, ">=": lhs >= rhs, "==": lhs == rhs,
                "<": lhs < rhs, ">": lhs > rhs}[self.sense]


class PhaseOneResult(NamedTuple):
    """Either ``solution`` (x >= 0 with A x = b) or ``farkas`` (y with
    y^T A <= 0 componentwise and y^T b > 0) is set, never both."""
    solution: Optional[list]
    farkas: Optional[list]


def phase_one(A: Sequence[Sequence[object]], b: Sequence[object]) -> PhaseOneResult:
    """Decide feasibility of ``A x = b, x >= 0`` exactly.

    Dense tableau simplex with artificial variables and Bland's rule, so the
    pivot sequence (and the returned point) depends only on the input.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if len(b) != m or any(len(row) != n for row in A):
        raise LatticeError("shape")
    flip = []
    rows = []
    for row, rhs in zip(A, b):
        row = [Fraction(a) for a in row]
        rhs = Fraction(rhs)
        s = -1 if rhs < 0 else 1
        flip.append(s)
        rows.append([s * a for a in row] + [Fraction(int(i == len(rows)))
                                            for i in range(m)] + [s * rhs])
    ncol = n + m
    basis = [n + i for i in range(m)]
    # reduced costs for min sum(artificials); last entry is -objective
    cost = [-sum((r[j] for r in rows), Fraction(0)) for j in range(n)]
    cost += [Fraction(0)] * m
    cost.append(-sum((r[-1] for r in rows), Fraction(0)))

    while True:
        enter = next((j for j in range(n) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][-1] / a
                if (best is None or ratio < best
                        or (ratio == best and basis[i] < basis[leave])):
                    best, leave = ratio, i
        if leave is None:
            # cannot happen in phase one: objective is bounded below by 0
            raise RuntimeError("unbounded phase-one problem")
        _pivot(rows, cost, leave, enter)
        basis[leave] = enter

    if cost[-1] == 0:
        x = [Fraction(0)] * n
        for i, j in enumerate(basis):
            if j < n:
                x[j] = rows[i][-1]
        return PhaseOneResult(x, None)
    # simplex multipliers: reduced cost of artificial i is 1 - y_i
    y = [flip[i] * (1 - cost[n + i]) for i in range(m)]
    return PhaseOneResult(None, y)


def _pivot(rows, cost, r, c):
    pr = rows[r]
    pv = pr[c]
    if pv != 1:
        pr = [a / pv for a in pr]
        rows[r] = pr
    nz = [j for j, a in enumerate(pr) if a != 0]
    for i, row in enumerate(rows):
        f = row[c]
        if i != r and f != 0:
            for j in nz:
                row[j] -= f * pr[j]
    f = cost[c]
    if f != 0:
        for j in nz:
            cost[j] -= f * pr[j]


def lp_feasible(constraints: Sequence[Constraint]) -> Optional[dict]:
    """Find an exact rational point satisfying every constraint, or None.

    Variables are free unless a constraint bounds them.  Strict inequalities
    are removed by homogenizing with an extra variable ``t >= 1`` and
    tightening each strict row to a margin of 1, which is exact because the
    homogenized feasible set is a cone.
    """
    names = []
    seen = set()
    for con in constraints:
        if con.sense not in SENSES:
            raise LatticeError(f"unknown sense {con.sense!r}")
        for v in con.coeffs:
            if v not in seen:
                seen.add(v)
                names.append(v)
    strict = any(con.sense in ("<", ">") for con in constraints)
    k = len(names)
    idx = {v: i for i, v in enumerate(names)}
    nfree = k + (1 if strict else 0)

    # each free variable is split as p - q; then one slack per inequality
    n_ineq = sum(con.sense != "==" for con in constraints) + (1 if strict else 0)
    ncols = 2 * nfree + n_ineq
    A, b = [], []
    slack = 2 * nfree
    for con in constraints:
        row = [Fraction(0)] * ncols
        for v, a in con.coeffs.items():
            a = Fraction(a)
            row[idx[v]] += a
            row[nfree + idx[v]] -= a
        rhs = Fraction(con.rhs)
        sense = con.sense
        if strict:
            row[k] -= rhs
            row[nfree + k] += rhs
            rhs = Fraction(0)
            if sense == "<":
                sense, rhs = "<=", Fraction(-1)
            elif sense == ">":
                sense, rhs = ">=", Fraction(1)
        if sense == "<=":
            row[slack] = Fraction(1)
            slack += 1
        elif sense == ">=":
            row[slack] = Fraction(-1)
            slack += 1
        A.append(row)
        b.append(rhs)
    if strict:
        row = [Fraction(0)] * ncols
        row[k], row[nfree + k], row[slack] = Fraction(1), Fraction(-1), Fraction(-1)
        A.append(row)
        b.append(Fraction(1))

    if not A:
        return {}
    result = phase_one(A, b)
    if result.solution is None:
        return None
    x = result.solution
    values = [x[i] - x[nfree + i] for i in range(nfree)]
    if strict:
        t = values[k]
        values = [v / t for v in values[:k]]
    assignment = dict(zip(names, values))
    for con in constraints:
        if not con.holds(assignment):
            raise RuntimeError("LP returned a point violating a constraint")
    return assignment
