"""
Exact rational linear algebra and linear programming.

Scalars are fractions.Fraction, vectors are tuples of Fractions (or of ints
once they have been made integer-primitive) and matrices are RatMat values.
Nothing in here ever rounds.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, Optional, Sequence, Tuple

from errors import DimensionError, InputError

logger = logging.getLogger(__name__)

Rat = Fraction
RatVec = Tuple[Fraction, ...]
IntVec = Tuple[int, ...]

GE = 'ge'
EQ = 'eq'
MAX = 'max'
MIN = 'min'

OPTIMAL = 'optimal'
UNBOUNDED = 'unbounded'
INFEASIBLE = 'infeasible'


def rat(value) -> Fraction:
    """Parse an int, Fraction or string like '3/4' into a Fraction"""
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {value!r}") from exc


def vector(values: Iterable) -> RatVec:
    return tuple(rat(v) for v in values)


def unit(i: int, dim: int) -> IntVec:
    return tuple(1 if k == i else 0 for k in range(dim))


def zeros(dim: int) -> RatVec:
    return (Fraction(0),) * dim


def check_dim(a: Sequence, b: Sequence):
    if len(a) != len(b):
        raise DimensionError(f"dimension mismatch: {len(a)} != {len(b)}")


def dot(a: Sequence, b: Sequence):
    check_dim(a, b)
    return sum((x * y for x, y in zip(a, b)), 0)


def add(a: Sequence, b: Sequence) -> RatVec:
    check_dim(a, b)
    return tuple(Fraction(x) + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> RatVec:
    check_dim(a, b)
    return tuple(Fraction(x) - y for x, y in zip(a, b))


def mul(scalar, a: Sequence) -> RatVec:
    return tuple(Fraction(scalar) * x for x in a)


def neg(a: Sequence) -> tuple:
    return tuple(-x for x in a)


def is_zero(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def primitive(v: Sequence) -> IntVec:
    """
    Scale a nonzero rational vector by a positive factor to the primitive
    integer vector on the same ray.
    """
    if is_zero(v):
        raise InputError("zero vector has no primitive generator")
    fracs = [Fraction(x) for x in v]
    denom = lcm(*(x.denominator for x in fracs))
    ints = [int(x * denom) for x in fracs]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def primitive_line(v: Sequence) -> IntVec:
    """Primitive generator of the line through v, first nonzero entry positive"""
    p = primitive(v)
    first = next(x for x in p if x != 0)
    return p if first > 0 else neg(p)


def format_vec(v: Sequence) -> str:
    return '(' + ', '.join(str(x) for x in v) + ')'


@dataclass(frozen=True)
class RatMat:
    """Dense rational matrix with an explicit column count"""

    rows: Tuple[RatVec, ...]
    ncols: int

    def __post_init__(self):
        for row in self.rows:
            if len(row) != self.ncols:
                raise DimensionError(
                    f"row of length {len(row)} in a matrix with {self.ncols} columns")

    @classmethod
    def of(cls, rows: Iterable[Iterable], ncols: Optional[int] = None) -> 'RatMat':
        rows = tuple(vector(r) for r in rows)
        if ncols is None:
            if not rows:
                raise DimensionError("column count of an empty matrix must be given")
            ncols = len(rows[0])
        return cls(rows, ncols)

    @classmethod
    def identity(cls, n: int) -> 'RatMat':
        return cls.of([unit(i, n) for i in range(n)], n)

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> 'RatMat':
        return cls.of([zeros(ncols) for _ in range(nrows)], ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def transpose(self) -> 'RatMat':
        return RatMat(tuple(tuple(row[j] for row in self.rows) for j in range(self.ncols)),
                      self.nrows)

    def apply(self, v: Sequence) -> RatVec:
        if len(v) != self.ncols:
            raise DimensionError(f"vector of dimension {len(v)} applied to {self.ncols} columns")
        return tuple(dot(row, v) for row in self.rows)


# -- elimination -------------------------------------------------------------

def _integer_rows(rows: Sequence[Sequence]) -> Tuple[List[List[int]], List[int]]:
    """Clear denominators row by row; returns the integer rows and the factors used"""
    out, factors = [], []
    for row in rows:
        fracs = [Fraction(x) for x in row]
        m = lcm(*(x.denominator for x in fracs)) if fracs else 1
        out.append([int(x * m) for x in fracs])
        factors.append(m)
    return out, factors


def _bareiss_echelon(rows: List[List[int]], ncols: int) -> Tuple[List[List[int]], List[int], int]:
    """
    Fraction-free row echelon form of an integer matrix.

    Every division is exact (Sylvester's identity), so intermediate entries
    stay bounded by minors of the input. Returns the echelon matrix, the pivot
    columns and the number of row swaps.
    """
    m = [list(r) for r in rows]
    pivots: List[int] = []
    prev = 1
    swaps = 0
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
            swaps += 1
        for i in range(r + 1, len(m)):
            for j in range(c + 1, ncols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        pivots.append(c)
        r += 1
    return m, pivots, swaps


def row_reduce(rows: Sequence[Sequence], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form (nonzero rows only) and its pivot columns"""
    ints, _ = _integer_rows(rows)
    echelon, pivots, _ = _bareiss_echelon(ints, ncols)
    reduced = [[Fraction(x) for x in row] for row in echelon[:len(pivots)]]
    for idx in reversed(range(len(pivots))):
        c = pivots[idx]
        piv = reduced[idx][c]
        reduced[idx] = [x / piv for x in reduced[idx]]
        for above in range(idx):
            f = reduced[above][c]
            if f != 0:
                reduced[above] = [x - f * y for x, y in zip(reduced[above], reduced[idx])]
    return reduced, pivots


def matrix_rank(a) -> int:
    """Exact rank of a RatMat or of a list of equally long rows"""
    if isinstance(a, RatMat):
        rows, ncols = a.rows, a.ncols
    else:
        rows = list(a)
        if not rows:
            return 0
        ncols = len(rows[0])
    ints, _ = _integer_rows(rows)
    _, pivots, _ = _bareiss_echelon(ints, ncols)
    return len(pivots)


def determinant(a: RatMat) -> Fraction:
    if a.nrows != a.ncols:
        raise DimensionError(f"determinant of a {a.nrows}x{a.ncols} matrix")
    n = a.nrows
    if n == 0:
        return Fraction(1)
    ints, factors = _integer_rows(a.rows)
    echelon, pivots, swaps = _bareiss_echelon(ints, n)
    if len(pivots) < n:
        return Fraction(0)
    det = Fraction(echelon[n - 1][n - 1] * (-1) ** swaps)
    for f in factors:
        det /= f
    return det


def subspace_basis(vectors: Iterable[Sequence], dim: int) -> Tuple[IntVec, ...]:
    """Canonical basis of a linear span: rows of the RREF, made primitive"""
    vectors = [v for v in vectors if not is_zero(v)]
    if not vectors:
        return ()
    reduced, _ = row_reduce(vectors, dim)
    return tuple(primitive(row) for row in reduced)


def nullspace(a: RatMat) -> Tuple[IntVec, ...]:
    """Integer-primitive basis of {x : A x = 0}, one vector per free column"""
    reduced, pivots = row_reduce(a.rows, a.ncols)
    return tuple(_free_vector(reduced, pivots, f, a.ncols)
                 for f in range(a.ncols) if f not in pivots)


def _free_vector(reduced, pivots, free: int, ncols: int) -> IntVec:
    x = [Fraction(0)] * ncols
    x[free] = Fraction(1)
    for i, p in enumerate(pivots):
        x[p] = -reduced[i][free]
    return primitive_line(x)


@dataclass(frozen=True)
class LinearSolution:
    """
    Solution set of A x = b.

    kind is 'unique', 'affine' or 'infeasible'; particular is None when the
    system is infeasible.
    """

    kind: str
    particular: Optional[RatVec] = None
    nullspace: Tuple[IntVec, ...] = ()


def solve_linear(a: RatMat, b: Sequence) -> LinearSolution:
    if len(b) != a.nrows:
        raise DimensionError(f"right-hand side of dimension {len(b)} for {a.nrows} rows")
    augmented = [list(row) + [Fraction(v)] for row, v in zip(a.rows, b)]
    reduced, pivots = row_reduce(augmented, a.ncols + 1)
    if a.ncols in pivots:
        return LinearSolution('infeasible')
    particular = [Fraction(0)] * a.ncols
    for i, p in enumerate(pivots):
        particular[p] = reduced[i][a.ncols]
    kernel = tuple(_free_vector(reduced, pivots, f, a.ncols)
                   for f in range(a.ncols) if f not in pivots)
    return LinearSolution('affine' if kernel else 'unique', tuple(particular), kernel)


# -- linear programming ------------------------------------------------------

@dataclass(frozen=True)
class Constraint:
    """coeffs . x  (>= | =)  rhs"""

    coeffs: RatVec
    rhs: Fraction
    relation: str = GE

    @classmethod
    def ge(cls, coeffs, rhs=0) -> 'Constraint':
        return cls(vector(coeffs), rat(rhs), GE)

    @classmethod
    def eq(cls, coeffs, rhs=0) -> 'Constraint':
        return cls(vector(coeffs), rat(rhs), EQ)


@dataclass(frozen=True)
class LinProgram:
    """Optimise objective . x over free variables x subject to the constraints"""

    objective: RatVec
    constraints: Tuple[Constraint, ...] = ()
    sense: str = MAX

    def __post_init__(self):
        if self.sense not in (MAX, MIN):
            raise InputError(f"unknown sense {self.sense!r}")
        for con in self.constraints:
            if con.relation not in (GE, EQ):
                raise InputError(f"unknown relation {con.relation!r}")
            if len(con.coeffs) != len(self.objective):
                raise DimensionError(
                    f"constraint of dimension {len(con.coeffs)} for {len(self.objective)} variables")


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Optional[Fraction] = None
    witness: Optional[RatVec] = None

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


@dataclass
class _Tableau:
    """Canonical tableau rows [A | b] with the index of the basic variable per row"""

    rows: List[List[Fraction]]
    basis: List[int]
    pivots: int = field(default=0)

    def pivot(self, i: int, j: int):
        piv = self.rows[i][j]
        self.rows[i] = [x / piv for x in self.rows[i]]
        for k, row in enumerate(self.rows):
            if k != i and row[j] != 0:
                f = row[j]
                self.rows[k] = [x - f * y for x, y in zip(row, self.rows[i])]
        self.basis[i] = j
        self.pivots += 1

    def minimise(self, cost: Sequence[Fraction], columns: int) -> str:
        """
        Primal simplex with Bland's rule: the entering column is the lowest
        index with negative reduced cost, the leaving row the minimum ratio
        with ties broken by the lowest basic variable index.
        """
        while True:
            entering = None
            for j in range(columns):
                if j in self.basis:
                    continue
                reduced = cost[j] - sum(cost[b] * row[j] for b, row in zip(self.basis, self.rows))
                if reduced < 0:
                    entering = j
                    break
            if entering is None:
                return OPTIMAL
            ratios = [(row[-1] / row[entering], self.basis[i], i)
                      for i, row in enumerate(self.rows) if row[entering] > 0]
            if not ratios:
                return UNBOUNDED
            _, _, leaving = min(ratios)
            self.pivot(leaving, entering)

    def values(self, columns: int) -> List[Fraction]:
        z = [Fraction(0)] * columns
        for b, row in zip(self.basis, self.rows):
            if b < columns:
                z[b] = row[-1]
        return z


def _standard_form(p: LinProgram):
    """
    Rewrite as min c.z, A z = b, z >= 0, b >= 0 with z = (x+, x-, slacks).
    """
    n = len(p.objective)
    ge_rows = [k for k, con in enumerate(p.constraints) if con.relation == GE]
    width = 2 * n + len(ge_rows)
    slack_of = {k: 2 * n + s for s, k in enumerate(ge_rows)}
    rows, rhs = [], []
    for k, con in enumerate(p.constraints):
        row = [Fraction(0)] * width
        for i, a in enumerate(con.coeffs):
            row[i] = Fraction(a)
            row[n + i] = -Fraction(a)
        if k in slack_of:
            row[slack_of[k]] = Fraction(-1)
        b = Fraction(con.rhs)
        if b < 0:
            row = [-x for x in row]
            b = -b
        rows.append(row)
        rhs.append(b)
    sign = -1 if p.sense == MAX else 1
    cost = [sign * Fraction(c) for c in p.objective] + [-sign * Fraction(c) for c in p.objective]
    cost += [Fraction(0)] * len(ge_rows)
    return rows, rhs, cost, width


def lp_solve(p: LinProgram) -> LPResult:
    """
    Exact two-phase simplex.

    Returns the optimum with a witness satisfying every constraint exactly,
    or the status 'unbounded' / 'infeasible'.
    """
    n = len(p.objective)
    rows, rhs, cost, width = _standard_form(p)
    m = len(rows)

    # phase 1: artificial basis, minimise the sum of artificials
    tableau = _Tableau(
        [row + [Fraction(1) if k == i else Fraction(0) for k in range(m)] + [b]
         for i, (row, b) in enumerate(zip(rows, rhs))],
        [width + i for i in range(m)])
    phase1 = [Fraction(0)] * width + [Fraction(1)] * m
    tableau.minimise(phase1, width + m)
    infeasibility = sum(row[-1] for b, row in zip(tableau.basis, tableau.rows) if b >= width)
    if infeasibility > 0:
        logger.debug("LP infeasible after %d pivots", tableau.pivots)
        return LPResult(INFEASIBLE)

    # drive artificials out of the basis; rows where that is impossible are redundant
    keep = []
    for i in range(m):
        if tableau.basis[i] >= width:
            j = next((j for j in range(width) if tableau.rows[i][j] != 0), None)
            if j is None:
                continue
            tableau.pivot(i, j)
        keep.append(i)
    tableau = _Tableau([tableau.rows[i][:width] + [tableau.rows[i][-1]] for i in keep],
                       [tableau.basis[i] for i in keep], tableau.pivots)

    # phase 2
    if tableau.minimise(cost, width) == UNBOUNDED:
        logger.debug("LP unbounded after %d pivots", tableau.pivots)
        return LPResult(UNBOUNDED)
    z = tableau.values(width)
    witness = tuple(z[i] - z[n + i] for i in range(n))
    return LPResult(OPTIMAL, Fraction(dot(p.objective, witness)), witness)
