"""
Rational polyhedral cones and polytopes with both representations.

A Cone is stored in canonical form: extreme rays and facet normals are
integer-primitive, taken modulo the lineality space (resp. the equations) by
orthogonal projection, deduplicated and sorted. Two cones are equal as sets
exactly when their dataclass fields are equal. Polytopes are handled through
their homogenisation cone {(s, s*x) : s >= 0, x in P} and inherit the same
canonical form.

Conversions between rays and inequalities go through cddlib's double
description method in exact rational arithmetic.

Volumes are Euclidean (Lebesgue) volumes in the ambient space and vanish below
full dimension. Algebraic volumes of divisors differ from the Euclidean volume
of the corresponding fiber by the constant factor n!, which leaves every order
of vanishing unchanged.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import cdd

from errors import ContainmentError, DimensionError, InputError, UnboundedPolytopeError
from exact_arith import (IntVec, RatMat, RatVec, add, determinant, dot, is_zero, matrix_rank,
                         mul, neg, primitive, sub, subspace_basis, unit, vector)

logger = logging.getLogger(__name__)

NUMBER_TYPE = 'fraction'


# -- double description -------------------------------------------------------

def _split_rows(mat) -> Tuple[List[RatVec], List[RatVec], List[RatVec]]:
    """(affine rows, homogeneous rows, linearity rows) of a cdd matrix, zero rows dropped"""
    affine, homogeneous, linear = [], [], []
    for i in range(mat.row_size):
        row = tuple(Fraction(x) for x in mat[i])
        if is_zero(row[1:]):
            continue
        if i in mat.lin_set:
            linear.append(row[1:])
        elif row[0] != 0:
            affine.append(row)
        else:
            homogeneous.append(row[1:])
    return affine, homogeneous, linear


def _generators_to_facets(rays: Sequence[Sequence], lineality: Sequence[Sequence],
                          dim: int) -> Tuple[List[RatVec], List[RatVec]]:
    """Facet normals a (a.x >= 0) and equations of the cone generated by rays + lineality"""
    # the origin as the single point makes cddlib treat the generators as a cone
    mat = cdd.Matrix([[1] + [0] * dim], number_type=NUMBER_TYPE)
    if rays:
        mat.extend([[0] + list(r) for r in rays])
    if lineality:
        mat.extend([[0] + list(l) for l in lineality], linear=True)
    mat.rep_type = cdd.RepType.GENERATOR
    out = cdd.Polyhedron(mat).get_inequalities()
    out.canonicalize()
    _, facets, equations = _split_rows(out)
    return facets, equations


def _facets_to_generators(ineqs: Sequence[Sequence], equations: Sequence[Sequence],
                          dim: int) -> Tuple[List[RatVec], List[RatVec]]:
    """Extreme rays (modulo lineality) and a lineality basis of {x : a.x >= 0, e.x = 0}"""
    # 1 >= 0 keeps the matrix nonempty
    mat = cdd.Matrix([[1] + [0] * dim], number_type=NUMBER_TYPE)
    if ineqs:
        mat.extend([[0] + list(a) for a in ineqs])
    if equations:
        mat.extend([[0] + list(e) for e in equations], linear=True)
    mat.rep_type = cdd.RepType.INEQUALITY
    out = cdd.Polyhedron(mat).get_generators()
    out.canonicalize()
    # the only point of a homogeneous cone lies in its lineality space
    _, rays, lineality = _split_rows(out)
    return rays, lineality


def _orthogonal_basis(basis: Sequence[Sequence]) -> List[RatVec]:
    ortho: List[RatVec] = []
    for v in basis:
        w = vector(v)
        for u in ortho:
            w = sub(w, mul(dot(w, u) / dot(u, u), u))
        if not is_zero(w):
            ortho.append(w)
    return ortho


def _project_off(v: Sequence, ortho: Sequence[RatVec]) -> RatVec:
    w = vector(v)
    for u in ortho:
        w = sub(w, mul(dot(w, u) / dot(u, u), u))
    return w


def _reduced_generators(vectors: Iterable[Sequence], subspace: Sequence[Sequence]) -> Tuple[IntVec, ...]:
    """Primitive representatives orthogonal to the subspace, deduplicated and sorted"""
    ortho = _orthogonal_basis(subspace)
    out = set()
    for v in vectors:
        w = _project_off(v, ortho)
        if not is_zero(w):
            out.add(primitive(w))
    return tuple(sorted(out))


# -- cones --------------------------------------------------------------------

@dataclass(frozen=True)
class Cone:
    """
    Rational polyhedral cone.

    rays and lineality generate the cone; ineqs (a.x >= 0) and equations
    (e.x = 0) cut it out. All four are canonical.
    """

    ambient_dim: int
    rays: Tuple[IntVec, ...]
    lineality: Tuple[IntVec, ...]
    ineqs: Tuple[IntVec, ...]
    equations: Tuple[IntVec, ...]

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_zero(self) -> bool:
        return not self.rays and not self.lineality

    def generators(self) -> List[IntVec]:
        """Rays plus both directions of every lineality vector"""
        return list(self.rays) + list(self.lineality) + [neg(l) for l in self.lineality]

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.ambient_dim:
            raise DimensionError(f"point of dimension {len(x)} in a cone of dimension {self.ambient_dim}")
        return (all(dot(e, x) == 0 for e in self.equations)
                and all(dot(a, x) >= 0 for a in self.ineqs))

    def intersect(self, other: 'Cone') -> 'Cone':
        if other.ambient_dim != self.ambient_dim:
            raise DimensionError("intersection of cones in different spaces")
        return ineqs_to_rays(self.ineqs + other.ineqs, self.ambient_dim,
                             equations=self.equations + other.equations)

    def image(self, f) -> 'Cone':
        """Image under a linear map (anything with domain_dim, codomain_dim and __call__)"""
        if f.domain_dim != self.ambient_dim:
            raise DimensionError(f"map from dimension {f.domain_dim} applied to a cone "
                                 f"in dimension {self.ambient_dim}")
        images = [f(g) for g in self.generators()]
        return rays_to_ineqs([v for v in images if not is_zero(v)], f.codomain_dim)

    def line_interval(self, base: Sequence, direction: Sequence) -> Optional[Tuple[Fraction, Optional[Fraction]]]:
        """
        The set {t >= 0 : base + t*direction in C} as (lo, hi) with hi None for
        infinity, or None when it is empty.
        """
        lo, hi = Fraction(0), None
        for a in self.ineqs:
            p, q = Fraction(dot(a, base)), Fraction(dot(a, direction))
            if q == 0:
                if p < 0:
                    return None
            elif q > 0:
                lo = max(lo, -p / q)
            else:
                hi = p / -q if hi is None else min(hi, p / -q)
        for e in self.equations:
            p, q = Fraction(dot(e, base)), Fraction(dot(e, direction))
            if q == 0:
                if p != 0:
                    return None
            else:
                t = -p / q
                lo = max(lo, t)
                hi = t if hi is None else min(hi, t)
        if hi is not None and lo > hi:
            return None
        return lo, hi

    def __str__(self) -> str:
        gens = ', '.join('(' + ', '.join(map(str, r)) + ')' for r in self.rays)
        if self.lineality:
            gens += ' + lin<' + ', '.join('(' + ', '.join(map(str, l)) + ')' for l in self.lineality) + '>'
        return f"cone<{gens}>"


def _canonical_cone(dim: int, rays: Sequence[Sequence], lineality: Sequence[Sequence] = ()) -> Cone:
    facet_rows, equation_rows = _generators_to_facets(rays, lineality, dim)
    equations = subspace_basis(equation_rows, dim)
    facets = _reduced_generators(facet_rows, equations)
    primal_rays, primal_lin = _facets_to_generators(facets, equations, dim)
    lin = subspace_basis(primal_lin, dim)
    return Cone(dim, _reduced_generators(primal_rays, lin), lin, facets, equations)


def rays_to_ineqs(rays: Iterable[Sequence], ambient_dim: int, lineality: Iterable[Sequence] = ()) -> Cone:
    """Cone generated by the rays (and lineality directions), with its facets"""
    rays = [vector(r) for r in rays]
    lineality = [vector(l) for l in lineality]
    for r in rays + lineality:
        if len(r) != ambient_dim:
            raise DimensionError(f"generator of dimension {len(r)} in dimension {ambient_dim}")
        if is_zero(r):
            raise InputError("zero vector among the generating rays")
    cone = _canonical_cone(ambient_dim, [primitive(r) for r in rays],
                           [primitive(l) for l in lineality])
    logger.debug("rays_to_ineqs: %d generators -> %d facets", len(rays), len(cone.ineqs))
    return cone


def ineqs_to_rays(ineqs: Iterable[Sequence], ambient_dim: int, equations: Iterable[Sequence] = ()) -> Cone:
    """Cone {x : a.x >= 0, e.x = 0}, with its extreme rays and lineality"""
    rows, eq_rows = [], []
    for a in ineqs:
        if len(a) != ambient_dim:
            raise DimensionError(f"inequality of dimension {len(a)} in dimension {ambient_dim}")
        if not is_zero(a):
            rows.append(primitive(a))
    for e in equations:
        if len(e) != ambient_dim:
            raise DimensionError(f"equation of dimension {len(e)} in dimension {ambient_dim}")
        if not is_zero(e):
            eq_rows.append(primitive(e))
    rays, lin = _facets_to_generators(rows, eq_rows, ambient_dim)
    return _canonical_cone(ambient_dim, rays, lin)


# -- polytopes ----------------------------------------------------------------

@dataclass(frozen=True)
class Polytope:
    """
    Bounded rational polyhedron.

    ineqs are pairs (a, b) meaning a.x >= b, equations pairs (a, b) meaning
    a.x = b. An empty vertex list is the empty polytope.
    """

    ambient_dim: int
    vertices: Tuple[RatVec, ...]
    ineqs: Tuple[Tuple[IntVec, Fraction], ...]
    equations: Tuple[Tuple[IntVec, Fraction], ...]

    @classmethod
    def from_vertices(cls, points: Iterable[Sequence], ambient_dim: int) -> 'Polytope':
        lifted = []
        for p in points:
            if len(p) != ambient_dim:
                raise DimensionError(f"point of dimension {len(p)} in dimension {ambient_dim}")
            lifted.append((Fraction(1),) + vector(p))
        return _dehomogenise(_canonical_cone(ambient_dim + 1, [primitive(v) for v in lifted]))

    @classmethod
    def from_ineqs(cls, ineqs: Iterable[Tuple[Sequence, object]], ambient_dim: int,
                   equations: Iterable[Tuple[Sequence, object]] = ()) -> 'Polytope':
        """The polytope {x : a.x >= b} (and a.x = b for the equations); must be bounded"""
        hom = [(-Fraction(b),) + vector(a) for a, b in ineqs] + [unit(0, ambient_dim + 1)]
        hom_eq = [(-Fraction(b),) + vector(a) for a, b in equations]
        for row in hom + hom_eq:
            if len(row) != ambient_dim + 1:
                raise DimensionError(f"constraint of dimension {len(row) - 1} in dimension {ambient_dim}")
        return _dehomogenise(ineqs_to_rays(hom, ambient_dim + 1, equations=hom_eq))

    @classmethod
    def point(cls, p: Sequence) -> 'Polytope':
        return cls.from_vertices([p], len(p))

    @classmethod
    def standard_simplex(cls, side, dim: int) -> 'Polytope':
        """conv{0, side*e_1, ..., side*e_n}"""
        side = Fraction(side)
        return cls.from_vertices([(0,) * dim] + [mul(side, unit(i, dim)) for i in range(dim)], dim)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.ambient_dim:
            raise DimensionError(f"point of dimension {len(x)} in a polytope of dimension {self.ambient_dim}")
        if self.is_empty:
            return False
        return (all(dot(a, x) == b for a, b in self.equations)
                and all(dot(a, x) >= b for a, b in self.ineqs))

    def contains_polytope(self, other: 'Polytope') -> bool:
        return all(self.contains(v) for v in other.vertices)

    def translate(self, v: Sequence) -> 'Polytope':
        return Polytope.from_vertices([add(p, v) for p in self.vertices], self.ambient_dim)

    def __str__(self) -> str:
        if self.is_empty:
            return 'conv{}'
        return 'conv{' + ', '.join('(' + ', '.join(map(str, v)) + ')' for v in self.vertices) + '}'


def _dehomogenise(hom: Cone) -> Polytope:
    dim = hom.ambient_dim - 1
    if hom.lineality or any(r[0] == 0 for r in hom.rays):
        raise UnboundedPolytopeError("the inequality system does not describe a bounded polytope")
    vertices = tuple(sorted(tuple(Fraction(x, r[0]) for x in r[1:]) for r in hom.rays))
    # facets of the homogenisation touching no vertex lie at infinity
    ineqs = tuple((h[1:], Fraction(-h[0])) for h in hom.ineqs
                  if any(dot(h, r) == 0 for r in hom.rays))
    equations = tuple((e[1:], Fraction(-e[0])) for e in hom.equations)
    return Polytope(dim, vertices, ineqs, equations)


# -- faces --------------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    """A face of parent: the points where the inequalities in active_set are tight"""

    parent: Union[Cone, Polytope]
    active_set: Tuple[int, ...]
    geometry: Union[Cone, Polytope]


def _tight_sets(p: Union[Cone, Polytope]) -> List[FrozenSet[int]]:
    if isinstance(p, Cone):
        return [frozenset(i for i, a in enumerate(p.ineqs) if dot(a, r) == 0) for r in p.rays]
    return [frozenset(i for i, (a, b) in enumerate(p.ineqs) if dot(a, v) == b) for v in p.vertices]


def _face_geometry(p: Union[Cone, Polytope], members: Sequence[int]):
    if isinstance(p, Cone):
        return rays_to_ineqs([p.rays[g] for g in members], p.ambient_dim, lineality=p.lineality)
    return Polytope.from_vertices([p.vertices[g] for g in members], p.ambient_dim)


def _closed_active_sets(p: Union[Cone, Polytope]) -> Dict[FrozenSet[int], Tuple[int, ...]]:
    """
    Every face as (active set -> generator indices), found by closing
    active sets: tighten one more inequality, keep the generators that are
    still tight, and take everything those generators are tight on.
    """
    tight = _tight_sets(p)
    everything = frozenset(range(len(p.ineqs)))
    all_gens = tuple(range(len(tight)))
    top = frozenset.intersection(everything, *(tight[g] for g in all_gens))
    found = {top: all_gens}
    stack = [top]
    while stack:
        active = stack.pop()
        members = found[active]
        for i in everything - active:
            sub_members = tuple(g for g in members if i in tight[g])
            if not sub_members and isinstance(p, Polytope):
                continue
            closed = frozenset.intersection(everything, *(tight[g] for g in sub_members))
            if closed not in found:
                found[closed] = sub_members
                stack.append(closed)
    return found


def faces(p: Union[Cone, Polytope]) -> List[Face]:
    """
    All nonempty faces, including p itself and, for cones, the lineality space.

    Ordered by dimension, then by active set.
    """
    if isinstance(p, Polytope) and p.is_empty:
        return []
    out = [Face(p, tuple(sorted(active)), _face_geometry(p, members))
           for active, members in _closed_active_sets(p).items()]
    out.sort(key=lambda f: (dim(f.geometry), f.active_set))
    return out


def minimal_face(p: Union[Cone, Polytope], x: Sequence) -> Face:
    """The unique face containing x in its relative interior"""
    if not p.contains(x):
        raise ContainmentError(f"point {tuple(map(str, x))} is not in {p}")
    if isinstance(p, Cone):
        active = frozenset(i for i, a in enumerate(p.ineqs) if dot(a, x) == 0)
    else:
        active = frozenset(i for i, (a, b) in enumerate(p.ineqs) if dot(a, x) == b)
    tight = _tight_sets(p)
    members = [g for g, t in enumerate(tight) if active <= t]
    return Face(p, tuple(sorted(active)), _face_geometry(p, members))


# -- measurements and operations -----------------------------------------------

def dim(p: Union[Cone, Polytope]) -> int:
    """Dimension of the linear (cone) or affine (polytope) hull; -1 for the empty polytope"""
    if isinstance(p, Cone):
        return matrix_rank(list(p.rays) + list(p.lineality)) if not p.is_zero else 0
    if p.is_empty:
        return -1
    base = p.vertices[0]
    return matrix_rank([sub(v, base) for v in p.vertices[1:]])


def contains(p: Union[Cone, Polytope], x: Sequence) -> bool:
    return p.contains(x)


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    if p.ambient_dim != q.ambient_dim:
        raise DimensionError(f"Minkowski sum of polytopes in dimensions {p.ambient_dim} and {q.ambient_dim}")
    return Polytope.from_vertices([add(u, v) for u in p.vertices for v in q.vertices], p.ambient_dim)


def scale(p: Polytope, alpha) -> Polytope:
    alpha = Fraction(alpha)
    if alpha < 0:
        raise InputError(f"negative scaling factor {alpha}")
    if alpha == 0:
        return Polytope.point((0,) * p.ambient_dim)
    return Polytope.from_vertices([mul(alpha, v) for v in p.vertices], p.ambient_dim)


def volume(p: Polytope) -> Fraction:
    """
    Exact Lebesgue volume, 0 below full dimension.

    Pulling triangulation: every face is coned from its lowest vertex over
    the facets of that face not containing it, recursively.
    """
    n = p.ambient_dim
    if p.is_empty or dim(p) < n:
        return Fraction(0)
    face_list = []
    for members in _closed_active_sets(p).values():
        verts = frozenset(members)
        base = p.vertices[min(verts)]
        face_list.append((verts, matrix_rank([sub(p.vertices[g], base) for g in verts])))
    memo: Dict[FrozenSet[int], List[Tuple[int, ...]]] = {}

    def triangulate(verts: FrozenSet[int], d: int) -> List[Tuple[int, ...]]:
        if verts in memo:
            return memo[verts]
        if d == 0:
            return [(min(verts),)]
        apex = min(verts)
        simplices = []
        for facet, fd in face_list:
            if fd == d - 1 and facet < verts and apex not in facet:
                simplices.extend((apex,) + s for s in triangulate(facet, d - 1))
        memo[verts] = simplices
        return simplices

    total = Fraction(0)
    for simplex in triangulate(frozenset(range(len(p.vertices))), n):
        v0 = p.vertices[simplex[0]]
        edges = RatMat.of([sub(p.vertices[g], v0) for g in simplex[1:]], n)
        total += abs(determinant(edges))
    return total / factorial(n)
