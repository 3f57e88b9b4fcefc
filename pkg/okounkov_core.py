"""
Global bodies, numerical Newton-Okounkov bodies and the Minkowski basis.

A global body is a pointed, full-dimensional rational cone in
Q^n x Q^rho (valuation coordinates first, class coordinates last) whose
fibers over the class space are bounded. The fiber over a class D is its
numerical Newton-Okounkov body. Projecting the fan of faces of the cone onto
the class space gives the chamber fan; the primitive generators of its
one-dimensional cones, together with their fibers, form a Minkowski basis:
every class D decomposes as sum(alpha_i * D_i) with
fiber(D) = sum(alpha_i * fiber(D_i)).
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

from errors import (DecompositionError, DimensionError, InputError, NotFullDimensionalError,
                    NotPointedError, NotPseudoEffectiveError, UnboundedFiberError)
from exact_arith import (Constraint, IntVec, LinProgram, RatVec, add, dot, format_vec, is_zero,
                         lp_solve, mul, neg, sub, unit, vector)
from fans import Fan, LinMap, face_fan, minimal_cone, project_fan
from polyhedra import Cone, Polytope, ineqs_to_rays, minkowski_sum, rays_to_ineqs, scale

logger = logging.getLogger(__name__)

ClassVec = RatVec


@dataclass(frozen=True)
class GlobalBody:
    """
    Global cone with n valuation and rho class coordinates.

    Validated on construction; chambers, image cone and basis are computed
    lazily and cached on the instance.
    """

    valuation_dim: int
    class_dim: int
    cone: Cone
    name: str = ''

    def __post_init__(self):
        if self.cone.ambient_dim != self.valuation_dim + self.class_dim:
            raise DimensionError(f"cone of dimension {self.cone.ambient_dim} for "
                                 f"n={self.valuation_dim}, rho={self.class_dim}")
        if self.cone.lineality:
            raise NotPointedError(f"global cone contains the line through {format_vec(self.cone.lineality[0])}",
                                  datum=self.cone.lineality[0])
        n = self.valuation_dim
        class_zero = [unit(n + j, n + self.class_dim) for j in range(self.class_dim)]
        kernel = ineqs_to_rays(self.cone.ineqs, self.cone.ambient_dim,
                               equations=list(self.cone.equations) + class_zero)
        if not kernel.is_zero:
            ray = kernel.rays[0] if kernel.rays else kernel.lineality[0]
            raise UnboundedFiberError(f"nonzero ray {format_vec(ray)} has zero class projection", datum=ray)
        if self.cone.equations:
            raise NotFullDimensionalError(
                f"global cone lies in the hyperplane {format_vec(self.cone.equations[0])} . x = 0",
                datum=self.cone.equations[0])

    @classmethod
    def from_rays(cls, valuation_dim: int, class_dim: int, rays, name: str = '') -> 'GlobalBody':
        return cls(valuation_dim, class_dim, rays_to_ineqs(rays, valuation_dim + class_dim), name)

    @classmethod
    def from_ineqs(cls, valuation_dim: int, class_dim: int, ineqs, name: str = '') -> 'GlobalBody':
        return cls(valuation_dim, class_dim, ineqs_to_rays(ineqs, valuation_dim + class_dim), name)

    @property
    def class_projection(self) -> LinMap:
        n, rho = self.valuation_dim, self.class_dim
        return LinMap.coordinate_projection(n + rho, range(n, n + rho))

    @cached_property
    def image_cone(self) -> Cone:
        """The pseudo-effective cone"""
        return self.cone.image(self.class_projection)

    @cached_property
    def chambers(self) -> Fan:
        fan = project_fan(face_fan(self.cone), self.class_projection)
        logger.info("%s: chamber fan with %d cones", self.name or 'body', len(fan))
        return fan

    @cached_property
    def basis(self) -> 'Basis':
        return minkowski_basis(self)


@dataclass(frozen=True)
class NumBody:
    """Numerical Newton-Okounkov body: the fiber over source_class"""

    polytope: Polytope
    source_class: ClassVec


@dataclass(frozen=True)
class BasisEntry:
    ray: IntVec
    body: NumBody


@dataclass(frozen=True)
class Basis:
    entries: Tuple[BasisEntry, ...]
    fan: Fan

    @property
    def rays(self) -> List[IntVec]:
        return [e.ray for e in self.entries]

    def index_of(self, ray: IntVec) -> int:
        for i, e in enumerate(self.entries):
            if e.ray == ray:
                return i
        raise DecompositionError(f"ray {format_vec(ray)} of the chamber fan is missing from the basis")


@dataclass(frozen=True)
class Decomposition:
    """Weights (basis index, alpha) sorted by index; sum(alpha * ray) is the class"""

    weights: Tuple[Tuple[int, Fraction], ...]

    def combination(self, basis: Basis, dim: int) -> RatVec:
        total = (Fraction(0),) * dim
        for i, w in self.weights:
            total = add(total, mul(w, basis.entries[i].ray))
        return total


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    lhs: Polytope
    rhs: Polytope
    decomposition: Decomposition


@dataclass(frozen=True)
class PairReport:
    """
    Outcome of the pair additivity check. When hypothesis_met is False the
    comparison is still reported but additivity is not expected.
    """

    hypothesis_met: bool
    ok: bool
    lhs: Polytope
    rhs: Polytope
    reason: str = ''

    @property
    def verdict(self) -> str:
        if not self.hypothesis_met:
            return 'hypothesis not met'
        return 'ok' if self.ok else 'mismatch'


def class_vector(body: GlobalBody, d: Sequence) -> ClassVec:
    d = vector(d)
    if len(d) != body.class_dim:
        raise DimensionError(f"class of dimension {len(d)} for rho={body.class_dim}")
    return d


def require_pseudo_effective(body: GlobalBody, d: Sequence) -> ClassVec:
    d = class_vector(body, d)
    if not body.image_cone.contains(d):
        raise NotPseudoEffectiveError(f"class {format_vec(d)} is not pseudo-effective")
    return d


def image_cone(body: GlobalBody) -> Cone:
    return body.image_cone


def is_big(body: GlobalBody, d: Sequence) -> bool:
    """Interior point of the pseudo-effective cone"""
    d = require_pseudo_effective(body, d)
    image = body.image_cone
    return not image.equations and all(dot(a, d) > 0 for a in image.ineqs)


def fiber(body: GlobalBody, d: Sequence) -> NumBody:
    """{y : (y, D) in cone}, by substituting D into the facet inequalities"""
    d = require_pseudo_effective(body, d)
    n = body.valuation_dim
    ineqs = [(a[:n], -dot(a[n:], d)) for a in body.cone.ineqs]
    return NumBody(Polytope.from_ineqs(ineqs, n), d)


def chambers(body: GlobalBody) -> Fan:
    return body.chambers


def minkowski_basis(body: GlobalBody) -> Basis:
    fan = body.chambers
    entries = tuple(BasisEntry(ray, fiber(body, ray)) for ray in sorted(fan.ray_generators()))
    return Basis(entries, fan)


def _exit_time(cone: Cone, base: RatVec, direction: RatVec) -> Optional[Fraction]:
    """max{t : base + t*direction in cone}, None when unbounded"""
    constraints = [Constraint.ge([dot(a, direction)], -dot(a, base)) for a in cone.ineqs]
    constraints += [Constraint.eq([dot(e, direction)], -dot(e, base)) for e in cone.equations]
    constraints.append(Constraint.ge([1], 0))
    result = lp_solve(LinProgram(vector([1]), tuple(constraints)))
    return result.value if result.is_optimal else None


def _ray_multiple(d: RatVec, ray: IntVec) -> Fraction:
    k = next(i for i, x in enumerate(ray) if x != 0)
    return d[k] / ray[k]


@dataclass
class _Splitter:
    """Recursive line-splitting of a class into chamber ray generators"""

    basis: Basis
    limit: int
    weights: Dict[int, Fraction] = field(default_factory=lambda: defaultdict(Fraction))

    def split(self, d: RatVec, factor: Fraction, depth: int):
        if is_zero(d) or factor == 0:
            return
        if depth > self.limit:
            raise AssertionError(f"decomposition recursion deeper than rho={self.limit}")
        cone = minimal_cone(self.basis.fan, d)
        if cone.dim == 1:
            ray = cone.rays[0]
            self.weights[self.basis.index_of(ray)] += factor * _ray_multiple(d, ray)
            return
        for ri, rj in permutations(cone.rays, 2):
            v = sub(ri, rj)
            t_plus = _exit_time(cone, d, v)
            t_minus = _exit_time(cone, d, neg(v))
            if t_plus is not None and t_minus is not None:
                break
        else:
            raise AssertionError(f"no bounded line through {format_vec(d)} in {cone}")
        d_a = add(d, mul(t_plus, v))
        d_b = sub(d, mul(t_minus, v))
        total = t_plus + t_minus
        logger.debug("split %s in %d-dim cone into %s and %s", format_vec(d), cone.dim,
                     format_vec(d_a), format_vec(d_b))
        for point, w in ((d_a, t_minus / total), (d_b, t_plus / total)):
            if not is_zero(point) and minimal_cone(self.basis.fan, point).dim >= cone.dim:
                raise AssertionError(f"boundary point {format_vec(point)} did not leave {cone}")
            self.split(point, factor * w, depth + 1)


def decompose(body: GlobalBody, basis: Basis, d: Sequence) -> Decomposition:
    """
    Write D as a nonnegative combination of basis rays.

    D on a ray of the fan is a multiple of its generator. Otherwise a line
    through D inside its minimal cone meets the relative boundary in two
    points of lower-dimensional cones; D is their convex combination and both
    are decomposed recursively.
    """
    d = require_pseudo_effective(body, d)
    splitter = _Splitter(basis, body.class_dim)
    splitter.split(d, Fraction(1), 0)
    return Decomposition(tuple(sorted((i, w) for i, w in splitter.weights.items() if w != 0)))


def weighted_sum(basis: Basis, decomposition: Decomposition, n: int) -> Polytope:
    total = Polytope.point((0,) * n)
    for i, w in decomposition.weights:
        total = minkowski_sum(total, scale(basis.entries[i].body.polytope, w))
    return total


def verify_decomposition(body: GlobalBody, basis: Basis, d: Sequence) -> VerificationReport:
    decomposition = decompose(body, basis, d)
    lhs = fiber(body, d).polytope
    rhs = weighted_sum(basis, decomposition, body.valuation_dim)
    return VerificationReport(lhs == rhs, lhs, rhs, decomposition)


def check_pair_additivity(body: GlobalBody, d1: Sequence, d2: Sequence, a, b) -> PairReport:
    """
    fiber(a*D1 + b*D2) = a*fiber(D1) + b*fiber(D2), provided D1 and D2 lie in
    the minimal chamber cone of a*D1 + b*D2. The hypothesis is checked, not assumed.
    """
    d1 = require_pseudo_effective(body, d1)
    d2 = require_pseudo_effective(body, d2)
    a, b = Fraction(a), Fraction(b)
    if a < 0 or b < 0:
        raise InputError(f"pair weights must be nonnegative, got {a} and {b}")
    combined = add(mul(a, d1), mul(b, d2))
    lhs = fiber(body, combined).polytope
    rhs = minkowski_sum(scale(fiber(body, d1).polytope, a), scale(fiber(body, d2).polytope, b))
    cone = minimal_cone(body.chambers, combined)
    reason = ''
    if not cone.contains(d1) or not cone.contains(d2):
        reason = f"no common chamber: minimal cone of {format_vec(combined)} is {cone}"
    return PairReport(not reason, lhs == rhs, lhs, rhs, reason)
