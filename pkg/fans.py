"""
Finite fans of rational polyhedral cones.

A "fan" here is what the projection construction produces: a finite set of
cones closed under taking faces and under pairwise intersection. Images of
the cones of a fan need not meet along common faces, so the projected set is
not a fan in the strict toric sense, only closed.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from errors import ContainmentError, DimensionError
from exact_arith import RatMat, RatVec, dot, unit
from polyhedra import Cone, faces, minimal_face, rays_to_ineqs

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinMap:
    """Linear map Q^domain_dim -> Q^codomain_dim given by its matrix"""

    matrix: RatMat

    @classmethod
    def identity(cls, dim: int) -> 'LinMap':
        return cls(RatMat.identity(dim))

    @classmethod
    def coordinate_projection(cls, dim: int, keep: Sequence[int]) -> 'LinMap':
        """Keep the listed coordinates, in order"""
        return cls(RatMat.of([unit(i, dim) for i in keep], dim))

    @property
    def domain_dim(self) -> int:
        return self.matrix.ncols

    @property
    def codomain_dim(self) -> int:
        return self.matrix.nrows

    def __call__(self, v: Sequence) -> RatVec:
        return self.matrix.apply(v)


def _cone_key(cone: Cone):
    return (cone.dim, cone.rays, cone.lineality)


@dataclass(frozen=True)
class Fan:
    ambient_dim: int
    cones: Tuple[Cone, ...]

    def cones_of_dim(self, d: int) -> List[Cone]:
        return [c for c in self.cones if c.dim == d]

    def ray_generators(self) -> List[Tuple[int, ...]]:
        """Primitive generators of the one-dimensional (pointed) cones"""
        return [c.rays[0] for c in self.cones if c.dim == 1 and c.is_pointed]

    @property
    def max_dim(self) -> int:
        return max((c.dim for c in self.cones), default=-1)

    def __len__(self) -> int:
        return len(self.cones)


def _make_fan(ambient_dim: int, cones: Iterable[Cone]) -> Fan:
    return Fan(ambient_dim, tuple(sorted(set(cones), key=_cone_key)))


def face_fan(cone: Cone) -> Fan:
    return _make_fan(cone.ambient_dim, (f.geometry for f in faces(cone)))


def _is_subcone(small: Cone, big: Cone) -> bool:
    return all(big.contains(g) for g in small.generators())


def _meet(a: Cone, b: Cone, cache: Dict[FrozenSet[Cone], Cone]) -> Cone:
    """a and b intersected, with the containment cases answered without a conversion"""
    if _is_subcone(a, b):
        return a
    if _is_subcone(b, a):
        return b
    key = frozenset((a, b))
    if key not in cache:
        cache[key] = a.intersect(b)
    return cache[key]


def close_fan(cones: Iterable[Cone], ambient_dim: Optional[int] = None) -> Fan:
    """
    Smallest set containing the cones that is closed under faces and pairwise
    intersections.

    First the intersections of subsets of the input cones, by a worklist that
    meets every new cone with each input cone; then all faces of those. A face
    of C1 meets a face of C2 in a face of C1 & C2, so nothing else is needed.
    """
    cones = list(cones)
    if ambient_dim is None:
        if not cones:
            raise DimensionError("ambient dimension of an empty fan must be given")
        ambient_dim = cones[0].ambient_dim
    for c in cones:
        if c.ambient_dim != ambient_dim:
            raise DimensionError(f"cone in dimension {c.ambient_dim} in a fan of dimension {ambient_dim}")

    inputs = sorted(set(cones), key=_cone_key)
    cache: Dict[FrozenSet[Cone], Cone] = {}
    meets = set(inputs)
    pending = list(inputs)
    while pending:
        cone = pending.pop()
        for other in inputs:
            meet = _meet(cone, other, cache)
            if meet not in meets:
                meets.add(meet)
                pending.append(meet)

    members: Set[Cone] = set()
    for cone in sorted(meets, key=_cone_key, reverse=True):
        if cone in members:
            continue
        members.update(f.geometry for f in faces(cone))
    logger.debug("close_fan: %d input cones, %d intersections -> %d cones",
                 len(inputs), len(meets), len(members))
    return _make_fan(ambient_dim, members)


def project_fan(fan: Fan, f: LinMap) -> Fan:
    if f.domain_dim != fan.ambient_dim:
        raise DimensionError(f"map from dimension {f.domain_dim} applied to a fan in dimension {fan.ambient_dim}")
    images = {c.image(f) for c in fan.cones}
    logger.debug("project_fan: %d cones -> %d distinct images", len(fan.cones), len(images))
    return close_fan(images, f.codomain_dim)


def minimal_cone(fan: Fan, x: Sequence) -> Cone:
    """Intersection of all cones containing x; it is itself a cone of the fan"""
    containing = [c for c in fan.cones if c.contains(x)]
    if not containing:
        raise ContainmentError(f"point {tuple(map(str, x))} lies in no cone of the fan")
    containing.sort(key=_cone_key)
    for candidate in containing:
        if candidate.dim > containing[0].dim:
            break
        if all(_is_subcone(candidate, c) for c in containing):
            return candidate
    # a fan closed under intersections always has a smallest containing cone
    raise AssertionError("fan is not closed under intersections")


def _facets(cone: Cone) -> List[Cone]:
    """Codimension-one faces: the generators tight on each facet inequality"""
    return [rays_to_ineqs([r for r in cone.rays if dot(a, r) == 0], cone.ambient_dim, cone.lineality)
            for a in cone.ineqs]


def _maximal_cones(cones: Sequence[Cone]) -> List[Cone]:
    """Cones contained in no other cone of the list"""
    maximal: List[Cone] = []
    for d in sorted({c.dim for c in cones}, reverse=True):
        level = [c for c in cones if c.dim == d and not any(_is_subcone(c, m) for m in maximal)]
        # equal-dimensional containment happens, e.g. a chamber inside the image of a facet
        maximal += [c for c in level if not any(o != c and _is_subcone(c, o) for o in level)]
    return maximal


def is_closed(fan: Fan) -> bool:
    """
    Closed under faces and pairwise intersections. Facets of every cone and
    meets of maximal cones suffice: other meets are faces of those.
    """
    members = set(fan.cones)
    if any(facet not in members for cone in fan.cones for facet in _facets(cone)):
        return False
    cache: Dict[FrozenSet[Cone], Cone] = {}
    return all(_meet(a, b, cache) in members for a, b in combinations(_maximal_cones(fan.cones), 2))


def relative_interior_contains(cone: Cone, x: Sequence) -> bool:
    return minimal_face(cone, x).geometry == cone
