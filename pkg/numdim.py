"""
Numerical Kodaira dimension of classes on a global body.

For a pseudo-effective class D and an interior class A the fibers over
D + tA, 0 < t <= t0, all lie over one chamber, so their volume is a
polynomial in t of degree at most n. The numerical dimension is n minus the
order of vanishing of that polynomial at t = 0, and it must agree with the
dimension of the fiber over D itself.

The polynomial is interpolated exactly from n + 1 samples and checked
against one more, so a segment that is too long is detected instead of
silently producing a wrong answer.

Distances are L-infinity distances, each one an exact LP.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import sympy

from errors import ChamberSegmentError, InputError
from exact_arith import (Constraint, LinProgram, MIN, RatVec, add, format_vec, is_zero, lp_solve,
                         mul, unit, vector)
from fans import minimal_cone, relative_interior_contains
from okounkov_core import GlobalBody, fiber, require_pseudo_effective
from polyhedra import Cone, Polytope, dim, minkowski_sum, scale, volume

logger = logging.getLogger(__name__)

MAX_HALVINGS = 64
OUTER_SLACK = 2
SAMPLE_DENOMINATOR = 64


def num_dim_fiber(body: GlobalBody, d: Sequence) -> int:
    return dim(fiber(body, d).polytope)


def pick_ample(body: GlobalBody) -> Tuple[int, ...]:
    """Sum of the primitive extreme ray generators of the image cone"""
    image = body.image_cone
    if image.is_zero:
        raise InputError("the image cone is {0}, there is no ample class")
    total = (0,) * body.class_dim
    for r in image.rays:
        total = tuple(x + y for x, y in zip(total, r))
    return total


def _require_ample(body: GlobalBody, a: Sequence) -> RatVec:
    a = require_pseudo_effective(body, a)
    if not relative_interior_contains(body.image_cone, a):
        raise InputError(f"class {format_vec(a)} is not in the relative interior of the image cone")
    return a


def _segment_is_stable(body: GlobalBody, d: RatVec, a: RatVec, delta: Fraction) -> bool:
    """
    The set of fan cones containing D + tA is the same for every t in (0, delta].
    """
    for cone in body.chambers.cones:
        interval = cone.line_interval(d, a)
        if interval is None:
            continue
        lo, hi = interval
        if lo == 0 and (hi is None or hi >= delta):
            continue
        if hi == 0 or lo > delta:
            continue
        return False
    return True


def chamber_segment(body: GlobalBody, d: Sequence, a: Sequence) -> Tuple[Fraction, Cone]:
    """
    Find t0 > 0 such that D + tA has one and the same minimal cone for all
    0 < t <= t0.

    Returns:
        (t0, minimal cone of the open segment)
    """
    d = require_pseudo_effective(body, d)
    a = _require_ample(body, a)
    delta = Fraction(1)
    previous = minimal_cone(body.chambers, add(d, a))
    for _ in range(MAX_HALVINGS):
        half = delta / 2
        current = minimal_cone(body.chambers, add(d, mul(half, a)))
        if current == previous and _segment_is_stable(body, d, a, delta):
            logger.debug("chamber segment of %s along %s: t0=%s in %s", format_vec(d), format_vec(a), delta, current)
            return delta, current
        delta, previous = half, current
    raise ChamberSegmentError(f"no chamber-stable segment from {format_vec(d)} along {format_vec(a)} "
                              f"after {MAX_HALVINGS} halvings")


@dataclass(frozen=True)
class VolPoly:
    """volume(fiber(D + tA)) = sum(coefficients[k] * t**k) for 0 < t <= t0"""

    coefficients: Tuple[Fraction, ...]
    t0: Fraction

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        return sum((c * t ** k for k, c in enumerate(self.coefficients)), Fraction(0))

    @property
    def order(self) -> Optional[int]:
        """Order of vanishing at t = 0, None for the zero polynomial"""
        return next((k for k, c in enumerate(self.coefficients) if c != 0), None)

    def __str__(self) -> str:
        t = sympy.Symbol('t')
        expr = sum(sympy.Rational(c.numerator, c.denominator) * t ** k for k, c in enumerate(self.coefficients))
        return str(sympy.expand(expr))


def _to_fraction(c) -> Fraction:
    c = sympy.Rational(c)
    return Fraction(int(c.p), int(c.q))


def _fiber_volume(body: GlobalBody, d: RatVec, a: RatVec, t: Fraction) -> Fraction:
    return volume(fiber(body, add(d, mul(t, a))).polytope)


def volume_polynomial(body: GlobalBody, d: Sequence, a: Sequence) -> VolPoly:
    n = body.valuation_dim
    d, a = vector(d), vector(a)
    t0, _ = chamber_segment(body, d, a)
    samples = [(t0 / 2 ** j, _fiber_volume(body, d, a, t0 / 2 ** j)) for j in range(n + 1)]
    t = sympy.Symbol('t')
    points = [(sympy.Rational(x.numerator, x.denominator), sympy.Rational(y.numerator, y.denominator))
              for x, y in samples]
    expr = sympy.interpolate(points, t)
    coefficients = [_to_fraction(c) for c in reversed(sympy.Poly(expr, t).all_coeffs())]
    coefficients += [Fraction(0)] * (n + 1 - len(coefficients))
    poly = VolPoly(tuple(coefficients), t0)

    held_out = t0 / 2 ** (n + 1)
    expected = _fiber_volume(body, d, a, held_out)
    if poly(held_out) != expected:
        raise ChamberSegmentError(f"chamber segment too short: interpolated volume {poly(held_out)} != "
                                  f"{expected} at t={held_out} for D={format_vec(d)}, A={format_vec(a)}")
    logger.debug("volume polynomial of %s along %s: %s", format_vec(d), format_vec(a), poly)
    return poly


def numerical_kodaira(body: GlobalBody, d: Sequence, a: Sequence) -> int:
    poly = volume_polynomial(body, d, a)
    if poly.order is None:
        raise AssertionError(f"fibers along {format_vec(d)} + t*{format_vec(a)} have zero volume")
    return body.valuation_dim - poly.order


def _inscribed_simplex(body: GlobalBody, a: Sequence) -> Tuple[Fraction, RatVec]:
    """
    Largest eps with z + conv{0, eps*e_1, ..., eps*e_n} inside fiber(A).

    One LP over (z, eps): every vertex z + eps*e_i satisfies the fiber's
    inequalities and equations.
    """
    poly = fiber(body, a).polytope
    n = body.valuation_dim
    constraints = [Constraint.ge(tuple(c) + (0,), b) for c, b in poly.ineqs]
    constraints += [Constraint.eq(tuple(c) + (0,), b) for c, b in poly.equations]
    for i in range(n):
        constraints += [Constraint.ge(tuple(c) + (c[i],), b) for c, b in poly.ineqs]
        constraints += [Constraint.eq(tuple(c) + (c[i],), b) for c, b in poly.equations]
    constraints.append(Constraint.ge(unit(n, n + 1), 0))
    result = lp_solve(LinProgram(vector(unit(n, n + 1)), tuple(constraints)))
    if not result.is_optimal:
        raise AssertionError(f"inscribed simplex LP for {format_vec(a)} is {result.status}")
    return result.value, result.witness[:n]


def inscribed_simplex_size(body: GlobalBody, a: Sequence) -> Fraction:
    return _inscribed_simplex(body, a)[0]


def _linf_distance(point: Sequence, target: Polytope) -> Fraction:
    """min over y in target of max_i |point_i - y_i|"""
    n = len(point)
    s = unit(n, n + 1)
    constraints = [Constraint.ge(tuple(c) + (0,), b) for c, b in target.ineqs]
    constraints += [Constraint.eq(tuple(c) + (0,), b) for c, b in target.equations]
    for i in range(n):
        # s >= point_i - y_i and s >= y_i - point_i
        constraints.append(Constraint.ge(add(s, unit(i, n + 1)), point[i]))
        constraints.append(Constraint.ge(add(s, mul(-1, unit(i, n + 1))), -Fraction(point[i])))
    result = lp_solve(LinProgram(vector(s), tuple(constraints), MIN))
    if not result.is_optimal:
        raise AssertionError(f"distance LP is {result.status}")
    return result.value


@dataclass(frozen=True)
class SandwichReport:
    """
    Inclusions checked at t = t0/2, ..., t0/2**k_max.

    inner: fiber(D) + t*z + t*simplex(epsilon) is inside fiber(D + tA), z the
    translation found with epsilon. outer: max vertex distance of
    fiber(D + tA) to fiber(D), divided by t.
    """

    t_samples: Tuple[Fraction, ...]
    epsilon: Fraction
    translation: RatVec
    inner_holds: Tuple[bool, ...]
    outer_ratios: Tuple[Fraction, ...]
    outer_constant: Fraction

    @property
    def inner_ok(self) -> bool:
        return all(self.inner_holds)

    @property
    def outer_ok(self) -> bool:
        return all(r <= OUTER_SLACK * self.outer_constant for r in self.outer_ratios)

    @property
    def ok(self) -> bool:
        return self.inner_ok and self.outer_ok


def sandwich_check(body: GlobalBody, d: Sequence, a: Sequence, k_max: int = 4) -> SandwichReport:
    if k_max < 1:
        raise InputError(f"k_max must be at least 1, got {k_max}")
    n = body.valuation_dim
    d, a = vector(d), vector(a)
    t0, _ = chamber_segment(body, d, a)
    epsilon, z = _inscribed_simplex(body, a)
    base = fiber(body, d).polytope
    simplex = Polytope.standard_simplex(epsilon, n) if epsilon > 0 else Polytope.point((0,) * n)

    t_samples, inner, ratios = [], [], []
    for k in range(1, k_max + 1):
        t = t0 / 2 ** k
        outer = fiber(body, add(d, mul(t, a))).polytope
        thickened = minkowski_sum(base, scale(simplex, t)).translate(mul(t, z))
        inner.append(outer.contains_polytope(thickened))
        distance = max(_linf_distance(w, base) for w in outer.vertices)
        ratios.append(distance / t)
        t_samples.append(t)
    report = SandwichReport(tuple(t_samples), epsilon, z, tuple(inner), tuple(ratios), ratios[0])
    logger.debug("sandwich of %s along %s: inner=%s outer=%s", format_vec(d), format_vec(a),
                 report.inner_ok, report.outer_ok)
    return report


def _cone_distance_to_ray(body: GlobalBody, d: RatVec, x: RatVec) -> Fraction:
    """L-infinity distance from x to {y in the cone : class(y) = lambda*D, lambda >= 0}"""
    dim_ = len(x)
    n = body.valuation_dim
    # variables (y, lambda, s)
    width = dim_ + 2
    lam, s = unit(dim_, width), unit(dim_ + 1, width)
    constraints = [Constraint.ge(tuple(c) + (0, 0), 0) for c in body.cone.ineqs]
    for j, dj in enumerate(d):
        constraints.append(Constraint.eq(add(unit(n + j, width), mul(-dj, lam))))
    constraints.append(Constraint.ge(lam))
    for i in range(dim_):
        e = unit(i, width)
        constraints.append(Constraint.ge(add(s, e), x[i]))
        constraints.append(Constraint.ge(add(s, mul(-1, e)), -x[i]))
    result = lp_solve(LinProgram(vector(s), tuple(constraints), MIN))
    if not result.is_optimal:
        raise AssertionError(f"cone distance LP is {result.status}")
    return result.value


def _class_distance_to_ray(d: RatVec, c: RatVec) -> Fraction:
    """L-infinity distance from c to the ray through D"""
    # variables (mu, s)
    constraints = [Constraint.ge((1, 0))]
    for j, dj in enumerate(d):
        constraints.append(Constraint.ge((dj, 1), c[j]))
        constraints.append(Constraint.ge((-dj, 1), -c[j]))
    result = lp_solve(LinProgram(vector((0, 1)), tuple(constraints), MIN))
    if not result.is_optimal:
        raise AssertionError(f"ray distance LP is {result.status}")
    return result.value


def rho_ratio(body: GlobalBody, d: Sequence, x: Sequence) -> Optional[Fraction]:
    """
    d(x, f^-1(R)) / d(f(x), R) for R the ray through D, both L-infinity.

    Returns None when f(x) lies on R, where the ratio is undefined.
    """
    d = require_pseudo_effective(body, d)
    if is_zero(d):
        raise InputError("the ray through the zero class is not a ray")
    x = vector(x)
    if not body.cone.contains(x):
        raise InputError(f"point {format_vec(x)} is not in the global cone")
    denominator = _class_distance_to_ray(d, body.class_projection(x))
    if denominator == 0:
        return None
    return _cone_distance_to_ray(body, d, x) / denominator


@dataclass(frozen=True)
class RhoEstimate:
    max_ratio: Optional[Fraction]
    samples: int
    rejected: int


def _random_cone_point(body: GlobalBody, rng: random.Random) -> RatVec:
    x = (Fraction(0),) * body.cone.ambient_dim
    for r in body.cone.rays:
        w = Fraction(rng.randint(0, SAMPLE_DENOMINATOR), rng.randint(1, SAMPLE_DENOMINATOR))
        x = add(x, mul(w, r))
    return x


def rho_bound_estimate(body: GlobalBody, d: Sequence, sample_count: int, seed: int) -> RhoEstimate:
    """
    Largest observed rho ratio over seeded random points of the global cone.

    Points are nonnegative combinations of the cone's rays with weights
    p/q, 0 <= p <= 64, 1 <= q <= 64. Points over the ray through D are
    rejected and do not count. Each counted sample also checks that the
    ratio at 2x equals the ratio at x.
    """
    if sample_count <= 0:
        raise InputError(f"sample_count must be positive, got {sample_count}")
    d = require_pseudo_effective(body, d)
    rng = random.Random(seed)
    best: Optional[Fraction] = None
    samples = rejected = 0
    for _ in range(20 * sample_count):
        if samples == sample_count:
            break
        x = _random_cone_point(body, rng)
        ratio = rho_ratio(body, d, x)
        if ratio is None:
            rejected += 1
            continue
        doubled = rho_ratio(body, d, mul(2, x))
        if doubled != ratio:
            raise AssertionError(f"rho ratio not scale invariant at {format_vec(x)}: {ratio} != {doubled}")
        samples += 1
        best = ratio if best is None else max(best, ratio)
    logger.info("rho estimate for %s: %d samples, %d rejected, max %s", format_vec(d), samples, rejected, best)
    return RhoEstimate(best, samples, rejected)
