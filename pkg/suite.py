"""
Batch verification of global bodies.

For every instance: build the chambers and the Minkowski basis, sample
classes (basis rays first, then interior, wall and ray points in turn), and
check on each class
  - the basis decomposition reproduces the fiber,
  - pair additivity for a second class from the same minimal cone,
  - dim fiber(D) <= nu(D), then dim fiber(D) == nu(D).
Failures are recorded with both sides in canonical form, never raised.
"""

import json
import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from errors import OkounkovError
from exact_arith import RatVec, add, format_vec, mul
from fans import is_closed, minimal_cone
from numdim import num_dim_fiber, numerical_kodaira, pick_ample
from okounkov_core import Basis, GlobalBody, check_pair_additivity, verify_decomposition
from polyhedra import Cone

logger = logging.getLogger(__name__)

CHECKS = ('decomposition', 'pair', 'numdim_bound', 'numdim_equal')
STRATA = ('interior', 'wall', 'ray')
WEIGHT_RANGE = 16


@dataclass(frozen=True)
class FailureRecord:
    instance: str
    check: str
    class_vector: Tuple[str, ...]
    lhs: str
    rhs: str

    def to_dict(self) -> Dict:
        return {'instance': self.instance, 'check': self.check, 'class': list(self.class_vector),
                'lhs': self.lhs, 'rhs': self.rhs}


@dataclass
class InstanceReport:
    name: str
    basis_size: int = 0
    chamber_count: int = 0
    sampled: int = 0
    fan_closed: bool = True
    passed: Dict[str, int] = field(default_factory=lambda: {c: 0 for c in CHECKS})
    failed: Dict[str, int] = field(default_factory=lambda: {c: 0 for c in CHECKS})
    pair_skipped: int = 0
    failures: List[FailureRecord] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.fan_closed and not self.failures

    def record(self, check: str, ok: bool, d: RatVec, lhs, rhs):
        if ok:
            self.passed[check] += 1
            return
        self.failed[check] += 1
        self.failures.append(FailureRecord(self.name, check, tuple(map(str, d)), str(lhs), str(rhs)))

    def to_dict(self, include_timings: bool = False) -> Dict:
        data = {
            'name': self.name,
            'basis_size': self.basis_size,
            'chamber_count': self.chamber_count,
            'sampled_classes': self.sampled,
            'fan_closed': self.fan_closed,
            'checks': {c: {'passed': self.passed[c], 'failed': self.failed[c]} for c in CHECKS},
            'pair_skipped': self.pair_skipped,
            'failures': [f.to_dict() for f in self.failures],
        }
        if include_timings:
            data['seconds'] = round(self.seconds, 3)
        return data


@dataclass(frozen=True)
class SuiteReport:
    instances: Tuple[InstanceReport, ...]
    samples_per_instance: int
    seed: int

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.instances)

    @property
    def verdict(self) -> str:
        return 'pass' if self.ok else 'fail'

    def totals(self) -> Dict[str, Dict[str, int]]:
        return {c: {'passed': sum(r.passed[c] for r in self.instances),
                    'failed': sum(r.failed[c] for r in self.instances)} for c in CHECKS}

    def to_json(self, include_timings: bool = False) -> str:
        data = {
            'seed': self.seed,
            'samples_per_instance': self.samples_per_instance,
            'instances': [r.to_dict(include_timings) for r in self.instances],
            'totals': self.totals(),
            'verdict': self.verdict,
        }
        return json.dumps(data, indent=2, sort_keys=True)


def _weight(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, WEIGHT_RANGE), rng.randint(1, WEIGHT_RANGE))


def _interior_point(cone: Cone, rng: random.Random) -> RatVec:
    """Positive combination of all generators: a relative interior point"""
    x = (Fraction(0),) * cone.ambient_dim
    for g in cone.generators():
        x = add(x, mul(_weight(rng), g))
    return x


def sample_classes(body: GlobalBody, count: int, rng: random.Random) -> List[RatVec]:
    """
    Basis rays first, then interior, wall and ray points in turn.

    Interior points come from maximal cones of the chamber fan, wall points
    from cones of dimension between 2 and the maximum (exclusive), ray points are
    positive multiples of the basis rays.
    """
    fan = body.chambers
    rays = [tuple(Fraction(x) for x in r) for r in body.basis.rays]
    maximal = fan.cones_of_dim(fan.max_dim)
    walls = [c for c in fan.cones if 2 <= c.dim < fan.max_dim]
    classes = rays[:count]
    turn = 0
    while len(classes) < count:
        stratum = STRATA[turn % len(STRATA)]
        turn += 1
        if stratum == 'wall' and walls:
            classes.append(_interior_point(rng.choice(walls), rng))
        elif stratum == 'ray' and rays:
            classes.append(mul(_weight(rng), rng.choice(rays)))
        else:
            classes.append(_interior_point(rng.choice(maximal), rng))
    return classes


def _guarded(report: InstanceReport, check: str, d: RatVec, run):
    try:
        run()
    except (OkounkovError, AssertionError) as exc:
        report.record(check, False, d, type(exc).__name__, exc)


def check_instance(body: GlobalBody, samples: int, seed: int, basis: Optional[Basis] = None) -> InstanceReport:
    """Run every check on one body; basis defaults to the body's own Minkowski basis"""
    started = time.perf_counter()
    report = InstanceReport(body.name)
    rng = random.Random(f"{seed}/{body.name}")
    fan = body.chambers
    basis = basis or body.basis
    report.basis_size = len(basis.entries)
    report.chamber_count = len(fan)
    report.fan_closed = is_closed(fan)
    ample = pick_ample(body)
    classes = sample_classes(body, samples, rng)
    report.sampled = len(classes)

    for d in classes:
        def decomposition():
            result = verify_decomposition(body, basis, d)
            report.record('decomposition', result.ok, d, result.lhs, result.rhs)

        def pair():
            d2 = _interior_point(minimal_cone(fan, d), rng)
            result = check_pair_additivity(body, d, d2, _weight(rng), _weight(rng))
            if not result.hypothesis_met:
                report.pair_skipped += 1
                return
            report.record('pair', result.ok, d, result.lhs, result.rhs)

        numdim = {}

        def numdim_bound():
            numdim['fiber'] = num_dim_fiber(body, d)
            numdim['nu'] = numerical_kodaira(body, d, ample)
            report.record('numdim_bound', numdim['fiber'] <= numdim['nu'], d, numdim['fiber'], numdim['nu'])

        def numdim_equal():
            fiber_dim, nu = numdim.get('fiber', 'unavailable'), numdim.get('nu', 'unavailable')
            report.record('numdim_equal', 'nu' in numdim and fiber_dim == nu, d, fiber_dim, nu)

        _guarded(report, 'decomposition', d, decomposition)
        _guarded(report, 'pair', d, pair)
        _guarded(report, 'numdim_bound', d, numdim_bound)
        _guarded(report, 'numdim_equal', d, numdim_equal)

    report.seconds = time.perf_counter() - started
    logger.info("%s: %d classes, %d failures in %.2fs", body.name, report.sampled,
                len(report.failures), report.seconds)
    return report


def _check_instance_job(args) -> InstanceReport:
    return check_instance(*args)


def run_suite(instances: Sequence[GlobalBody], samples_per_instance: int, seed: int,
              jobs: int = 1) -> SuiteReport:
    jobs_args = [(body, samples_per_instance, seed) for body in instances]
    if jobs > 1 and len(jobs_args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_check_instance_job, jobs_args))
    else:
        reports = [_check_instance_job(args) for args in jobs_args]
    reports.sort(key=lambda r: r.name)
    return SuiteReport(tuple(reports), samples_per_instance, seed)


def format_failure(failure: FailureRecord) -> str:
    return f"{failure.instance} [{failure.check}] D={format_vec(failure.class_vector)}: {failure.lhs} != {failure.rhs}"
