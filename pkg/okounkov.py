#!/usr/bin/env python3
"""
Okounkov body toolkit
Command-line entry point: Minkowski bases, chamber fans, fibers,
decompositions, numerical dimensions and the batch verification suite
for global bodies given as instance files.

Exit codes: 0 all checks pass, 1 a verification failed, 2 invalid input,
3 class outside the pseudo-effective cone.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from errors import InputError, NotPseudoEffectiveError, OkounkovError
from exact_arith import format_vec, rat
from instances import FAMILIES, generate_instance, load_instance, load_instances
from numdim import (num_dim_fiber, numerical_kodaira, pick_ample, rho_bound_estimate, sandwich_check,
                    volume_polynomial)
from okounkov_core import decompose, fiber, is_big, verify_decomposition
from suite import format_failure, run_suite

DEFAULT_CONFIG = {
    'verify': {
        'samples': 100,
        'seed': 42,
        'jobs': 1,
        'format': 'table',
    }
}


def load_config(config_file='config.json'):
    """Load configuration from JSON file, falling back to the defaults when it does not exist"""
    config_path = Path(__file__).parent / config_file
    config = {section: dict(values) for section, values in DEFAULT_CONFIG.items()}
    if not config_path.exists():
        return config
    with open(config_path, 'r', encoding='utf-8') as f:
        loaded = json.load(f)
    for section, values in loaded.items():
        config.setdefault(section, {}).update(values)
    return config


def parse_class(text):
    """'1,1/2,0' -> (1, 1/2, 0)"""
    try:
        return tuple(rat(x.strip()) for x in text.split(','))
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _strs(v):
    return [str(x) for x in v]


def _emit(args, data, lines):
    if args.format == 'json':
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def cmd_basis(args, config):
    body = load_instance(Path(args.file))
    basis = body.basis
    data = {'basis': [{'ray': list(e.ray), 'vertices': [_strs(v) for v in e.body.polytope.vertices]}
                      for e in basis.entries]}
    lines = [f"Minkowski basis of {body.name}: {len(basis.entries)} elements"]
    for e in basis.entries:
        lines.append(f"  {format_vec(e.ray)} -> {e.body.polytope}")
    _emit(args, data, lines)
    return 0


def cmd_chambers(args, config):
    body = load_instance(Path(args.file))
    fan = body.chambers
    data = {'cones': [{'dim': c.dim, 'rays': [list(r) for r in c.rays]} for c in fan.cones]}
    lines = [f"Chamber fan of {body.name}: {len(fan)} cones"]
    for d in range(fan.max_dim + 1):
        for c in fan.cones_of_dim(d):
            lines.append(f"  dim {d}: {c}")
    _emit(args, data, lines)
    return 0


def cmd_fiber(args, config):
    body = load_instance(Path(args.file))
    polytope = fiber(body, args.class_).polytope
    dim = num_dim_fiber(body, args.class_)
    big = is_big(body, args.class_)
    data = {'class': _strs(args.class_), 'vertices': [_strs(v) for v in polytope.vertices],
            'dim': dim, 'big': big}
    lines = [f"Fiber over {format_vec(args.class_)}: {polytope}",
             f"  dimension: {dim}",
             f"  big: {'yes' if big else 'no'}"]
    _emit(args, data, lines)
    return 0


def cmd_decompose(args, config):
    body = load_instance(Path(args.file))
    basis = body.basis
    decomposition = decompose(body, basis, args.class_)
    report = verify_decomposition(body, basis, args.class_)
    terms = [(str(w), basis.entries[i].ray) for i, w in decomposition.weights]
    data = {'class': _strs(args.class_), 'weights': [{'weight': w, 'ray': list(r)} for w, r in terms],
            'fiber': str(report.lhs), 'sum': str(report.rhs), 'verified': report.ok}
    lines = [f"{format_vec(args.class_)} = " + (' + '.join(f"{w}*{format_vec(r)}" for w, r in terms) or '0')]
    if report.ok:
        lines.append(f"✓ fiber {report.lhs} = weighted sum of basis bodies")
    else:
        lines.append(f"❌ fiber {report.lhs} != weighted sum {report.rhs}")
    _emit(args, data, lines)
    return 0 if report.ok else 1


def cmd_numdim(args, config):
    body = load_instance(Path(args.file))
    ample = args.ample or pick_ample(body)
    dim = num_dim_fiber(body, args.class_)
    poly = volume_polynomial(body, args.class_, ample)
    nu = numerical_kodaira(body, args.class_, ample)
    sandwich = sandwich_check(body, args.class_, ample, args.k_max)
    ok = dim == nu and sandwich.ok
    data = {
        'class': _strs(args.class_), 'ample': _strs(ample), 'dim_fiber': dim, 'nu': nu,
        'volume_polynomial': _strs(poly.coefficients), 't0': str(poly.t0),
        'sandwich': {
            't': _strs(sandwich.t_samples), 'epsilon': str(sandwich.epsilon),
            'translation': _strs(sandwich.translation), 'inner': list(sandwich.inner_holds),
            'outer_ratios': _strs(sandwich.outer_ratios), 'outer_constant': str(sandwich.outer_constant),
            'ok': sandwich.ok,
        },
        'ok': ok,
    }
    lines = [
        f"Class {format_vec(args.class_)}, ample {format_vec(ample)}",
        f"  dim fiber: {dim}",
        f"  nu:        {nu}",
        f"  vol(D+tA): {poly}  for 0 < t <= {poly.t0}",
        f"  sandwich (epsilon={sandwich.epsilon}):",
    ]
    for t, inner, ratio in zip(sandwich.t_samples, sandwich.inner_holds, sandwich.outer_ratios):
        lines.append(f"    t={t}: inner {'✓' if inner else '❌'}  outer ratio {ratio}")
    if not sandwich.outer_ok:
        lines.append(f"⚠️  outer ratios exceed 2 x {sandwich.outer_constant}")
    lines.append("✓ dim fiber = nu" if dim == nu else "❌ dim fiber != nu")
    _emit(args, data, lines)
    return 0 if ok else 1


def cmd_rho(args, config):
    body = load_instance(Path(args.file))
    estimate = rho_bound_estimate(body, args.class_, args.samples, args.seed)
    data = {'class': _strs(args.class_), 'max_ratio': None if estimate.max_ratio is None else str(estimate.max_ratio),
            'samples': estimate.samples, 'rejected': estimate.rejected}
    lines = [f"rho ratio for the ray through {format_vec(args.class_)}",
             f"  samples: {estimate.samples} (rejected {estimate.rejected})",
             f"  max ratio: {estimate.max_ratio if estimate.max_ratio is not None else '-'}"]
    if estimate.samples < args.samples:
        lines.append(f"⚠️  only {estimate.samples} of {args.samples} samples were usable")
    _emit(args, data, lines)
    return 0


def cmd_verify(args, config):
    defaults = config['verify']
    samples = args.samples if args.samples is not None else defaults['samples']
    seed = args.seed if args.seed is not None else defaults['seed']
    jobs = args.jobs if args.jobs is not None else defaults['jobs']
    if args.format is None:
        args.format = defaults['format']
    bodies = load_instances(args.path)
    report = run_suite(bodies, samples, seed, jobs)
    if args.format == 'json':
        print(report.to_json(include_timings=args.timings))
        return 0 if report.ok else 1

    print("=" * 70)
    print(f"Verification suite: {len(bodies)} instances, {samples} classes each, seed {seed}")
    print("=" * 70)
    for r in report.instances:
        status = '✓' if r.ok else '❌'
        counts = '  '.join(f"{c} {r.passed[c]}/{r.passed[c] + r.failed[c]}" for c in r.passed)
        line = f"{status} {r.name}: basis {r.basis_size}, {r.chamber_count} cones, {counts}"
        if r.pair_skipped:
            line += f", {r.pair_skipped} pairs skipped"
        if args.timings:
            line += f" ({r.seconds:.2f}s)"
        print(line)
        if not r.fan_closed:
            print("   chamber fan is not closed")
        for failure in r.failures:
            print(f"   {format_failure(failure)}")
    print("=" * 70)
    print(f"{'✓' if report.ok else '❌'} verdict: {report.verdict}")
    return 0 if report.ok else 1


def cmd_gen(args, config):
    params = {k: v for k, v in (('n', args.n), ('rho', args.rho), ('rays', args.rays),
                                ('max_coeff', args.max_coeff), ('scale', args.scale)) if v is not None}
    instance = generate_instance(args.family, params, args.seed)
    text = instance.to_json() + '\n'
    if args.output:
        with open(args.output, 'w', encoding='utf-8') as f:
            f.write(text)
        print(f"✓ Wrote {instance.name} to {args.output}")
    else:
        print(text, end='')
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--verbose', action='store_true', help='Log debug output to stderr')
    common.add_argument('--format', choices=('table', 'json'), default=None, help='Output format')

    def with_class(p):
        p.add_argument('file', help='Instance file')
        p.add_argument('--class', dest='class_', type=parse_class, required=True,
                       help='Class vector, e.g. 1,1/2')
        return p

    parser = argparse.ArgumentParser(
        description='Okounkov body toolkit - exact polyhedral computations on global bodies'
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('basis', parents=[common], help='Print the Minkowski basis')
    p.add_argument('file', help='Instance file')
    p.set_defaults(handler=cmd_basis)

    p = sub.add_parser('chambers', parents=[common], help='Print the projected chamber fan')
    p.add_argument('file', help='Instance file')
    p.set_defaults(handler=cmd_chambers)

    with_class(sub.add_parser('fiber', parents=[common], help='Print the fiber over a class')).set_defaults(
        handler=cmd_fiber)
    with_class(sub.add_parser('decompose', parents=[common], help='Decompose a class in the basis')).set_defaults(
        handler=cmd_decompose)

    p = with_class(sub.add_parser('numdim', parents=[common], help='Numerical dimension of a class'))
    p.add_argument('--ample', type=parse_class, default=None, help='Interior class (default: generator sum)')
    p.add_argument('--k-max', type=int, default=4, help='Number of sandwich samples')
    p.set_defaults(handler=cmd_numdim)

    p = with_class(sub.add_parser('rho', parents=[common], help='Estimate the rho ratio bound'))
    p.add_argument('--samples', type=int, default=1000, help='Number of sample points')
    p.add_argument('--seed', type=int, default=42, help='Random seed')
    p.set_defaults(handler=cmd_rho)

    p = sub.add_parser('verify', parents=[common], help='Run the verification suite')
    p.add_argument('path', help='Instance file or directory of instance files')
    p.add_argument('--samples', type=int, default=None, help='Classes per instance')
    p.add_argument('--seed', type=int, default=None, help='Random seed')
    p.add_argument('--jobs', type=int, default=None, help='Parallel worker processes')
    p.add_argument('--timings', action='store_true', help='Include per-instance timings')
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser('gen', parents=[common], help='Generate an instance file')
    p.add_argument('--family', choices=FAMILIES, required=True, help='Instance family')
    p.add_argument('--n', type=int, default=None, help='Valuation dimension')
    p.add_argument('--rho', type=int, default=None, help='Class dimension (random)')
    p.add_argument('--rays', type=int, default=None, help='Number of rays (random)')
    p.add_argument('--max-coeff', type=int, default=None, help='Largest ray coefficient (random)')
    p.add_argument('--scale', type=int, default=None, help='Simplex scale (simplex_product)')
    p.add_argument('--seed', type=int, default=0, help='Random seed')
    p.add_argument('-o', '--output', default=None, help='Output file (default: stdout)')
    p.set_defaults(handler=cmd_gen)
    return parser


def main(argv=None):
    """Main application entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, format='%(levelname)s %(name)s: %(message)s')

    try:
        config = load_config()
    except (OSError, json.JSONDecodeError) as e:
        print(f"Error loading configuration: {e}")
        return 2
    if args.format is None and args.command != 'verify':
        args.format = 'table'

    try:
        return args.handler(args, config)
    except NotPseudoEffectiveError as e:
        print(f"❌ {e}")
        return 3
    except InputError as e:
        reason = getattr(e, 'reason', None)
        print(f"❌ Invalid input ({reason}): {e}" if reason else f"❌ Invalid input: {e}")
        return 2
    except (OSError, json.JSONDecodeError) as e:
        print(f"❌ {e}")
        return 2
    except OkounkovError as e:
        print(f"❌ {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
