import argparse
import logging
import os
import sys

import numpy

from preserver_lab import __version__
from preserver_lab.algebra.classify import pencil_relation
from preserver_lab.algebra.components import EXACT, FLOAT, PLUS, MINUS, SEED_ENV, SCHEMA_VERSION
from preserver_lab.algebra.components.scalar import EXACT_SCALAR
from preserver_lab.algebra.domains import BOUNDARY
from preserver_lab.analysis import preservers as P
from preserver_lab.analysis import report as R
from preserver_lab.analysis.operators import CIRC, GT_TRUNC, symbol
from preserver_lab.analysis.stab2 import gen_real_stable, jsonable
from preserver_lab.errors import PreserverLabError, ValidationError
from preserver_lab.inputs import parse_spec, build_operator, multiplier_sequence, shorthand_domain, SHORTHANDS

log = logging.getLogger(__name__)

EXIT_CODES = {P.PRESERVER: 0, P.NON_PRESERVER: 1, P.UNKNOWN: 2}
INTERNAL_ERROR = 5

ANALYZE_PROBLEMS = (P.HYP, P.HYPC, P.STAB, P.CIRCULAR, P.BOUNDARY_PROBLEM, P.SWEEP, P.TRANSCENDENTAL,
                    P.MULTIPLIER, P.TRICHOTOMY)
SWEEP_TARGETS = (P.HYP, P.HYPC, P.STAB, P.CIRCULAR, P.BOUNDARY_PROBLEM)
GENERATE_KINDS = ('real_stable_2d', 'hyperbolic_1d', 'stable_1d', 'interlacing_pair', 'domain_rooted')
SYMBOL_KINDS = {'plus': PLUS, 'minus': MINUS, 'circ': CIRC, 'gt': GT_TRUNC}


def _seed(args, options=None):
    if args.seed is not None:
        return args.seed
    if options and options.get('seed') is not None:
        return options['seed']
    value = os.environ.get(SEED_ENV)
    if value is None:
        return 0
    try:
        return int(value)
    except ValueError:
        raise ValidationError('%s must be an integer, got %r' % (SEED_ENV, value))


def _option(args, options, name, default=None):
    value = getattr(args, name, None)
    if value is not None:
        return value
    return options.get(name, default)


def _domain(args, spec):
    if getattr(args, 'domain', None) is not None:
        return shorthand_domain(args.domain)
    return spec.domain


def _require_domain(domain, problem):
    if domain is None:
        raise ValidationError('problem %s needs a domain (--domain or a "domain" entry)' % problem, '/domain')
    return domain.mobius


def _run(problem, T, spec, domain, opt):
    n, N, budget, seed = opt['n'], opt['N'], opt['budget'], opt['seed']
    if problem == P.HYP:
        return P.finitehyp_classify(T, n, budget, seed)
    if problem == P.HYPC:
        return P.finitehypC_classify(T, n, budget, seed)
    if problem == P.STAB:
        return P.finitestab_classify(T, n, budget, seed)
    if problem == P.TRICHOTOMY:
        return P.trichotomy_classify(T, n, budget, seed)
    if problem == P.CIRCULAR:
        return P.circular_classify(T, n, _require_domain(domain, problem), opt['semantics'], budget, seed)
    if problem == P.BOUNDARY_PROBLEM:
        return P.boundary_classify(T, n, _require_domain(domain, problem), opt['semantics'], budget, seed)
    if problem == P.SWEEP:
        target = opt['target']
        mobius = _require_domain(domain, target) if target in (P.CIRCULAR, P.BOUNDARY_PROBLEM) else None
        return P.algebraic_sweep(T, N, target, mobius, opt['semantics'], budget, seed)
    if problem == P.TRANSCENDENTAL:
        return P.transcendental_probe(T, N, opt['target'], budget, seed)
    lam = multiplier_sequence(spec.operator)
    if lam is None:
        raise ValidationError('the multiplier test needs a multiplier representation', '/representation')
    return P.multiplier_test(lam, N)


def analyze_cmd(args):
    spec = parse_spec(args.spec, args.backend, args.tolerance)
    if spec.operator is None:
        raise ValidationError('analyze needs an operator representation', '/representation')
    options = spec.options
    problem = _option(args, options, 'problem', P.STAB)
    if problem not in ANALYZE_PROBLEMS:
        raise ValidationError('unknown problem %r' % problem, '/options/problem')
    T = build_operator(spec.operator)
    domain = _domain(args, spec)
    opt = {
        'n': _option(args, options, 'n', T.n),
        'N': _option(args, options, 'N', T.n),
        'semantics': _option(args, options, 'semantics', P.PB3),
        'target': _option(args, options, 'target', P.STAB),
        'budget': _option(args, options, 'budget'),
        'seed': _seed(args, options),
    }
    log.info('analyzing %s (%s, degree bound %d) for %s', args.spec, spec.operator.kind, T.n, problem)

    report = _run(problem, T, spec, domain, opt)
    R.verify_report(report, T, domain and domain.mobius, multiplier_sequence(spec.operator))
    metadata = dict(opt, problem=problem, backend=T.scalar.backend, tolerance=T.scalar.tolerance,
                    domain=None if domain is None else domain.mobius.to_json(), version=__version__)
    if args.format == 'text':
        print(R.render_text(report, metadata))
    else:
        print(R.render_json(R.to_document(report, metadata)))
    return EXIT_CODES[report.verdict]


def _random_roots(rng, degree, problem, mobius=None):
    region = P.region_for(problem, mobius)
    return P.from_roots([region.sample_root(rng) for _ in range(degree)])


def _interlacing_pair(rng, degree):
    points = sorted(set(int(x) for x in rng.choice(numpy.arange(-4 * degree, 4 * degree + 1), 2 * degree - 1,
                                                    replace=False)))
    f = P.from_roots([EXACT_SCALAR.convert(x) for x in points[0::2]])
    g = P.from_roots([EXACT_SCALAR.convert(x) for x in points[1::2]])
    return {'f': f.to_json(), 'g': g.to_json(), 'g_ll_f': pencil_relation(g, f).f_ll_g}


def _generate_item(kind, degree, seed, domain):
    rng = numpy.random.default_rng(seed)
    if kind == 'real_stable_2d':
        f, cert = gen_real_stable(degree, seed)
        return {'poly': f.to_json(), 'certificate': cert.to_json()}
    if kind == 'hyperbolic_1d':
        return {'poly': _random_roots(rng, degree, P.HYP).to_json()}
    if kind == 'stable_1d':
        return {'poly': _random_roots(rng, degree, P.STAB).to_json()}
    if kind == 'interlacing_pair':
        return _interlacing_pair(rng, degree)
    if domain is None:
        raise ValidationError('domain_rooted fixtures need --domain', '/domain')
    problem = P.BOUNDARY_PROBLEM if domain.view == BOUNDARY else P.CIRCULAR
    return {'poly': _random_roots(rng, degree, problem, domain.mobius).to_json(), 'domain': domain.shorthand}


def generate_cmd(args):
    seed = _seed(args)
    domain = shorthand_domain(args.domain) if args.domain else None
    items = [_generate_item(args.kind, args.degree, seed + i, domain) for i in range(args.count)]
    document = {'schema_version': SCHEMA_VERSION, 'kind': args.kind, 'degree': args.degree, 'seed': seed,
                'count': args.count, 'items': items}
    text = R.render_json(document)
    if args.out:
        with open(args.out, 'w') as f:
            f.write(text + '\n')
        log.info('wrote %d %s fixtures to %s', args.count, args.kind, args.out)
    else:
        print(text)
    return 0


def symbol_cmd(args):
    spec = parse_spec(args.spec, args.backend, args.tolerance)
    if spec.operator is None:
        raise ValidationError('symbol needs an operator representation', '/representation')
    T = build_operator(spec.operator)
    n = T.n if args.n is None else args.n
    kind = SYMBOL_KINDS[args.kind]
    domain = _domain(args, spec)
    mobius = _require_domain(domain, 'circ') if kind == CIRC else None
    result = symbol(T, n, kind, mobius)
    if kind == GT_TRUNC:
        polys = {'truncations': result.truncations(), 'series': result.as_poly()}
    else:
        polys = {'symbol': result}
    if args.format == 'text':
        for name, value in polys.items():
            values = value if isinstance(value, list) else [value]
            for k, p in enumerate(values):
                print('%s%s: %s' % (name, '[%d]' % k if isinstance(value, list) else '', p))
    else:
        document = {'schema_version': SCHEMA_VERSION, 'kind': args.kind, 'n': n, 'polys': polys}
        print(R.render_json(jsonable(document)))
    return 0


def _spec_arguments(p):
    p.add_argument('spec', nargs='?', default='-', help='operator spec JSON file, or - for stdin')
    p.add_argument('--domain', choices=sorted(SHORTHANDS), help='domain shorthand, overriding the spec')
    p.add_argument('--backend', choices=(EXACT, FLOAT), help='scalar backend (default: the spec\'s, else exact)')
    p.add_argument('--tolerance', type=float, help='zero tolerance of the float backend')
    p.add_argument('--format', choices=('json', 'text'), default='json')


def build_parser():
    parser = argparse.ArgumentParser(prog='preserver-lab',
                                     description='Classify linear operators that preserve root-location classes')
    parser.add_argument('--verbose', action='store_true', help='debug logging')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('analyze', help='classify the operator of a spec')
    _spec_arguments(p)
    p.add_argument('--problem', choices=ANALYZE_PROBLEMS)
    p.add_argument('--target', choices=SWEEP_TARGETS, help='class swept by sweep, or probed by transcendental')
    p.add_argument('--n', type=int, help='degree for the finite classifiers')
    p.add_argument('--N', type=int, help='largest degree for sweeps and probes')
    p.add_argument('--semantics', choices=(P.PB2, P.PB3), help='inputs of degree <= n (pb2) or exactly n (pb3)')
    p.add_argument('--budget', type=int, help='falsifier slices per symbol')
    p.add_argument('--seed', type=int, help='seed (default: $%s, else 0)' % SEED_ENV)
    p.set_defaults(func=analyze_cmd)

    p = sub.add_parser('generate', help='write seeded fixture polynomials')
    p.add_argument('--kind', choices=GENERATE_KINDS, required=True)
    p.add_argument('--degree', type=int, required=True)
    p.add_argument('--count', type=int, default=1)
    p.add_argument('--seed', type=int)
    p.add_argument('--domain', choices=sorted(SHORTHANDS))
    p.add_argument('--out', help='output file (default: stdout)')
    p.set_defaults(func=generate_cmd)

    p = sub.add_parser('symbol', help='print a symbol of the operator of a spec')
    _spec_arguments(p)
    p.add_argument('--kind', choices=sorted(SYMBOL_KINDS), default='plus')
    p.add_argument('--n', type=int)
    p.set_defaults(func=symbol_cmd)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, format='[%(levelname)s] %(message)s',
                        level=logging.DEBUG if args.verbose else logging.INFO)
    try:
        return args.func(args)
    except PreserverLabError as e:
        log.error('%s: %s', type(e).__name__, e)
        return e.exit_code
    except Exception:
        log.exception('internal error')
        return INTERNAL_ERROR


if __name__ == '__main__':
    sys.exit(main())
