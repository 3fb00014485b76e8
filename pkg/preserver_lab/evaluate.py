"""
Brute-force check of hyperbolicity classifications: the operator is applied to every product of
linear factors with roots in a small integer lattice, and classifier verdicts are tallied against
what that finds.
"""
import logging
from collections import defaultdict
from itertools import combinations_with_replacement

import numpy
from tqdm import tqdm

from preserver_lab.algebra.classify import is_hyperbolic
from preserver_lab.algebra.components.scalar import EXACT_SCALAR, format_scalar
from preserver_lab.analysis.operators import MultiplierSeq
from preserver_lab.analysis.preservers import PRESERVER, NON_PRESERVER, UNKNOWN, finitehyp_classify, from_roots

log = logging.getLogger(__name__)

LATTICE = (-2, -1, 0, 1, 2)
PASSES = 'passes'
FAILS = 'fails'


def lattice_inputs(n, lattice=LATTICE):
    """ Every monic polynomial of degree <= n with all roots in `lattice`. """
    for degree in range(n + 1):
        for roots in combinations_with_replacement(lattice, degree):
            yield from_roots([EXACT_SCALAR.convert(r) for r in roots])


def oracle(T, n, lattice=LATTICE):
    """ The first lattice input whose nonzero image is not hyperbolic, or None. """
    for f in lattice_inputs(n, lattice):
        image = T(f)
        if not image.is_zero and not is_hyperbolic(image).answer:
            return f
    return None


def random_multipliers(count, max_degree, seed=0):
    """ (sequence, n) pairs with n <= max_degree and lambda(0..n) drawn from -2..2. """
    rng = numpy.random.default_rng(seed)
    cases = []
    for _ in range(count):
        n = int(rng.integers(1, max_degree + 1))
        cases.append((MultiplierSeq([int(x) for x in rng.integers(-2, 3, size=n + 1)]), n))
    return cases


def classify_cases(cases, budget=None, seed=0):
    results = []
    quiet = not log.isEnabledFor(logging.INFO)
    for lam, n in tqdm(cases, mininterval=2, desc='  - (Evaluating)    ', leave=False, disable=quiet):
        T = lam.operator(n)
        report = finitehyp_classify(T, n, budget, seed)
        counterexample = oracle(T, n)
        results.append({
            'lambdas': [format_scalar(x) for x in lam.lambdas],
            'n': n,
            'verdict': report.verdict,
            'clause': report.clause,
            'oracle': FAILS if counterexample is not None else PASSES,
            'counterexample': None if counterexample is None else counterexample.to_json(),
        })
    return results


def evaluate_classifications(results):
    metrics = defaultdict(lambda: defaultdict(int))
    for r in results:
        metrics[r['verdict']][r['oracle']] += 1
    return metrics


def get_summary_metrics(metrics):
    total = sum(sum(row.values()) for row in metrics.values())
    agree = metrics[PRESERVER][PASSES] + metrics[NON_PRESERVER][FAILS]
    return {
        'total': total,
        'agreement': agree / total if total else 0.0,
        'contradictions': metrics[PRESERVER][FAILS],
        'unknown_rate': sum(metrics[UNKNOWN].values()) / total if total else 0.0,
    }


def print_evaluation(metrics):
    columns = [PASSES, FAILS]

    print('=' * (16 + 3 + 10 * len(columns)))
    print('Verdict'.rjust(16), '|', ''.join(c.ljust(10) for c in columns))
    print('=' * (16 + 3 + 10 * len(columns)))
    for verdict in (PRESERVER, NON_PRESERVER, UNKNOWN):
        print(verdict.rjust(16) + ' | ' + ''.join(str(metrics[verdict][c]).ljust(10) for c in columns))

    summary = get_summary_metrics(metrics)
    print('_' * (16 + 3 + 10 * len(columns)))
    print('Agreement'.rjust(16) + ' | ' + ('%.1f' % (100 * summary['agreement'])).ljust(10))
    print('Unknown'.rjust(16) + ' | ' + ('%.1f' % (100 * summary['unknown_rate'])).ljust(10))
    print('Contradictions'.rjust(16) + ' | ' + str(summary['contradictions']).ljust(10))
