import pytest

from preserver_lab.algebra.poly import Poly1
from preserver_lab.analysis.operators import LinearOperator, MultiplierSeq
from preserver_lab.analysis.preservers import PRESERVER, NON_PRESERVER, UNKNOWN
from preserver_lab.evaluate import (
    PASSES, FAILS, lattice_inputs, oracle, random_multipliers, classify_cases, evaluate_classifications,
    get_summary_metrics, print_evaluation)


def test_lattice_inputs():
    inputs = list(lattice_inputs(2))
    assert len(inputs) == 1 + 5 + 15
    assert inputs[0] == Poly1.from_coeffs([1])
    assert all(f.lc == Poly1.from_coeffs([1]).lc for f in inputs)


def test_oracle(gapped_multiplier):
    assert oracle(LinearOperator.identity(3), 3) is None
    assert oracle(LinearOperator.derivative(3), 3) is None
    assert oracle(gapped_multiplier.operator(2), 2) == Poly1.from_coeffs([4, 4, 1])


def test_random_multipliers():
    cases = random_multipliers(20, 4, seed=3)
    assert len(cases) == 20
    assert all(1 <= n <= 4 and len(lam) == n + 1 for lam, n in cases)
    again = random_multipliers(20, 4, seed=3)
    assert [(lam.lambdas, n) for lam, n in cases] == [(lam.lambdas, n) for lam, n in again]


def test_classify_cases(gapped_multiplier):
    results = classify_cases([(gapped_multiplier, 2), (MultiplierSeq([0, 1, 2]), 2)])
    assert [(r['verdict'], r['oracle']) for r in results] == [(NON_PRESERVER, FAILS), (PRESERVER, PASSES)]
    assert results[0]['lambdas'] == ['1', '0', '1']
    assert results[0]['counterexample'] == ['4', '4', '1']
    assert results[1]['counterexample'] is None


def test_metrics(capsys):
    results = [
        {'verdict': PRESERVER, 'oracle': PASSES},
        {'verdict': PRESERVER, 'oracle': PASSES},
        {'verdict': NON_PRESERVER, 'oracle': FAILS},
        {'verdict': UNKNOWN, 'oracle': PASSES},
    ]
    metrics = evaluate_classifications(results)
    summary = get_summary_metrics(metrics)
    assert summary == {'total': 4, 'agreement': 0.75, 'contradictions': 0, 'unknown_rate': 0.25}

    print_evaluation(metrics)
    out = capsys.readouterr().out
    assert 'Agreement'.rjust(16) + ' | 75.0' in out
    assert 'Contradictions'.rjust(16) + ' | 0' in out


def test_empty_metrics():
    assert get_summary_metrics(evaluate_classifications([]))['agreement'] == 0.0


@pytest.mark.slow
def test_preserver_verdicts_never_contradict_the_lattice():
    results = classify_cases(random_multipliers(50, 5, seed=0))
    summary = get_summary_metrics(evaluate_classifications(results))
    assert summary['total'] == 50
    assert summary['contradictions'] == 0
    assert summary['unknown_rate'] <= 0.1
    for r in results:
        if r['verdict'] == NON_PRESERVER:
            assert r['clause'] is None
        if r['oracle'] == FAILS:
            assert r['verdict'] in (NON_PRESERVER, UNKNOWN)
