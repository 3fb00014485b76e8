import pytest
import ujson as json

from preserver_lab.algebra.poly import Poly1, Poly2
from preserver_lab.analysis import preservers as P
from preserver_lab.analysis.operators import LinearOperator, MultiplierSeq
from preserver_lab.analysis.report import verify_report, to_document, render_json, render_text
from preserver_lab.analysis.stab2 import decide
from preserver_lab.errors import WitnessRejected


def poly(*coeffs):
    return Poly1.from_coeffs(coeffs)


@pytest.fixture
def gapped_report(gapped_multiplier):
    return P.finitehyp_classify(gapped_multiplier.operator(2), 2)


def _with_witness(problem, witness):
    return P.PreserverReport(problem, P.NON_PRESERVER, None, {'input_witness': witness})


def test_genuine_witnesses_pass(gapped_multiplier, gapped_report):
    verify_report(gapped_report, gapped_multiplier.operator(2))
    stab = P.finitestab_classify(gapped_multiplier.operator(2), 2)
    assert stab.symbol_witnesses
    verify_report(stab, gapped_multiplier.operator(2))


def test_wrong_image_is_rejected(gapped_multiplier):
    witness = P.InputWitness(poly(4, 4, 1), poly(1, 0, 1), 1j)
    with pytest.raises(WitnessRejected, match='recorded image'):
        verify_report(_with_witness(P.HYP, witness), gapped_multiplier.operator(2))


def test_input_outside_the_class_is_rejected(gapped_multiplier):
    witness = P.InputWitness(poly(1, 0, 1), poly(1, 0, 1), 1j)
    with pytest.raises(WitnessRejected, match='not in the hyp class'):
        verify_report(_with_witness(P.HYP, witness), gapped_multiplier.operator(2))


def test_image_inside_the_class_is_rejected():
    witness = P.InputWitness(poly(0, 0, 1), poly(0, 0, 1), None)
    with pytest.raises(WitnessRejected, match='stays in'):
        verify_report(_with_witness(P.STAB, witness), LinearOperator.identity(2))


def test_symbol_witness_must_vanish():
    z_minus_w = Poly2.from_dict({(1, 0): 1, (0, 1): -1})
    z_plus_w = Poly2.from_dict({(1, 0): 1, (0, 1): 1})
    forged = P.SymbolCheck(z_plus_w, decide(z_minus_w))
    report = P.PreserverReport(P.STAB, P.NON_PRESERVER, None, {'symbols': {'plus': forged}})
    with pytest.raises(WitnessRejected, match='does not vanish'):
        verify_report(report)


def test_multiplier_failures_are_rechecked():
    lam = MultiplierSeq([1, 0, 1])
    report = P.multiplier_test(lam, 3)
    verify_report(report, lam=lam)

    tampered = P.PreserverReport(P.MULTIPLIER, P.NON_PRESERVER, None,
                                 {'failure': dict(report.artifacts['failure'], poly=poly(1, 2, 1))})
    with pytest.raises(WitnessRejected, match='does not match'):
        verify_report(tampered, lam=lam)

    passing = MultiplierSeq(range(4))
    fake = P.PreserverReport(P.MULTIPLIER, P.NON_PRESERVER, None,
                             {'failure': {'n': 2, 'poly': P.binomial_image(passing, 2), 'root': None,
                                          'reason': 'not hyperbolic'}})
    with pytest.raises(WitnessRejected, match='passes the multiplier test'):
        verify_report(fake, lam=passing)


def test_json_document(gapped_report):
    document = json.loads(render_json(to_document(gapped_report, {'n': 2, 'seed': 0})))
    assert document['schema_version'] == '1'
    report = document['report']
    assert (report['problem'], report['verdict'], report['clause']) == ('hyp', 'non_preserver', None)
    assert report['artifacts']['range']['rank'] == 2
    assert report['artifacts']['input_witness']['f'] == poly(1, 2, 1).to_json()
    assert set(report['artifacts']['symbols']) == {'plus', 'minus'}
    assert document['metadata'] == {'n': 2, 'seed': 0}


def test_text_rendering(gapped_report):
    text = render_text(gapped_report, {'n': 2})
    assert 'verdict:  non_preserver' in text
    assert 'witness:' in text
    assert 'unstable, zero at' in text
    assert text.splitlines()[-1] == 'n: 2'

    identity = render_text(P.finitehyp_classify(LinearOperator.identity(3), 3))
    assert 'preserver (clause b)' in identity
    assert 'mode: stability_preserving' in identity
    assert 'stable [' in identity
