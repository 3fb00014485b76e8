import logging

import numpy
import pytest

from preserver_lab.algebra.classify import is_hyperbolic, is_stable1
from preserver_lab.algebra.components.scalar import EXACT_SCALAR
from preserver_lab.algebra.domains import Mobius
from preserver_lab.algebra.poly import Poly1, Poly2
from preserver_lab.analysis import preservers as P
from preserver_lab.analysis.operators import CIRC, LinearOperator, MultiplierSeq, range_analysis, reflect, symbol
from preserver_lab.analysis.report import verify_report
from preserver_lab.errors import NotRealOperator, UnboundedDomainRequired
from preserver_lab.inputs import shorthand_domain
from preserver_lab.test.conftest import disk_counterexample

K = EXACT_SCALAR


def poly(*coeffs):
    return Poly1.from_coeffs(coeffs)


@pytest.mark.parametrize('n', range(3, 7))
def test_disk_operator_images(n):
    T = disk_counterexample(n)
    assert T.columns[n - 1] == Poly1.monomial(n - 2) * poly(n - 1, 1)
    region = P.region_for(P.CIRCULAR, shorthand_domain('unit_disk').mobius)
    assert region.contains(K.convert(-(n - 1))) is False
    assert region.offending_root(T.columns[n - 1]) is not None
    assert region.offending_root(T.columns[n]) is None


@pytest.mark.parametrize('n', range(3, 7))
def test_disk_operator_preserves_degree_exactly_n(disk_map, n):
    T = disk_counterexample(n)
    report = P.circular_classify(T, n, disk_map, P.PB3)
    assert report.verdict == P.PRESERVER
    assert report.clause == 'b'


@pytest.mark.parametrize('n', range(3, 7))
def test_disk_operator_fails_on_lower_degrees(disk_map, n):
    T = disk_counterexample(n)
    report = P.circular_classify(T, n, disk_map, P.PB2)
    assert report.verdict == P.NON_PRESERVER
    assert report.artifacts['failed_degree'] == n - 1
    witness = report.input_witness
    assert witness.f == Poly1.monomial(n - 1)
    assert witness.image == Poly1.monomial(n - 2) * poly(n - 1, 1)
    verify_report(report, T, disk_map)


@pytest.mark.parametrize('n', range(3, 7))
def test_bounded_preservers_keep_one_image_degree(disk_map, n):
    region = P.region_for(P.CIRCULAR, disk_map)
    assert region.bounded
    for T in (disk_counterexample(n), LinearOperator.identity(n)):
        assert P.same_degree(T, n, region, 100, seed=n)
        rng = numpy.random.default_rng(n)
        images = [T(region.member(n, rng)) for _ in range(100)]
        assert len({image.degree for image in images}) == 1
    report = P.circular_classify(disk_counterexample(n), n, disk_map, P.PB3)
    assert report.artifacts['same_degree']


def test_exterior_degree_conditions(disk_map, caplog):
    report = P.circular_classify(disk_counterexample(3), 3, disk_map, P.PB3)
    assert report.artifacts['degree_conditions'] == {'z': True, 'w': True}

    truncated = LinearOperator.from_columns([[1], [0, 1], [0, 0, 1], [0]])
    G = symbol(truncated, 3, CIRC, disk_map)
    with caplog.at_level(logging.INFO, logger=P.__name__):
        assert P._exterior_degree_conditions(G, truncated, 3) == {'z': True, 'w': False}
    assert 'pulling back at its own degrees' in caplog.text


def test_gapped_multiplier_is_not_a_hyperbolicity_preserver(gapped_multiplier):
    T = gapped_multiplier.operator(2)
    report = P.finitehyp_classify(T, 2)
    assert report.verdict == P.NON_PRESERVER
    witness = report.input_witness
    assert witness.f == poly(1, 2, 1)
    assert witness.image == poly(1, 0, 1)
    verify_report(report, T)


def test_hyperbolicity_modes(reflection3):
    identity = P.finitehyp_classify(LinearOperator.identity(3), 3)
    assert (identity.verdict, identity.clause, identity.artifacts['mode']) == (
        P.PRESERVER, 'b', P.STABILITY_PRESERVING)
    reversing = P.finitehyp_classify(reflection3, 3)
    assert (reversing.verdict, reversing.clause, reversing.artifacts['mode']) == (
        P.PRESERVER, 'c', P.STABILITY_REVERSING)


def test_hyperbolicity_needs_a_real_operator():
    with pytest.raises(NotRealOperator):
        P.finitehyp_classify(LinearOperator.from_columns([[(0, 1)], [0, 1]]), 1)


def test_complex_rotation_of_a_preserver():
    T = LinearOperator.identity(3) * K.convert((0, 1))
    report = P.finitehypC_classify(T, 3)
    assert (report.verdict, report.clause) == (P.PRESERVER, 'c')
    assert abs(report.artifacts['phase'] + 1j) < 1e-12


def test_stability(derivative4, gapped_multiplier):
    assert P.finitestab_classify(derivative4, 4).clause == 'b'
    rank_one = LinearOperator.from_columns([[(0, 1), 1], [0], [0]])
    assert P.finitestab_classify(rank_one, 2).clause == 'a'
    zero = P.finitestab_classify(LinearOperator.zero(2), 2)
    assert (zero.verdict, zero.clause, zero.artifacts['trivial']) == (P.PRESERVER, 'zero', True)

    T = gapped_multiplier.operator(2)
    report = P.finitestab_classify(T, 2)
    assert report.verdict == P.NON_PRESERVER
    assert report.symbol_witnesses
    verify_report(report, T)


@pytest.mark.parametrize('T,n', [
    (LinearOperator.derivative(3), 3),
    (LinearOperator.identity(2), 2),
    (MultiplierSeq([1, 0, 1]).operator(2), 2),
])
def test_circular_with_the_identity_map_is_stability(T, n):
    circular = P.circular_classify(T, n, Mobius.identity())
    assert circular.verdict == P.finitestab_classify(T, n).verdict


def test_boundary_clauses(reflection3):
    real_line = Mobius.identity()
    identity = P.boundary_classify(LinearOperator.identity(3), 3, real_line)
    assert (identity.verdict, identity.clause) == (P.PRESERVER, 'c')
    reflected = P.boundary_classify(reflection3, 3, real_line)
    assert (reflected.verdict, reflected.clause) == (P.PRESERVER, 'd')


def test_boundary_needs_an_unbounded_domain():
    with pytest.raises(UnboundedDomainRequired):
        P.boundary_classify(LinearOperator.identity(2), 2, shorthand_domain('unit_disk_exterior').mobius)


def test_trichotomy(reflection3):
    assert P.trichotomy_classify(LinearOperator.identity(3), 3).artifacts['mode'] == P.STABILITY_PRESERVING
    report = P.trichotomy_classify(reflection3, 3)
    assert (report.clause, report.artifacts['mode']) == ('c', P.STABILITY_REVERSING)


def test_counterexample_search_prefers_canonical_powers(gapped_multiplier):
    witness = P.counterexample_search(gapped_multiplier.operator(2), 2, P.HYP)
    assert witness.f == poly(1, 2, 1)
    assert abs(abs(witness.root.imag) - 1) < 1e-9
    assert P.counterexample_search(LinearOperator.derivative(3), 3, P.STAB, budget=40) is None


@pytest.mark.parametrize('T,n,problem', [
    (MultiplierSeq([1, 1, 0, 1]).operator(3), 3, P.HYP),
    (MultiplierSeq([1, 0, 1, 0, 1]).operator(4), 4, P.HYP),
    (reflect(3), 3, P.STAB),
    (LinearOperator.from_columns([[1], [1, -1], [1, -2, 1], [1, -3, 3, -1]]), 3, P.STAB),
])
def test_counterexamples_exist_when_the_symbol_fails(T, n, problem):
    assert range_analysis(T).rank > 2
    classify = P.finitehyp_classify if problem == P.HYP else P.finitestab_classify
    report = classify(T, n)
    assert report.verdict == P.NON_PRESERVER
    witness = P.counterexample_search(T, n, problem)
    assert witness is not None
    assert witness.image == T(witness.f)
    assert P.region_for(problem).offending_root(witness.image) is not None


@pytest.mark.parametrize('problem,shorthand', [
    (P.STAB, None), (P.HYP, None), (P.CIRCULAR, 'unit_disk'), (P.BOUNDARY_PROBLEM, 'unit_circle')])
def test_sampled_members_are_in_their_class(problem, shorthand):
    mobius = shorthand_domain(shorthand).mobius if shorthand else None
    region = P.region_for(problem, mobius)
    for seed in range(5):
        f = P.sample_class_member(problem, 3, seed, mobius)
        assert f.degree == 3
        assert region.offending_root(f) is None


def test_reports_need_witnesses_and_clauses():
    with pytest.raises(AssertionError):
        P.PreserverReport(P.STAB, P.NON_PRESERVER)
    with pytest.raises(AssertionError):
        P.PreserverReport(P.STAB, P.PRESERVER)


def test_multiplier_sequences():
    lam = MultiplierSeq(range(11))
    for n in range(1, 11):
        assert P.binomial_image(lam, n) == Poly1.monomial(1) * poly(1, 1) ** (n - 1) * n
    report = P.multiplier_test(lam, 10)
    assert (report.verdict, report.clause) == (P.PRESERVER, 'ps_iv')

    failed = P.multiplier_test(MultiplierSeq([1, 0, 1]), 2)
    assert failed.verdict == P.NON_PRESERVER
    assert failed.artifacts['failure']['n'] == 2
    assert failed.artifacts['failure']['poly'] == poly(1, 0, 1)


def test_multiplier_roots_must_share_a_sign():
    report = P.multiplier_test(MultiplierSeq([-1, 0, 1]), 2)
    assert report.verdict == P.NON_PRESERVER
    assert report.artifacts['failure']['reason'] == 'roots of both signs'


def test_sweeps(gapped_multiplier):
    failing = P.algebraic_sweep(gapped_multiplier.operator(2), 2, P.HYP)
    assert failing.verdict == P.NON_PRESERVER
    assert failing.artifacts['failed_at'] == 2
    assert failing.input_witness.f == poly(1, 2, 1)

    passing = P.algebraic_sweep(LinearOperator.derivative(3), 3, P.STAB)
    assert (passing.verdict, passing.clause) == (P.PRESERVER, 'all_degrees')
    assert passing.artifacts['finite_evidence']
    assert passing.artifacts['per_degree'] == {1: 'a', 2: 'b', 3: 'b'}


def test_sweep_over_the_disk_fails_below_the_top_degree(disk_map):
    report = P.algebraic_sweep(disk_counterexample(3), 3, P.CIRCULAR, disk_map, P.PB3)
    assert report.verdict == P.NON_PRESERVER
    assert report.artifacts['failed_at'] == 1


def test_transcendental_probe_of_the_identity():
    identity = LinearOperator.identity(12)
    report = P.transcendental_probe(identity, 12, P.STAB)
    assert (report.verdict, report.clause) == (P.PRESERVER, 'truncations')
    assert all(entry['szasz']['sound'] for entry in report.artifacts['truncations']['plus'])

    hyp = P.transcendental_probe(identity, 6, P.HYP)
    assert hyp.artifacts['branch'] == P.PLUS


def test_szasz_diagnostic_on_a_stable_truncation():
    Q = Poly2.from_dict({(0, 0): 1, (1, 1): -1}) ** 3
    diagnostic = P.szasz_diagnostic(Q, 0.5)
    assert diagnostic['sound']
    assert diagnostic['slices'] == 7
    assert diagnostic['observed'] <= diagnostic['bound']
    assert diagnostic['observed'] == pytest.approx(1.25 ** 3)
    assert diagnostic['diagonal']['observed'] == pytest.approx(1.25 ** 3)


def test_szasz_diagnostic_checks_slices_off_the_diagonal():
    # the diagonal -t is stable but z -> z - 2w0 is not for w0 in the upper half-plane
    Q = Poly2.from_dict({(1, 0): 1, (0, 1): -2})
    diagnostic = P.szasz_diagnostic(Q, 1.0)
    assert not diagnostic['sound']
    assert diagnostic['bound'] is None


@pytest.mark.slow
@pytest.mark.parametrize('T,n', [
    (LinearOperator.derivative(4), 4),
    (LinearOperator.identity(3), 3),
    (MultiplierSeq([0, 1, 2, 3]).operator(3), 3),
])
def test_stability_preservers_map_sampled_members_into_the_class(T, n):
    assert P.finitestab_classify(T, n).verdict == P.PRESERVER
    for seed in range(500):
        image = T(P.sample_class_member(P.STAB, n, seed))
        assert image.is_zero or is_stable1(image).answer


@pytest.mark.slow
def test_hyperbolicity_preservers_map_sampled_members_into_the_class(reflection3):
    for T, n in ((reflection3, 3), (LinearOperator.derivative(4), 4)):
        assert P.finitehyp_classify(T, n).verdict == P.PRESERVER
        for seed in range(500):
            image = T(P.sample_class_member(P.HYP, n, seed))
            assert image.is_zero or is_hyperbolic(image).answer
