from fractions import Fraction

import numpy
import pytest
import ujson as json
from hypothesis import given, settings
import hypothesis.strategies as st

from preserver_lab.algebra.classify import NEITHER, pencil_relation
from preserver_lab.algebra.components.matrices import symmetric_inertia
from preserver_lab.algebra.components.scalar import EXACT_SCALAR
from preserver_lab.algebra.poly import Poly2
from preserver_lab.analysis import search
from preserver_lab.analysis.preservers import from_roots
from preserver_lab.analysis.stab2 import (
    DETERMINANTAL, DOMAIN_PULLBACK, LINEAR, PRODUCT, _degree1_ok, _qq_rows, certify, decide, decide_on_domain,
    diag_restrict, falsify, gen_real_stable, jsonable, mutate_determinantal, polarize, quadratic_closed_form,
    vanishes)
from preserver_lab.errors import DegreeExceeded, ZeroPolynomial
from preserver_lab.test.conftest import thorough

K = EXACT_SCALAR

z_plus_w = Poly2.from_dict({(1, 0): 1, (0, 1): 1})
z_minus_w = Poly2.from_dict({(1, 0): 1, (0, 1): -1})


def test_linear_forms():
    assert decide(z_plus_w).stable
    verdict = decide(Poly2.from_dict({(1, 0): 1, (0, 1): 1, (0, 0): (0, 1)}))
    assert verdict.stable
    assert verdict.certificate.kind in (LINEAR, PRODUCT)


def test_gaussian_content_is_factored_out():
    # (1 + i)(z + w) + i: factoring over the Gaussian rationals leaves a non-real constant
    f = Poly2.from_dict({(1, 0): (1, 1), (0, 1): (1, 1), (0, 0): (0, 1)})
    verdict = decide(f)
    assert verdict.stable
    assert verdict.certificate.verify(f)
    assert decide(f * Poly2.from_dict({(0, 0): (2, -1)})).stable


def test_unstable_verdicts_carry_a_zero_in_the_upper_half_planes():
    verdict = decide(z_minus_w)
    assert verdict.unstable
    w = verdict.witness
    assert w.z.imag > 0 and w.w.imag > 0
    assert vanishes(z_minus_w, w.z, w.w)


def test_products_are_certified_factor_by_factor():
    f = z_plus_w ** 3 * 4
    cert = certify(f)
    assert cert.kind == PRODUCT
    assert cert.verify(f)
    assert not cert.verify(z_plus_w ** 2)


def test_quadratic_closed_form():
    assert quadratic_closed_form(Poly2.from_dict({(1, 1): 1, (0, 0): -1})) is True
    assert quadratic_closed_form(Poly2.from_dict({(1, 1): 1, (0, 0): 1})) is False
    assert quadratic_closed_form(Poly2.from_dict({(2, 0): 1, (0, 2): 1})) is False
    assert quadratic_closed_form(Poly2.from_dict({(3, 0): 1})) is None


def test_zero_polynomial_is_rejected():
    with pytest.raises(ZeroPolynomial):
        decide(Poly2.from_dict({}))


def test_domain_pullback_of_the_disk_kernel(disk_map):
    kernel = Poly2.from_dict({(0, 0): (0, 1), (1, 1): (0, 1)})
    verdict = decide_on_domain(kernel, disk_map)
    assert verdict.stable
    assert verdict.certificate.kind == DOMAIN_PULLBACK
    assert verdict.certificate.data['pulled'] == z_plus_w
    assert verdict.certificate.verify(kernel)


def test_domain_witnesses_are_mapped_back(disk_map):
    f = Poly2.from_dict({(1, 0): 1, (0, 0): -2})
    verdict = decide_on_domain(f, disk_map)
    assert verdict.unstable
    assert abs(verdict.witness.z - 2) < 1e-9


@pytest.mark.parametrize('d,seed', [(1, 0), (2, 1), (2, 7), (3, 3)])
def test_determinantal_generator_is_certified_and_clean(d, seed):
    f, cert = gen_real_stable(d, seed)
    assert cert.kind == DETERMINANTAL
    assert cert.verify(f)
    assert decide(f).stable
    assert falsify(f, budget=2000, seed=seed) is None


def test_generator_is_deterministic():
    assert gen_real_stable(3, 7)[0] == gen_real_stable(3, 7)[0]


@pytest.mark.parametrize('seed', range(5))
def test_mutation_breaks_positive_semidefiniteness(seed):
    _, cert = gen_real_stable(2, seed)
    f, A, B, C = mutate_determinantal(cert, seed)
    _, negative, _ = symmetric_inertia(_qq_rows(B))
    assert negative > 0
    assert f.is_real


@pytest.mark.slow
def test_determinantal_corpus_has_no_witnesses():
    for seed in range(200):
        f, _ = gen_real_stable(1 + seed % 4, seed)
        assert falsify(f, seed=seed) is None


@pytest.mark.slow
def test_mutated_corpus_is_falsified():
    found = 0
    for seed in range(200):
        _, cert = gen_real_stable(1 + seed % 4, seed)
        f = mutate_determinantal(cert, seed)[0]
        found += falsify(f, seed=seed) is not None
    assert found >= 180


@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-5, 5).filter(bool),
                       min_size=1, max_size=6),
       st.integers(0, 2))
@settings(deadline=None)
def test_polarization_restricts_back_on_the_diagonal(terms, extra):
    f = Poly2.from_dict(terms)
    d = f.wdeg + extra
    assert diag_restrict(polarize(f, d)) == f


def test_polarization_values():
    f = Poly2.from_dict({(1, 0): 1, (0, 2): 1})
    p = polarize(f, 2)
    assert p(3, [2, 5]) == p.scalar.convert(13)
    with pytest.raises(DegreeExceeded):
        polarize(f, 1)


def test_search_finds_and_misses():
    result = search.search(z_minus_w, budget=256, seed=1)
    assert result.witness is not None
    assert abs(result.witness.z - result.witness.w) < 1e-6
    clean = search.search(z_plus_w, budget=256, seed=1)
    assert clean.witness is None
    assert clean.evidence.samples_tested > 0


def test_halton_points_stay_in_the_upper_half_plane():
    opt = search._options({})
    points = search.halton_points(100, 3, opt)
    assert numpy.all(points.imag > 0)
    assert numpy.array_equal(points, search.halton_points(100, 3, opt))


def test_verdicts_serialize():
    document = jsonable({'verdict': decide(z_minus_w), 'cert': certify(z_plus_w)})
    decoded = json.loads(json.dumps(document))
    assert decoded['verdict']['outcome'] == 'unstable'
    assert decoded['cert']['kind']


@pytest.mark.slow
@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-5, 5).filter(bool),
                       min_size=1, max_size=6),
       st.integers(0, 2))
@thorough
def test_polarization_restricts_back_on_the_diagonal_thoroughly(terms, extra):
    test_polarization_restricts_back_on_the_diagonal.hypothesis.inner_test(terms, extra)


@pytest.mark.parametrize('f', [
    z_minus_w,
    Poly2.from_dict({(2, 0): 1, (0, 2): 1}),
    Poly2.from_dict({(1, 1): 1, (0, 0): 1}),
])
def test_polarization_vanishes_at_witnesses(f):
    witness = falsify(f, seed=0)
    assert witness is not None
    z, w = complex(witness.z), complex(witness.w)
    d = f.wdeg + 1
    p = polarize(f, d)
    assert p(z, [w] * d) == f(z, w)
    assert vanishes(f, z, w)


def interlacing_pencil(rng):
    """ (q0, q1) with positive leading coefficients and the roots of q1 strictly between those of q0. """
    k = int(rng.integers(2, 5))
    roots = sorted(int(x) for x in rng.choice(numpy.arange(-6, 7), size=k, replace=False))
    mids = [Fraction(a + b, 2) for a, b in zip(roots, roots[1:])]
    q0 = from_roots([K.convert(r) for r in roots]) * int(rng.integers(1, 4))
    q1 = from_roots([K.convert(r) for r in mids]) * int(rng.integers(1, 4))
    return q0, q1, roots


def pencil(q0, q1):
    """ q0(z) + w q1(z). """
    return Poly2.from_poly1(q0) + Poly2.from_poly1(q1) * Poly2.from_dict({(0, 1): 1})


@pytest.mark.parametrize('seed', range(10))
def test_interlacing_pencils_are_certified(seed):
    q0, q1, _ = interlacing_pencil(numpy.random.default_rng(seed))
    assert _degree1_ok(q0, q1)
    f = pencil(q0, q1)
    verdict = decide(f)
    assert verdict.stable
    assert verdict.certificate.verify(f)


@pytest.mark.parametrize('seed', range(10))
def test_pencils_without_interlacing_are_falsified(seed):
    q0, _, roots = interlacing_pencil(numpy.random.default_rng(seed))
    q1 = from_roots([K.convert(roots[-1] + 1 + j) for j in range(len(roots) - 1)])
    assert pencil_relation(q1, q0).relation == NEITHER
    assert not _degree1_ok(q0, q1)
    f = pencil(q0, q1)
    witness = falsify(f, seed=seed)
    assert witness is not None
    assert vanishes(f, witness.z, witness.w)


@pytest.mark.slow
def test_decide_agrees_with_the_quadratic_closed_form():
    rng = numpy.random.default_rng(0)
    monomials = [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)]
    checked = 0
    while checked < 300:
        f = Poly2.from_dict(dict(zip(monomials, (int(c) for c in rng.integers(-2, 3, size=6)))))
        if f.is_zero or f.total_degree < 1:
            continue
        expected = quadratic_closed_form(f)
        assert decide(f, seed=checked).stable is expected, f
        checked += 1
