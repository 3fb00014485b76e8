import numpy
import pytest
import sympy
from sympy import QQ
from hypothesis import given, settings, example
import hypothesis.strategies as st

from preserver_lab.algebra.components import NEG_INF
from preserver_lab.algebra.components.matrices import sign_changes
from preserver_lab.algebra.components.scalar import EXACT_SCALAR, Scalar, format_scalar, to_complex
from preserver_lab.algebra.poly import (
    Poly1, Poly2, all_roots, derivative, elementary_symmetric, eval2, polarization_variables, real_root_count)
from preserver_lab.analysis.preservers import from_roots
from preserver_lab.errors import ZeroPolynomial, ConstantPolynomial

K = EXACT_SCALAR


def integer_roots(roots):
    return from_roots([K.convert(r) for r in roots])


def test_coefficients_are_lowest_first_and_trimmed():
    f = Poly1.from_coeffs([1, 2, 0])
    assert f.degree == 1
    assert f.coeffs == (K.convert(1), K.convert(2))
    assert Poly1.zero().degree == NEG_INF
    assert Poly1.zero().is_zero


def test_scalars_read_decimals_through_their_shortest_repr():
    assert K.convert(0.1) == K.convert('1/10')
    assert K.convert(numpy.float64(0.1)) == K.convert('1/10')
    assert K.convert(numpy.complex128(0.5 - 0.25j)) == K.convert(('1/2', '-1/4'))
    assert format_scalar(K.convert((1, '-1/2'))) == ['1', '-1/2']
    assert format_scalar(K.convert(3)) == '3'
    with pytest.raises(TypeError):
        K.convert(True)


def test_scalars_read_sympy_complex_expressions():
    assert K.convert(2 - sympy.I) == K.convert((2, -1))
    assert K.convert(sympy.Rational(1, 2) + sympy.I / 3) == K.convert(('1/2', '1/3'))
    assert K.convert(sympy.Rational(-3, 4)) == K.convert('-3/4')
    assert abs(to_complex(Scalar.floating().convert(1 + 2 * sympy.I)) - (1 + 2j)) < 1e-12


def test_float_backend_chops_below_tolerance():
    F = Scalar.floating(1e-9)
    f = Poly1.from_coeffs([1e-12, 1], F)
    assert f.degree == 1
    assert F.is_zero(f.coefficient(0))


def test_evaluation_and_arithmetic():
    f = Poly1.from_coeffs([1, 0, 1])
    assert f((0, 1)) == K.domain.zero
    assert f.reflect() == f
    assert (f * 2 - f) == f
    assert derivative(f) == Poly1.from_coeffs([0, 2])


def test_bivariate_reflect_and_swap():
    f = Poly2.from_dict({(1, 0): 1, (0, 2): 3})
    assert f.swap() == Poly2.from_dict({(0, 1): 1, (2, 0): 3})
    assert f.reflect(z=True) == Poly2.from_dict({(1, 0): -1, (0, 2): 3})
    assert f.reflect(w=True) == f
    assert (f.zdeg, f.wdeg, f.total_degree) == (1, 2, 2)
    assert f(2, 1) == K.convert(5)
    assert f.coefficient_in_w(2) == Poly1.from_coeffs([3])


def test_bivariate_evaluation():
    f = Poly2.from_dict({(1, 0): 1, (0, 2): 3})
    assert eval2(f, 2, 1) == K.convert(5)
    assert eval2(f, (0, 1), (0, 1)) == K.convert((-3, 1))


def test_elementary_symmetric():
    assert elementary_symmetric(0) == (1,)
    es = elementary_symmetric(3)
    values = dict(zip(polarization_variables(3), [1, 2, 3]))
    assert [e.subs(values) for e in es] == [1, 6, 11, 6]


def test_real_root_count_with_multiplicity():
    f = integer_roots([1, 1, -2]) * Poly1.from_coeffs([1, 0, 1])
    assert real_root_count(f) == (2, 3)
    assert real_root_count(f, (0, None)) == (1, 2)
    assert real_root_count(f, (None, 0)) == (1, 1)


def test_real_root_count_counts_closed_endpoints():
    f = integer_roots([0, 3])
    assert real_root_count(f, (0, 3)).distinct == 2
    assert real_root_count(f, (0, None)).distinct == 2


def test_float_real_root_count():
    F = Scalar.floating()
    f = Poly1.from_coeffs([-1, 0, 1], F)
    assert real_root_count(f) == (2, 2)


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=6))
@settings(deadline=None)
def test_integer_rooted_polynomials_are_counted_exactly(roots):
    count = real_root_count(integer_roots(roots))
    assert count.with_multiplicity == len(roots)
    assert count.distinct == len(set(roots))


def test_sign_changes_skip_zeros():
    assert sign_changes([1, 0, -2, 3]) == 2
    assert sign_changes([0, 0]) == 0
    assert sign_changes([QQ(-1, 2), QQ(0), QQ(-3)]) == 0


def test_all_roots_clusters_multiple_roots():
    roots = all_roots(integer_roots([1, 1, -2]))
    assert roots.degree == 3
    assert [r.multiplicity for r in roots] == [1, 2]
    assert abs(roots.roots[0].value + 2) < 1e-9
    assert abs(roots.roots[1].value - 1) < 1e-9


def test_all_roots_rejects_degenerate_input():
    with pytest.raises(ZeroPolynomial):
        all_roots(Poly1.zero())
    with pytest.raises(ConstantPolynomial):
        all_roots(Poly1.from_coeffs([2]))
