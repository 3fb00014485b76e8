import logging
from collections import namedtuple
from itertools import combinations

import numpy
import sympy
from sympy import Poly, QQ
from sympy.polys.polyerrors import PolynomialError, DomainError

from preserver_lab.algebra.components import NEG_INF
from preserver_lab.algebra.components import roots as root_engine
from preserver_lab.algebra.components.matrices import sign_changes
from preserver_lab.algebra.components.scalar import EXACT_SCALAR, to_complex, format_scalar
from preserver_lab.errors import ZeroPolynomial, ConstantPolynomial

log = logging.getLogger(__name__)

Z, W = sympy.symbols('z w')

RealRootCount = namedtuple('RealRootCount', ['distinct', 'with_multiplicity'])


def _horner(coeffs, x, zero):
    """ Horner evaluation of lowest-first `coeffs` at `x`. """
    acc = zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class Poly1(object):
    """ Univariate polynomial in z over a scalar backend; coefficients are indexed lowest degree first. """

    def __init__(self, rep, scalar=EXACT_SCALAR):
        assert rep.gens == (Z,), 'univariate polynomials live in z, got %s' % (rep.gens,)
        assert rep.domain == scalar.domain, 'domain %s does not match %r' % (rep.domain, scalar)
        self.rep = rep
        self.scalar = scalar

    @classmethod
    def from_coeffs(cls, coeffs, scalar=EXACT_SCALAR):
        values = scalar.chop([scalar.convert(c) for c in coeffs])
        return cls(Poly.from_list(values[::-1] or [scalar.domain.zero], Z, domain=scalar.domain), scalar)

    @classmethod
    def from_expr(cls, expr, scalar=EXACT_SCALAR):
        rep = Poly(sympy.sympify(expr), Z)
        return cls.from_coeffs(reversed(rep.all_coeffs()), scalar)

    @classmethod
    def zero(cls, scalar=EXACT_SCALAR):
        return cls.from_coeffs([], scalar)

    @classmethod
    def monomial(cls, k, scalar=EXACT_SCALAR):
        return cls.from_coeffs([0] * k + [1], scalar)

    @property
    def coeffs(self):
        return tuple(reversed(self.rep.as_list(native=True)))

    @property
    def degree(self):
        return NEG_INF if self.rep.is_zero else int(self.rep.degree())

    @property
    def is_zero(self):
        return self.rep.is_zero

    @property
    def lc(self):
        return self.scalar.domain.zero if self.is_zero else self.coeffs[-1]

    @property
    def is_real(self):
        return all(self.scalar.is_real(c) for c in self.coeffs)

    def coefficient(self, k):
        coeffs = self.coeffs
        return coeffs[k] if 0 <= k < len(coeffs) else self.scalar.domain.zero

    def __call__(self, x):
        return _horner(self.coeffs, self.scalar.convert(x), self.scalar.domain.zero)

    def _wrap(self, rep):
        return Poly1(rep, self.scalar)

    def _coerce(self, other):
        if isinstance(other, Poly1):
            assert other.scalar == self.scalar, 'mixed backends: %r and %r' % (self.scalar, other.scalar)
            return other.rep
        return Poly.from_list([self.scalar.convert(other)], Z, domain=self.scalar.domain)

    def __add__(self, other):
        return self._wrap(self.rep + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.rep - self._coerce(other))

    def __rsub__(self, other):
        return self._wrap(self._coerce(other) - self.rep)

    def __mul__(self, other):
        if isinstance(other, Poly1):
            return self._wrap(self.rep * self._coerce(other))
        return self._wrap(self.rep.mul_ground(self.scalar.convert(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.rep)

    def __pow__(self, k):
        return self._wrap(self.rep ** k)

    def __eq__(self, other):
        return isinstance(other, Poly1) and self.scalar == other.scalar and self.rep == other.rep

    def __hash__(self):
        return hash((self.rep, self.scalar))

    def __repr__(self):
        return 'Poly1(%s)' % self.rep.as_expr()

    def __str__(self):
        return str(self.rep.as_expr())

    def as_expr(self):
        return self.rep.as_expr()

    def to_numpy(self):
        return numpy.array([to_complex(c) for c in self.coeffs], dtype=complex)

    def to_json(self):
        return [format_scalar(c) for c in self.coeffs]

    def real_part(self):
        return Poly1.from_coeffs([self.scalar.real(c) for c in self.coeffs], self.scalar)

    def imag_part(self):
        return Poly1.from_coeffs([self.scalar.imag(c) for c in self.coeffs], self.scalar)

    def conjugate(self):
        return Poly1.from_coeffs([self.scalar.conjugate(c) for c in self.coeffs], self.scalar)

    def reflect(self):
        """ f(-z) """
        return Poly1.from_coeffs([c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)], self.scalar)

    def rationalize(self):
        if self.scalar.exact:
            return self
        return Poly1.from_coeffs([complex(c) for c in self.coeffs], EXACT_SCALAR)

    def to_qq(self):
        """ sympy Poly over QQ; the polynomial must be real, float inputs are rationalized first. """
        f = self.rationalize()
        assert f.is_real, 'not a real polynomial: %s' % f
        return Poly.from_list([c.x for c in reversed(f.coeffs)] or [QQ.zero], Z, domain=QQ)

    @classmethod
    def from_qq(cls, rep, scalar=EXACT_SCALAR):
        return cls.from_coeffs(reversed(rep.as_list(native=True)), scalar)


class Poly2(object):
    """
    Bivariate polynomial in (z, w). `provenance` optionally carries the certificate of a generator
    that built the polynomial; it takes no part in equality.
    """

    def __init__(self, rep, scalar=EXACT_SCALAR, provenance=None):
        assert rep.gens == (Z, W), 'bivariate polynomials live in (z, w), got %s' % (rep.gens,)
        assert rep.domain == scalar.domain, 'domain %s does not match %r' % (rep.domain, scalar)
        self.rep = rep
        self.scalar = scalar
        self.provenance = provenance

    @classmethod
    def from_dict(cls, terms, scalar=EXACT_SCALAR, provenance=None):
        values = {}
        for (i, j), c in terms.items():
            c = scalar.convert(c)
            if not scalar.is_zero(c):
                values[(int(i), int(j))] = c
        if not values:
            values = {(0, 0): scalar.domain.zero}
        return cls(Poly.from_dict(values, Z, W, domain=scalar.domain), scalar, provenance)

    @classmethod
    def from_matrix(cls, rows, scalar=EXACT_SCALAR):
        """ rows[i][j] is the coefficient of z^i w^j. """
        return cls.from_dict({(i, j): c for i, row in enumerate(rows) for j, c in enumerate(row)}, scalar)

    @classmethod
    def from_expr(cls, expr, scalar=EXACT_SCALAR):
        rep = Poly(sympy.sympify(expr), Z, W)
        return cls.from_dict(dict(rep.terms()), scalar)

    @classmethod
    def from_poly1(cls, f, var=Z):
        """ Embeds f(z) as a polynomial in `var` alone. """
        if var == Z:
            return cls.from_dict({(k, 0): c for k, c in enumerate(f.coeffs)}, f.scalar)
        return cls.from_dict({(0, k): c for k, c in enumerate(f.coeffs)}, f.scalar)

    @classmethod
    def from_w_columns(cls, columns, scalar=EXACT_SCALAR):
        """ sum_j columns[j](z) w^j """
        return cls.from_dict({(i, j): c for j, p in enumerate(columns) for i, c in enumerate(p.coeffs)}, scalar)

    @property
    def terms(self):
        return dict(self.rep.as_dict(native=True)) if not self.rep.is_zero else {}

    @property
    def is_zero(self):
        return self.rep.is_zero

    @property
    def zdeg(self):
        return NEG_INF if self.is_zero else int(self.rep.degree(Z))

    @property
    def wdeg(self):
        return NEG_INF if self.is_zero else int(self.rep.degree(W))

    @property
    def total_degree(self):
        return NEG_INF if self.is_zero else int(self.rep.total_degree())

    @property
    def coeffs(self):
        """ Tight coefficient rectangle, coeffs[i][j] for z^i w^j. """
        if self.is_zero:
            return []
        zero = self.scalar.domain.zero
        rows = [[zero] * (self.wdeg + 1) for _ in range(self.zdeg + 1)]
        for (i, j), c in self.terms.items():
            rows[i][j] = c
        return rows

    @property
    def is_real(self):
        return all(self.scalar.is_real(c) for c in self.terms.values())

    def coefficient_in_w(self, j):
        """ The polynomial in z multiplying w^j. """
        return Poly1.from_coeffs(self._slice(lambda i, k: k == j, lambda i, k: i), self.scalar)

    def coefficient_in_z(self, i):
        """ The polynomial in w multiplying z^i, written in the variable z. """
        return Poly1.from_coeffs(self._slice(lambda k, j: k == i, lambda k, j: j), self.scalar)

    def _slice(self, keep, index):
        coeffs = {}
        for (i, j), c in self.terms.items():
            if keep(i, j):
                coeffs[index(i, j)] = c
        size = max(coeffs) + 1 if coeffs else 0
        return [coeffs.get(k, self.scalar.domain.zero) for k in range(size)]

    def __call__(self, z, w):
        return eval2(self, z, w)

    def _wrap(self, rep):
        return Poly2(rep, self.scalar)

    def _coerce(self, other):
        if isinstance(other, Poly2):
            assert other.scalar == self.scalar, 'mixed backends: %r and %r' % (self.scalar, other.scalar)
            return other.rep
        if isinstance(other, Poly1):
            return Poly2.from_poly1(other).rep
        return Poly.from_dict({(0, 0): self.scalar.convert(other)}, Z, W, domain=self.scalar.domain)

    def __add__(self, other):
        return self._wrap(self.rep + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.rep - self._coerce(other))

    def __rsub__(self, other):
        return self._wrap(self._coerce(other) - self.rep)

    def __mul__(self, other):
        if isinstance(other, (Poly1, Poly2)):
            return self._wrap(self.rep * self._coerce(other))
        return self._wrap(self.rep.mul_ground(self.scalar.convert(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.rep)

    def __pow__(self, k):
        return self._wrap(self.rep ** k)

    def __eq__(self, other):
        return isinstance(other, Poly2) and self.scalar == other.scalar and self.rep == other.rep

    def __hash__(self):
        return hash((self.rep, self.scalar))

    def __repr__(self):
        return 'Poly2(%s)' % self.rep.as_expr()

    def __str__(self):
        return str(self.rep.as_expr())

    def as_expr(self):
        return self.rep.as_expr()

    def with_provenance(self, provenance):
        return Poly2(self.rep, self.scalar, provenance)

    def map_terms(self, fn):
        """ Rebuilds from fn(i, j, c) -> {(i', j'): c'} over every term. """
        terms = {}
        for (i, j), c in self.terms.items():
            for key, value in fn(i, j, c).items():
                terms[key] = terms.get(key, self.scalar.domain.zero) + value
        return Poly2.from_dict(terms, self.scalar)

    def reflect(self, z=False, w=False):
        """ f(+-z, +-w) """
        def flip(i, j, c):
            sign = (-1) ** ((i if z else 0) + (j if w else 0))
            return {(i, j): c if sign > 0 else -c}
        return self.map_terms(flip)

    def swap(self):
        """ f(w, z) """
        return self.map_terms(lambda i, j, c: {(j, i): c})

    def real_part(self):
        return self.map_terms(lambda i, j, c: {(i, j): self.scalar.real(c)})

    def imag_part(self):
        return self.map_terms(lambda i, j, c: {(i, j): self.scalar.imag(c)})

    def conjugate(self):
        return self.map_terms(lambda i, j, c: {(i, j): self.scalar.conjugate(c)})

    def rationalize(self):
        if self.scalar.exact:
            return self
        return Poly2.from_dict({k: complex(c) for k, c in self.terms.items()}, EXACT_SCALAR, self.provenance)

    def to_numpy(self):
        if self.is_zero:
            return numpy.zeros((1, 1), dtype=complex)
        out = numpy.zeros((self.zdeg + 1, self.wdeg + 1), dtype=complex)
        for (i, j), c in self.terms.items():
            out[i, j] = to_complex(c)
        return out

    def to_json(self):
        return [[format_scalar(c) for c in row] for row in self.coeffs]


class RootSet(object):
    """ Roots as (value, multiplicity, radius) clusters; each disk holds exactly `multiplicity` roots. """

    def __init__(self, roots):
        self.roots = tuple(roots)

    @property
    def degree(self):
        return sum(r.multiplicity for r in self.roots)

    def values(self):
        return [r.value for r in self.roots for _ in range(r.multiplicity)]

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    def __repr__(self):
        return 'RootSet(%s)' % ', '.join('%s^%d' % (r.value, r.multiplicity) for r in self.roots)


def derivative(f):
    return Poly1(f.rep.diff(Z), f.scalar)


def eval2(f, z, w):
    K = f.scalar.domain
    z, w = f.scalar.convert(z), f.scalar.convert(w)
    return _horner([_horner(row, w, K.zero) for row in f.coeffs], z, K.zero)


def _sturm_value(seq, x):
    if x is None:
        raise ValueError('unbounded endpoint')
    return [_horner(list(reversed(p.as_list(native=True))), x, QQ.zero) for p in seq]


def _sturm_at_infinity(seq, sign):
    return [p.LC() * (sign ** p.degree()) for p in seq]


def sturm_count(g, interval=None):
    """
    Distinct real roots of the square-free rational polynomial `g` in the closed interval
    (lo, hi); None stands for an infinite endpoint.
    """
    lo, hi = interval if interval is not None else (None, None)
    seq = g.sturm()
    v_lo = sign_changes(_sturm_at_infinity(seq, -1) if lo is None else _sturm_value(seq, QQ.convert(lo)))
    v_hi = sign_changes(_sturm_at_infinity(seq, 1) if hi is None else _sturm_value(seq, QQ.convert(hi)))
    count = v_lo - v_hi
    if lo is not None and not _horner(list(reversed(g.as_list(native=True))), QQ.convert(lo), QQ.zero):
        count += 1
    return count


def _qq_endpoint(x):
    if x is None:
        return None
    return EXACT_SCALAR.convert(x).x


def real_root_count(f, interval=None):
    """
    Real roots of a real polynomial, distinct and with multiplicity, in the closed `interval`
    (None for all of the real line, None endpoints for infinite ones).
    """
    if f.is_zero:
        raise ZeroPolynomial('real_root_count of the zero polynomial')
    assert f.is_real, 'real_root_count needs real coefficients: %s' % f
    if not f.scalar.exact:
        return _approx_real_root_count(f, interval)
    if f.degree < 1:
        return RealRootCount(0, 0)

    if interval is not None:
        interval = tuple(_qq_endpoint(x) for x in interval)
    _, factors = f.to_qq().sqf_list()
    distinct = total = 0
    for g, k in factors:
        if g.degree() < 1:
            continue
        count = sturm_count(g, interval)
        distinct += count
        total += count * k
    return RealRootCount(distinct, total)


def _approx_real_root_count(f, interval):
    if f.degree < 1:
        return RealRootCount(0, 0)
    tol = f.scalar.tolerance
    lo, hi = interval if interval is not None else (None, None)
    distinct = total = 0
    for r in all_roots(f):
        slack = max(r.radius, tol)
        if abs(r.value.imag) > slack:
            continue
        if lo is not None and r.value.real < float(lo) - slack:
            continue
        if hi is not None and r.value.real > float(hi) + slack:
            continue
        distinct += 1
        total += r.multiplicity
    return RealRootCount(distinct, total)


def square_free_factors(f):
    """ [(highest-first coefficients, multiplicity)] for an exact polynomial. """
    try:
        _, factors = f.rep.sqf_list()
    except (PolynomialError, DomainError, NotImplementedError) as e:
        log.debug('square-free decomposition failed for %s: %s', f, e)
        return [(f.rep.as_list(native=True), 1)]
    return [(g.as_list(native=True), k) for g, k in factors if g.degree() > 0]


def all_roots(f):
    if f.is_zero:
        raise ZeroPolynomial('all_roots of the zero polynomial')
    if f.degree < 1:
        raise ConstantPolynomial('all_roots of the constant %s' % f)

    if f.scalar.exact:
        roots = root_engine.exact_roots(square_free_factors(f))
    else:
        roots = root_engine.companion_roots(f.to_numpy()[::-1], f.scalar.tolerance)

    result = RootSet(roots)
    assert result.degree == f.degree, 'root multiplicities sum to %d for degree %d polynomial %s' % (
        result.degree, f.degree, f)
    return result


def polarization_variables(d):
    return sympy.symbols('x1:%d' % (d + 1)) if d > 0 else ()


def elementary_symmetric(d):
    """ (e_0, ..., e_d) in the variables x1..xd, as sympy expressions. """
    xs = polarization_variables(d)
    return tuple(sympy.Add(*[sympy.Mul(*subset) for subset in combinations(xs, k)]) for k in range(d + 1))
