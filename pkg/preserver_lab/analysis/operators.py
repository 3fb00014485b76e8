import logging
import math
from collections import namedtuple

from preserver_lab.algebra.components import NEG_INF, PLUS, MINUS
from preserver_lab.algebra.components.matrices import exact_pivots, numeric_pivots, as_complex_matrix
from preserver_lab.algebra.components.scalar import EXACT_SCALAR, to_complex
from preserver_lab.algebra.domains import (
    INVERSE, FORWARD, circ_symbol_kernel, conjugate_poly)
from preserver_lab.algebra.poly import Poly1, Poly2
from preserver_lab.errors import DegreeExceeded, DimensionMismatch

log = logging.getLogger(__name__)

CIRC = 'circ'
GT_TRUNC = 'gt_trunc'
SYMBOL_KINDS = (PLUS, MINUS, CIRC, GT_TRUNC)

RangeAnalysis = namedtuple('RangeAnalysis', ['rank', 'basis', 'phase', 'rotation', 'real_basis'])


def falling_factorial(n, k):
    """ (n)_k = n(n-1)...(n-k+1) """
    out = 1
    for j in range(k):
        out *= n - j
    return out


class MultiplierSeq(object):
    """ T(z^k) = lambda(k) z^k """

    def __init__(self, lambdas, scalar=EXACT_SCALAR):
        self.scalar = scalar
        self.lambdas = tuple(scalar.convert(x) for x in lambdas)
        assert all(scalar.is_real(x) for x in self.lambdas), 'multiplier sequences are real'

    def __len__(self):
        return len(self.lambdas)

    def __getitem__(self, k):
        return self.lambdas[k] if k < len(self.lambdas) else self.scalar.domain.zero

    def operator(self, n):
        return LinearOperator([Poly1.from_coeffs([0] * k + [self[k]], self.scalar) for k in range(n + 1)],
                              n, self.scalar)


class DiffOpForm(object):
    """ T = sum_k Q_k(z) d^k/dz^k """

    def __init__(self, qs):
        self.qs = tuple(qs)

    def operator(self, n, scalar=EXACT_SCALAR):
        columns = []
        for k in range(n + 1):
            col = Poly1.zero(scalar)
            for j, q in enumerate(self.qs[:k + 1]):
                col = col + q * Poly1.monomial(k - j, scalar) * falling_factorial(k, j)
            columns.append(col)
        return LinearOperator(columns, n, scalar)

    def __eq__(self, other):
        strip = lambda qs: list(qs[:max([k + 1 for k, q in enumerate(qs) if not q.is_zero] or [0])])
        return isinstance(other, DiffOpForm) and strip(self.qs) == strip(other.qs)

    def __repr__(self):
        return 'DiffOpForm(%s)' % ', '.join(str(q) for q in self.qs)


class SymbolSeries(object):
    """ P_k = (-1)^k T(z^k) / k! for k <= N, the coefficients of the formal symbol sum_k P_k(z) w^k. """

    def __init__(self, ps):
        self.ps = tuple(ps)

    @property
    def order(self):
        return len(self.ps) - 1

    def truncation(self, n):
        """ sum_k (n)_k P_k(z) w^k, which equals T[(1 - zw)^n] """
        assert n <= self.order, 'truncation %d beyond series order %d' % (n, self.order)
        return Poly2.from_w_columns([p * falling_factorial(n, k) for k, p in enumerate(self.ps[:n + 1])],
                                    self.ps[0].scalar)

    def truncations(self):
        return [self.truncation(n) for n in range(self.order + 1)]

    def as_poly(self):
        return Poly2.from_w_columns(self.ps, self.ps[0].scalar)


class LinearOperator(object):
    """
    T on polynomials of degree <= n, stored by its columns T(z^k). `m` is the largest degree of
    any column (NEG_INF for the zero operator) and is always recomputed from the columns.
    """

    def __init__(self, columns, n, scalar=EXACT_SCALAR):
        if len(columns) != n + 1:
            raise DimensionMismatch('%d columns given for degree bound %d' % (len(columns), n))
        for col in columns:
            assert col.scalar == scalar, 'column backend %r differs from %r' % (col.scalar, scalar)
        self.n = n
        self.columns = tuple(columns)
        self.scalar = scalar
        self.m = max([c.degree for c in self.columns] or [NEG_INF])

    @classmethod
    def from_columns(cls, columns, n=None, scalar=EXACT_SCALAR):
        """ columns[k] lists the coefficients of T(z^k), lowest degree first. """
        n = len(columns) - 1 if n is None else n
        return cls([Poly1.from_coeffs(c, scalar) for c in columns], n, scalar)

    @classmethod
    def from_matrix(cls, rows, n=None, scalar=EXACT_SCALAR):
        """ rows[i][k] is the coefficient of z^i in T(z^k). """
        width = len(rows[0]) if rows else 0
        if any(len(row) != width for row in rows):
            raise DimensionMismatch('ragged operator matrix')
        n = width - 1 if n is None else n
        if width != n + 1:
            raise DimensionMismatch('matrix has %d columns for degree bound %d' % (width, n))
        return cls.from_columns([[row[k] for row in rows] for k in range(width)], n, scalar)

    @classmethod
    def identity(cls, n, scalar=EXACT_SCALAR):
        return cls([Poly1.monomial(k, scalar) for k in range(n + 1)], n, scalar)

    @classmethod
    def derivative(cls, n, scalar=EXACT_SCALAR):
        return DiffOpForm([Poly1.zero(scalar), Poly1.from_coeffs([1], scalar)]).operator(n, scalar)

    @classmethod
    def zero(cls, n, scalar=EXACT_SCALAR):
        return cls([Poly1.zero(scalar)] * (n + 1), n, scalar)

    @property
    def matrix(self):
        """ (m+1) x (n+1) rows; empty for the zero operator. """
        if self.m == NEG_INF:
            return []
        return [[col.coefficient(i) for col in self.columns] for i in range(self.m + 1)]

    @property
    def is_zero(self):
        return self.m == NEG_INF

    @property
    def is_real(self):
        return all(col.is_real for col in self.columns)

    def __call__(self, f):
        return apply(self, f)

    def restrict(self, k):
        """ The same operator on degree <= k. """
        if k > self.n:
            raise DegreeExceeded(k, self.n)
        return LinearOperator(self.columns[:k + 1], k, self.scalar)

    def __add__(self, other):
        if other.n != self.n:
            raise DimensionMismatch('degree bounds %d and %d differ' % (self.n, other.n))
        return LinearOperator([a + b for a, b in zip(self.columns, other.columns)], self.n, self.scalar)

    def __mul__(self, c):
        return LinearOperator([col * c for col in self.columns], self.n, self.scalar)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LinearOperator) and self.n == other.n and self.columns == other.columns

    def __hash__(self):
        return hash((self.n, self.columns))

    def __repr__(self):
        return 'LinearOperator(n=%d, m=%s, %s)' % (self.n, self.m, ', '.join(str(c) for c in self.columns))

    def rationalize(self):
        if self.scalar.exact:
            return self
        return LinearOperator([c.rationalize() for c in self.columns], self.n, EXACT_SCALAR)

    def to_diffop(self):
        """ The unique Q_0..Q_n with T = sum_k Q_k d^k/dz^k on degree <= n. """
        qs = []
        for k, col in enumerate(self.columns):
            rest = col
            for j, q in enumerate(qs):
                rest = rest - q * Poly1.monomial(k - j, self.scalar) * falling_factorial(k, j)
            qs.append(rest * (self.scalar.domain.one / math.factorial(k)))
        return DiffOpForm(qs)

    def to_multiplier(self):
        """ The multiplier sequence when T is diagonal with real entries, else None. """
        lambdas = []
        for k, col in enumerate(self.columns):
            if any(not self.scalar.is_zero(c) for i, c in enumerate(col.coeffs) if i != k):
                return None
            lambdas.append(col.coefficient(k))
        if not all(self.scalar.is_real(x) for x in lambdas):
            return None
        return MultiplierSeq(lambdas, self.scalar)

    def to_json(self):
        return {'degree_bound': self.n, 'matrix': [col.to_json() for col in self.columns]}


def construct(source, n, scalar=EXACT_SCALAR):
    """ LinearOperator from a MultiplierSeq, a DiffOpForm or a list of column coefficient lists. """
    if isinstance(source, MultiplierSeq):
        return source.operator(n)
    if isinstance(source, DiffOpForm):
        return source.operator(n, scalar)
    if len(source) != n + 1:
        raise DimensionMismatch('%d columns given for degree bound %d' % (len(source), n))
    return LinearOperator.from_columns(source, n, scalar)


def apply(T, f):
    if f.degree > T.n:
        raise DegreeExceeded(f.degree, T.n)
    out = Poly1.zero(T.scalar)
    for k, c in enumerate(f.coeffs):
        if not T.scalar.is_zero(c):
            out = out + T.columns[k] * c
    return out


def apply_ext2(T, f):
    """ T acting on z alone: T(z^k w^l) = T(z^k) w^l. """
    if f.zdeg > T.n:
        raise DegreeExceeded(f.zdeg, T.n)
    if f.is_zero:
        return f
    columns = [apply(T, f.coefficient_in_w(j)) for j in range(f.wdeg + 1)]
    return Poly2.from_w_columns(columns, f.scalar)


def compose(S, T):
    """ S . T; S must accept every image of T. """
    if T.m != NEG_INF and T.m > S.n:
        raise DimensionMismatch('codomain degree %d of T exceeds domain bound %d of S' % (T.m, S.n))
    return LinearOperator([apply(S, col) if not col.is_zero else col for col in T.columns], T.n, T.scalar)


def reflect(n, scalar=EXACT_SCALAR):
    """ R(f)(z) = f(-z) on degree <= n. """
    return LinearOperator([Poly1.from_coeffs([0] * k + [(-1) ** k], scalar) for k in range(n + 1)], n, scalar)


def _binomial_symbol(T, n, sign):
    if n > T.n:
        raise DegreeExceeded(n, T.n)
    K = T.scalar
    terms = {}
    for k in range(n + 1):
        weight = math.comb(n, k) * (sign ** (n - k))
        for i, c in enumerate(T.columns[k].coeffs):
            terms[(i, n - k)] = terms.get((i, n - k), K.domain.zero) + c * weight
    return Poly2.from_dict(terms, K)


def gt_series(T, N):
    if N > T.n:
        raise DegreeExceeded(N, T.n)
    K = T.scalar
    return SymbolSeries([T.columns[k] * (K.domain.one * (-1) ** k / math.factorial(k)) for k in range(N + 1)])


def symbol(T, n, kind=PLUS, mobius=None, sign=PLUS):
    """
    plus/minus: T[(z +- w)^n]; circ: T applied to the circular kernel of `mobius`;
    gt_trunc: the SymbolSeries of order n.
    """
    assert kind in SYMBOL_KINDS, 'unknown symbol kind: %s' % kind
    if kind == PLUS:
        return _binomial_symbol(T, n, 1)
    if kind == MINUS:
        return _binomial_symbol(T, n, -1)
    if kind == CIRC:
        assert mobius is not None, 'circular symbols need a Mobius map'
        if n > T.n:
            raise DegreeExceeded(n, T.n)
        return apply_ext2(T.restrict(n), circ_symbol_kernel(mobius, n, sign))
    return gt_series(T, n)


def conjugate_operator(T, mobius):
    """ S = phi_m^-1 T phi_n, column by column. """
    if T.is_zero:
        return T
    columns = []
    for k in range(T.n + 1):
        image = apply(T, conjugate_poly(mobius, T.n, Poly1.monomial(k, T.scalar), FORWARD))
        columns.append(conjugate_poly(mobius, T.m, image, INVERSE) if not image.is_zero else image)
    return LinearOperator(columns, T.n, T.scalar)


def range_analysis(T):
    """
    Rank and a column basis of the range. When some unit eta makes every column real,
    `phase` is eta = conj(e)/|e| for the largest-magnitude entry e (first in column order on ties),
    `rotation` the exact multiplier 1/e (a positive multiple of eta) and `real_basis` the rotated basis.
    """
    K = T.scalar
    rows = T.matrix
    if not rows:
        return RangeAnalysis(0, [], complex(1), K.domain.one, [])

    if K.exact:
        pivots = exact_pivots(rows, K.domain)
    else:
        pivots = numeric_pivots(as_complex_matrix(rows), K.tolerance)
    basis = [T.columns[p] for p in pivots]

    entries = [c for col in T.columns for c in col.coeffs]
    magnitudes = [abs(to_complex(c)) for c in entries]
    e = entries[magnitudes.index(max(magnitudes))]
    rotation = K.domain.one / e
    if all(K.is_real(c * rotation) for c in entries):
        value = to_complex(e)
        phase = value.conjugate() / abs(value)
        real_basis = [(p * rotation).real_part() for p in basis]
        return RangeAnalysis(len(pivots), basis, phase, rotation, real_basis)
    return RangeAnalysis(len(pivots), basis, None, None, None)
