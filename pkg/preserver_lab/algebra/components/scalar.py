from fractions import Fraction
from numbers import Integral

import mpmath
import sympy
from sympy import CC, QQ, QQ_I
from sympy.polys.domains.domainelement import DomainElement

from preserver_lab.algebra.components import EXACT, FLOAT, DEFAULT_TOLERANCE


def _fraction(value):
    if isinstance(value, bool):
        raise TypeError('booleans are not scalars')
    if isinstance(value, (Integral, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        # shortest decimal repr, so 0.1 becomes 1/10 rather than its binary expansion
        return Fraction(repr(float(value)))
    if isinstance(value, str):
        return Fraction(value.strip())
    if hasattr(value, '_mpf_'):
        value = mpmath.mpf(value)
        return Fraction(int(value.man)) * Fraction(2) ** int(value.exp)
    if isinstance(value, sympy.Basic):
        if value.is_Float:
            return Fraction(repr(float(value)))
        if not value.is_Rational:
            raise TypeError('not a rational number: %s' % value)
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, 'numerator') and hasattr(value, 'denominator'):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError('cannot read %r as a rational number' % (value,))


def _parts(value):
    if isinstance(value, (list, tuple)):
        assert len(value) == 2, 'complex scalars are [re, im] pairs, got %r' % (value,)
        return value[0], value[1]
    if isinstance(value, complex):
        return value.real, value.imag
    # sympy expressions such as 2 - I also carry _mpc_
    if isinstance(value, sympy.Basic):
        if value.is_real:
            return value, 0
        return sympy.re(value), sympy.im(value)
    if hasattr(value, '_mpc_'):
        return value.real, value.imag
    return value, 0


class Scalar(object):
    """
    Coefficient backend. The exact backend works over the Gaussian rationals and never rounds;
    the float backend works over machine complex numbers and decides zero against `tolerance`.
    """

    def __init__(self, backend=EXACT, tolerance=None):
        assert backend in (EXACT, FLOAT), 'unknown backend: %s' % backend
        if backend == EXACT:
            tolerance = 0.0
        elif tolerance is None:
            tolerance = DEFAULT_TOLERANCE
        assert tolerance >= 0, 'negative tolerance: %s' % tolerance
        self.backend = backend
        self.tolerance = float(tolerance)

    @classmethod
    def floating(cls, tolerance=DEFAULT_TOLERANCE):
        return cls(FLOAT, tolerance)

    @property
    def exact(self):
        return self.backend == EXACT

    @property
    def domain(self):
        return QQ_I if self.exact else CC

    def __eq__(self, other):
        return isinstance(other, Scalar) and (self.backend, self.tolerance) == (other.backend, other.tolerance)

    def __hash__(self):
        return hash((self.backend, self.tolerance))

    def __repr__(self):
        if self.exact:
            return 'Scalar(exact)'
        return 'Scalar(float, tol=%g)' % self.tolerance

    def convert(self, value):
        if isinstance(value, DomainElement) and value.parent() == self.domain:
            return value
        if isinstance(value, DomainElement):
            return self.domain.convert_from(value, value.parent())
        re, im = _parts(value)
        if self.exact:
            re, im = _fraction(re), _fraction(im)
            return QQ_I(QQ(re.numerator, re.denominator), QQ(im.numerator, im.denominator))
        return CC(complex(float(re), float(im)))

    def real(self, value):
        return QQ_I(value.x, 0) if self.exact else CC(complex(value).real)

    def imag(self, value):
        return QQ_I(value.y, 0) if self.exact else CC(complex(value).imag)

    def conjugate(self, value):
        return QQ_I(value.x, -value.y) if self.exact else CC(complex(value).conjugate())

    def is_zero(self, value):
        if self.exact:
            return not value
        return abs(complex(value)) <= self.tolerance

    def is_real(self, value):
        if self.exact:
            return not value.y
        return abs(complex(value).imag) <= self.tolerance

    def chop(self, values):
        if self.exact:
            return list(values)
        return [v if abs(complex(v)) > self.tolerance else CC.zero for v in values]

    def to_exact(self, value):
        """ Rationalizes a float-backend value through its shortest decimal representation. """
        if self.exact:
            return value
        return EXACT_SCALAR.convert(complex(value))


EXACT_SCALAR = Scalar()


def to_complex(value):
    """ Python complex for any domain element, mpmath number or plain number. """
    if hasattr(value, 'x') and hasattr(value, 'y'):
        x, y = value.x, value.y
        return complex(int(x.numerator) / int(x.denominator), int(y.numerator) / int(y.denominator))
    return complex(value)


def to_mpc(value):
    """ mpmath complex at the current working precision, exact for Gaussian rationals. """
    if hasattr(value, 'x') and hasattr(value, 'y'):
        x, y = value.x, value.y
        return mpmath.mpc(mpmath.mpf(int(x.numerator)) / int(x.denominator),
                          mpmath.mpf(int(y.numerator)) / int(y.denominator))
    return mpmath.mpc(value)


def to_sympy(value):
    if hasattr(value, 'x') and hasattr(value, 'y'):
        return QQ_I.to_sympy(value)
    return sympy.sympify(complex(value))


def format_scalar(value):
    """ JSON form: "p/q" strings for rationals, [re, im] pairs when the imaginary part is nonzero. """
    if hasattr(value, 'x') and hasattr(value, 'y'):
        re, im = _rational_str(value.x), _rational_str(value.y)
        return re if not value.y else [re, im]
    value = complex(value)
    return value.real if not value.imag else [value.real, value.imag]


def _rational_str(q):
    num, den = int(q.numerator), int(q.denominator)
    return str(num) if den == 1 else '%d/%d' % (num, den)
