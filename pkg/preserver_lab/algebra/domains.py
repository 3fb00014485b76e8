import logging
from collections import namedtuple

from preserver_lab.algebra.components import PLUS, MINUS
from preserver_lab.algebra.components.scalar import EXACT_SCALAR, to_complex, format_scalar
from preserver_lab.algebra.poly import Poly1, Poly2
from preserver_lab.errors import DegenerateMap, DegreeExceeded, ValidationError

log = logging.getLogger(__name__)

DISK = 'disk'
HALF_PLANE = 'half_plane'
EXTERIOR = 'exterior'

OPEN = 'open_C'
CLOSED_COMPLEMENT = 'closed_complement'
BOUNDARY = 'boundary'
REVERSED = 'reversed'
VIEWS = (OPEN, CLOSED_COMPLEMENT, BOUNDARY, REVERSED)

FORWARD = 'forward'
INVERSE = 'inverse'

Z_ONLY = 'z_only'
W_ONLY = 'w_only'
BOTH = 'both'


class _Infinity(object):
    def __repr__(self):
        return 'INFINITY'


# image of -d/c under a map with c != 0
INFINITY = _Infinity()

DomainShape = namedtuple('DomainShape', ['kind', 'center', 'radius_squared', 'beta', 'delta'])


def _abs2(scalar, x):
    return x * scalar.conjugate(x)


class Mobius(object):
    """
    Phi(z) = (az + b) / (cz + d) with ad - bc != 0. The induced domain C = Phi^-1(H) is
    {N(z) > 0} for N(z) = alpha|z|^2 + Im(beta z) + delta, where alpha = Im(a conj(c)),
    beta = a conj(d) - conj(b) c and delta = Im(b conj(d)).
    """

    def __init__(self, a, b, c, d, scalar=EXACT_SCALAR):
        K = scalar
        self.scalar = scalar
        self.a, self.b, self.c, self.d = (K.convert(x) for x in (a, b, c, d))
        self.det = self.a * self.d - self.b * self.c
        if K.is_zero(self.det):
            raise DegenerateMap('ad - bc = 0 for (a, b, c, d) = (%s, %s, %s, %s)' % (a, b, c, d))

        self.alpha = K.imag(self.a * K.conjugate(self.c))
        self.beta = self.a * K.conjugate(self.d) - K.conjugate(self.b) * self.c
        self.delta = K.imag(self.b * K.conjugate(self.d))
        self.shape = self._classify()

        if self.shape.kind == HALF_PLANE and not K.is_zero(self.c):
            raise ValidationError(
                'half-plane maps must be a rotation composed with a translation (c = 0); '
                'use Mobius.normalize(a, b, c, d), which gives the equivalent map (%s)z + (%s)' % (
                    self.beta, K.convert((0, 1)) * self.delta), '/mobius/c')

    @classmethod
    def identity(cls, scalar=EXACT_SCALAR):
        return cls(1, 0, 0, 1, scalar)

    @classmethod
    def half_plane(cls, beta, delta, scalar=EXACT_SCALAR):
        """ The map beta*z + i*delta, whose domain is {Im(beta z) + delta > 0}. """
        delta = scalar.convert(delta)
        return cls(beta, scalar.convert((0, 1)) * delta, 0, 1, scalar)

    @classmethod
    def normalize(cls, a, b, c, d, scalar=EXACT_SCALAR):
        """ Same domain, with half-plane maps rewritten in c = 0 form. """
        K = scalar
        a, b, c, d = (K.convert(x) for x in (a, b, c, d))
        if K.is_zero(a * d - b * c):
            raise DegenerateMap('ad - bc = 0')
        if not K.is_zero(K.imag(a * K.conjugate(c))) or K.is_zero(c):
            return cls(a, b, c, d, scalar)
        beta = a * K.conjugate(d) - K.conjugate(b) * c
        delta = K.imag(b * K.conjugate(d))
        return cls.half_plane(beta, delta, scalar)

    def _classify(self):
        K = self.scalar
        if K.is_zero(self.alpha):
            return DomainShape(HALF_PLANE, None, None, self.beta, self.delta)
        u = -K.convert((0, 1)) * self.beta
        center = -K.conjugate(u) / (2 * self.alpha)
        radius_squared = _abs2(K, u) / (4 * self.alpha * self.alpha) - self.delta / self.alpha
        kind = EXTERIOR if to_complex(self.alpha).real > 0 else DISK
        return DomainShape(kind, center, radius_squared, self.beta, self.delta)

    @property
    def kind(self):
        return self.shape.kind

    @property
    def coefficients(self):
        return self.a, self.b, self.c, self.d

    def inverse(self):
        return Mobius(self.d, -self.b, -self.c, self.a, self.scalar)

    def rationalize(self):
        if self.scalar.exact:
            return self
        return Mobius(*(self.scalar.to_exact(x) for x in self.coefficients))

    def __call__(self, point):
        point = self.scalar.convert(point)
        den = self.c * point + self.d
        if self.scalar.is_zero(den):
            return INFINITY
        return (self.a * point + self.b) / den

    def pole(self):
        """ -d/c, the point sent to infinity, or None for affine maps. """
        if self.scalar.is_zero(self.c):
            return None
        return -self.d / self.c

    def level(self, point):
        """ N(point), whose sign is the sign of Im Phi(point) and which vanishes on the boundary. """
        K = self.scalar
        point = K.convert(point)
        return self.alpha * _abs2(K, point) + K.imag(self.beta * point) + self.delta

    def __eq__(self, other):
        return isinstance(other, Mobius) and self.coefficients == other.coefficients and self.scalar == other.scalar

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return 'Mobius(a=%s, b=%s, c=%s, d=%s)' % self.coefficients

    def to_json(self):
        return {k: format_scalar(v) for k, v in zip('abcd', self.coefficients)}


def classify_domain(m):
    """ (kind, params): center and squared radius for disks and exteriors, (beta, delta) for half-planes. """
    shape = m.shape
    if shape.kind == HALF_PLANE:
        return shape.kind, {'beta': shape.beta, 'delta': shape.delta}
    return shape.kind, {'center': shape.center, 'radius_squared': shape.radius_squared}


class CircularDomain(object):
    """ C = Phi^-1(H) seen through one of its point-set views (C, C', dC or C^r). """

    def __init__(self, mobius, view=OPEN):
        assert view in VIEWS, 'unknown view: %s' % view
        self.mobius = mobius
        self.view = view

    def with_view(self, view):
        return CircularDomain(self.mobius, view)

    @property
    def kind(self):
        return self.mobius.kind

    @property
    def scalar(self):
        return self.mobius.scalar

    def contains(self, point):
        K = self.scalar
        level = self.mobius.level(point)
        if K.exact:
            sign = (level.x > 0) - (level.x < 0)
        else:
            value = to_complex(level).real
            scale = 1 + abs(to_complex(K.convert(point))) ** 2
            sign = 0 if abs(value) <= K.tolerance * scale else (1 if value > 0 else -1)
        return {
            OPEN: sign > 0,
            REVERSED: sign < 0,
            BOUNDARY: sign == 0,
            CLOSED_COMPLEMENT: sign <= 0,
        }[self.view]

    def __repr__(self):
        return 'CircularDomain(%r, view=%s)' % (self.mobius, self.view)


def contains(domain, point):
    return domain.contains(point)


def _map_params(m, direction):
    if direction == FORWARD:
        return m.a, m.b, m.c, m.d, None
    assert direction == INVERSE, 'unknown direction: %s' % direction
    return m.d, -m.b, -m.c, m.a, m.det


def conjugate_poly(m, n, f, direction=FORWARD):
    """
    phi_n(f)(z) = (cz + d)^n f(Phi(z)); the inverse direction applies (ad - bc)^-n times the
    inverse map's phi_n, so inverse(forward(f)) = f on degree <= n.
    """
    if f.degree > n:
        raise DegreeExceeded(f.degree, n)
    a, b, c, d, det = _map_params(m, direction)
    K = f.scalar
    num = Poly1.from_coeffs([b, a], K)
    den = Poly1.from_coeffs([d, c], K)
    result = Poly1.zero(K)
    for k, coeff in enumerate(f.coeffs):
        if not K.is_zero(coeff):
            result = result + num ** k * den ** (n - k) * coeff
    if det is not None:
        result = result * (K.domain.one / det ** n)
    return Poly1.from_coeffs(result.coeffs, K)


def _conjugate_z(m, f, degree, direction):
    columns = [conjugate_poly(m, degree, f.coefficient_in_w(j), direction) for j in range(f.wdeg + 1)]
    return Poly2.from_w_columns(columns, f.scalar)


def conjugate_bivar(m, f, mz, nw, which=BOTH, direction=FORWARD):
    """ phi_{mz,z} and/or phi_{nw,w} applied to f; both = phi_{nw,w} . phi_{mz,z}. """
    if f.is_zero:
        return f
    if f.zdeg > mz and which in (Z_ONLY, BOTH):
        raise DegreeExceeded(f.zdeg, mz)
    if f.wdeg > nw and which in (W_ONLY, BOTH):
        raise DegreeExceeded(f.wdeg, nw)
    if which in (Z_ONLY, BOTH):
        f = _conjugate_z(m, f, mz, direction)
    if which in (W_ONLY, BOTH) and not f.is_zero:
        f = _conjugate_z(m, f.swap(), nw, direction).swap()
    return f


def circ_symbol_kernel(m, n, sign=PLUS):
    """ ((az + b)(cw + d) +- (aw + b)(cz + d))^n """
    assert sign in (PLUS, MINUS), 'unknown sign: %s' % sign
    K = m.scalar
    a, b, c, d = m.coefficients
    zl = Poly2.from_dict({(1, 0): a, (0, 0): b}, K)
    wr = Poly2.from_dict({(0, 1): c, (0, 0): d}, K)
    wl = Poly2.from_dict({(0, 1): a, (0, 0): b}, K)
    zr = Poly2.from_dict({(1, 0): c, (0, 0): d}, K)
    base = zl * wr + wl * zr if sign == PLUS else zl * wr - wl * zr
    return base ** n
