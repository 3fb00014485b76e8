"""
Bivariate stability oracle. `decide` answers stable with a certificate that can be re-checked
exactly, unstable with a point of H x H where the polynomial vanishes, or unknown with the
evidence of the search that failed to find one. The module also builds real stable polynomials
as determinants of positive semi-definite pencils, and their polarizations in the second
variable.
"""
import logging
import math
from collections import namedtuple
from fractions import Fraction
from itertools import combinations

import numpy
import sympy
from sympy import Poly, QQ
from sympy.polys.polyerrors import PolynomialError, DomainError, CoercionFailed

from preserver_lab.algebra.classify import is_stable1, pencil_relation
from preserver_lab.algebra.components.matrices import (
    symmetric_inertia, pencil_determinant, rationalize_vector, to_sympy_matrix)
from preserver_lab.algebra.components.scalar import EXACT_SCALAR, to_complex, format_scalar
from preserver_lab.algebra.domains import BOTH, INVERSE, INFINITY, conjugate_bivar
from preserver_lab.algebra.poly import Z, W, Poly1, Poly2, polarization_variables
from preserver_lab.analysis import search as falsifier
from preserver_lab.errors import ZeroPolynomial, DegreeExceeded, NotHyperbolic

log = logging.getLogger(__name__)

STABLE = 'stable'
UNSTABLE = 'unstable'
UNKNOWN = 'unknown'

DETERMINANTAL = 'determinantal'
DEGREE1_HB = 'degree1_hb'
PRODUCT = 'product'
QUADRATIC = 'quadratic_closed_form'
DOMAIN_PULLBACK = 'domain_pullback'
LINEAR = 'linear'
UNIVARIATE = 'univariate'

params = {
    'snap_denominators': (1, 2, 4, 8, 16, 64, 256),
    'snap_root_denominator': 4096,
    'probe_points': ((0, 1), (1, 1), (-1, 1), (0, 2), (0, Fraction(1, 2)), (2, 1), (-2, 1), (1, 2), (-1, 2)),
    'vanish_tolerance': 1e-9,
}

Witness = falsifier.Witness
SearchEvidence = falsifier.SearchEvidence


def jsonable(value):
    """ Plain JSON data for nested reports, polynomials, scalars and witnesses. """
    if hasattr(value, 'to_json'):
        return value.to_json()
    if isinstance(value, Witness):
        return witness_to_json(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, sympy.Basic):
        return str(value)
    if hasattr(value, 'x') and hasattr(value, 'y'):
        return format_scalar(value)
    if isinstance(value, (complex, numpy.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (float, numpy.floating)):
        return float(value) if math.isfinite(value) else None
    if isinstance(value, numpy.integer):
        return int(value)
    return value


class Certificate(namedtuple('Certificate', ['kind', 'data'])):
    """ A reason for stability that `verify` re-checks from scratch with rational arithmetic. """

    def verify(self, f):
        try:
            return _VERIFIERS[self.kind](self.data, f.rationalize())
        except (NotHyperbolic, DegreeExceeded) as e:
            log.debug('certificate %s rejected for %s: %s', self.kind, f, e)
            return False

    def to_json(self):
        return {'kind': self.kind, 'data': jsonable(self.data)}


def witness_to_json(witness):
    return {
        'z': [witness.z.real, witness.z.imag],
        'w': [witness.w.real, witness.w.imag],
        'residual': witness.residual,
    }


def evidence_to_json(evidence):
    finite = lambda x: x if x is not None and math.isfinite(x) else None
    return {
        'samples_tested': evidence.samples_tested,
        'min_modulus_found': finite(evidence.min_modulus_found),
        'best_margin': finite(evidence.best_margin),
        'grid': evidence.grid,
    }


class Verdict2(namedtuple('Verdict2', ['outcome', 'certificate', 'witness', 'evidence', 'notes'])):

    def __new__(cls, outcome, certificate=None, witness=None, evidence=None, notes=()):
        assert outcome != STABLE or certificate is not None, 'stable verdict without a certificate'
        assert outcome != UNSTABLE or witness is not None, 'unstable verdict without a witness'
        assert outcome != UNKNOWN or (evidence is not None and evidence.samples_tested > 0), \
            'unknown verdict without search evidence'
        return super().__new__(cls, outcome, certificate, witness, evidence, tuple(notes))

    @property
    def stable(self):
        return self.outcome == STABLE

    @property
    def unstable(self):
        return self.outcome == UNSTABLE

    @property
    def unknown(self):
        return self.outcome == UNKNOWN

    def to_json(self):
        return {
            'outcome': self.outcome,
            'certificate': None if self.certificate is None else self.certificate.to_json(),
            'witness': None if self.witness is None else witness_to_json(self.witness),
            'evidence': None if self.evidence is None else evidence_to_json(self.evidence),
            'notes': list(self.notes),
        }


# certificate checks

def _qq_rows(rows):
    return [[QQ.from_sympy(sympy.Rational(x)) for x in row] for row in rows]


def _is_symmetric(rows):
    return all(rows[i][j] == rows[j][i] for i in range(len(rows)) for j in range(i))


def _is_psd(rows):
    _, negative, _ = symmetric_inertia(_qq_rows(rows))
    return negative == 0


def _expand(A, B, C, sign):
    return Poly2.from_expr(sign * pencil_determinant(A, B, C, Z, W))


def _verify_determinantal(data, f):
    A, B, C = data['A'], data['B'], data['C']
    if not all(_is_symmetric(M) for M in (A, B, C)):
        return False
    if not (_is_psd(A) and _is_psd(B)):
        return False
    return _expand(A, B, C, data['sign']) == f


def _degree1_ok(q0, q1):
    """ q0 + w q1 with real q0, q1 is stable exactly when both are hyperbolic and q1 << q0. """
    try:
        return pencil_relation(q1, q0).f_ll_g
    except NotHyperbolic:
        return False


def _verify_degree1(data, f):
    g = f if data['orientation'] == 'w' else f.swap()
    if not g.is_real or g.wdeg > 1:
        return False
    q0, q1 = g.coefficient_in_w(0), g.coefficient_in_w(1)
    return q0 == data['q0'] and q1 == data['q1'] and _degree1_ok(q0, q1)


def _verify_product(data, f):
    product = Poly2.from_dict({(0, 0): data['constant']})
    for g, k, cert in data['factors']:
        if not cert.verify(g):
            return False
        product = product * g ** k
    return product == f


def _verify_quadratic(data, f):
    return quadratic_closed_form(f) is True


def _verify_linear(data, f):
    return f.total_degree <= 1 and _linear_stable(f)


def _univariate_part(f, variable):
    if variable == 'z':
        return f.coefficient_in_w(0) if f.wdeg <= 0 else None
    return f.coefficient_in_z(0) if f.zdeg <= 0 else None


def _verify_univariate(data, f):
    p = _univariate_part(f, data['variable'])
    return p is not None and p == data['poly'] and is_stable1(p).answer


def _verify_domain(data, f):
    mz, nw = data['degrees']
    if (f.zdeg, f.wdeg) != (mz, nw):
        return False
    pulled = conjugate_bivar(data['mobius'], f, mz, nw, BOTH, INVERSE)
    return pulled == data['pulled'] and data['inner'].verify(pulled)


_VERIFIERS = {
    DETERMINANTAL: _verify_determinantal,
    DEGREE1_HB: _verify_degree1,
    PRODUCT: _verify_product,
    QUADRATIC: _verify_quadratic,
    LINEAR: _verify_linear,
    UNIVARIATE: _verify_univariate,
    DOMAIN_PULLBACK: _verify_domain,
}


# certification

def _linear_stable(f):
    """ az + bw + c has no zero in H x H iff b/a >= 0 and Im(c/a) >= 0 (a or b may vanish). """
    K = EXACT_SCALAR
    a, b, c = (f.terms.get(k, K.domain.zero) for k in ((1, 0), (0, 1), (0, 0)))
    if not a and not b:
        return True
    if not a:
        return (c / b).y >= 0
    ratio = b / a
    return not ratio.y and ratio.x >= 0 and (c / a).y >= 0


def quadratic_closed_form(f):
    """
    Real stability of a real polynomial of total degree <= 2, or None when f is complex or of
    higher degree. Writing f = x'Mx for x = (z, w, 1), f is stable exactly when its top-degree
    part has coefficients of one sign and M (normalized to that sign) has a single positive
    eigenvalue.
    """
    f = f.rationalize()
    if f.is_zero or not f.is_real or f.total_degree > 2:
        return None
    coeff = lambda i, j: f.terms.get((i, j), EXACT_SCALAR.domain.zero).x
    if f.total_degree < 2:
        a, b = coeff(1, 0), coeff(0, 1)
        return a * b >= 0

    top = [coeff(2, 0), coeff(1, 1), coeff(0, 2)]
    sign = 1 if next(x for x in top if x) > 0 else -1
    a, b, c = (sign * x for x in top)
    if a < 0 or b < 0 or c < 0:
        return False
    d, e, g = (sign * coeff(1, 0), sign * coeff(0, 1), sign * coeff(0, 0))
    half = QQ(1, 2)
    M = [[a, b * half, d * half], [b * half, c, e * half], [d * half, e * half, g]]
    positive, _, _ = symmetric_inertia(M)
    return positive == 1


def _split_phase(g):
    """ (c, h) with g = c h and h real, or None when no constant phase makes g real. """
    terms = g.terms
    pivot = max(terms.values(), key=lambda c: abs(to_complex(c)))
    h = g * (EXACT_SCALAR.domain.one / pivot)
    if not h.is_real:
        return None
    return pivot, h


def _poly2_from_sympy(p):
    return Poly2.from_dict(dict(p.as_dict(native=True)))


def _factor_real(pivot, h):
    rep = Poly.from_dict({k: c.x for k, c in h.terms.items()}, *h.rep.gens, domain=QQ)
    constant, factors = rep.factor_list()
    return pivot * EXACT_SCALAR.convert(constant), [(_poly2_from_sympy(p), k) for p, k in factors]


def _factor_complex(g):
    try:
        constant, factors = g.rep.factor_list()
        return EXACT_SCALAR.convert(constant), [(_poly2_from_sympy(p), k) for p, k in factors]
    except (PolynomialError, DomainError, CoercionFailed, NotImplementedError, TypeError, AssertionError) as e:
        log.debug('no factorization over the Gaussian rationals for %s: %s', g, e)
        return EXACT_SCALAR.domain.one, [(g, 1)]


def _certify_univariate(g):
    for variable in ('z', 'w'):
        p = _univariate_part(g, variable)
        if p is not None:
            if is_stable1(p).answer:
                return Certificate(UNIVARIATE, {'variable': variable, 'poly': p})
            return None
    return None


def _certify_linear(g):
    if g.total_degree <= 1 and _linear_stable(g):
        return Certificate(LINEAR, {'a': g.terms.get((1, 0), 0), 'b': g.terms.get((0, 1), 0),
                                    'c': g.terms.get((0, 0), 0)})
    return None


def _certify_degree1(g):
    if not g.is_real:
        return None
    for orientation, h in (('w', g), ('z', g.swap())):
        if h.wdeg <= 1:
            q0, q1 = h.coefficient_in_w(0), h.coefficient_in_w(1)
            if _degree1_ok(q0, q1):
                return Certificate(DEGREE1_HB, {'orientation': orientation, 'q0': q0, 'q1': q1})
            return None
    return None


def _certify_quadratic(g):
    if quadratic_closed_form(g) is True:
        return Certificate(QUADRATIC, {'total_degree': g.total_degree})
    return None


def _certify_factor(g):
    for attempt in (_certify_univariate, _certify_degree1, _certify_linear, _certify_quadratic):
        cert = attempt(g)
        if cert is not None:
            return cert
    return None


def certify(f):
    """
    A Certificate of stability or None. Tries a generator's recorded certificate, then a
    factorization into individually certified factors, then the closed-form tests on f itself.
    Float inputs are certified through their rationalization.
    """
    if f.is_zero:
        return None
    if f.provenance is not None:
        if f.provenance.verify(f):
            return f.provenance
        log.warning('recorded certificate for %s failed re-verification', f)

    g = f.rationalize()
    split = _split_phase(g)
    constant, factors = _factor_real(*split) if split is not None else _factor_complex(g)
    if not factors or (len(factors) == 1 and factors[0][1] == 1 and constant == EXACT_SCALAR.domain.one):
        return _certify_factor(g)

    certified = []
    for p, k in factors:
        cert = _certify_factor(p)
        if cert is None:
            log.debug('factor %s of %s has no certificate', p, f)
            return None
        certified.append((p, k, cert))
    return Certificate(PRODUCT, {'constant': constant, 'factors': certified})


# falsification

def _snap(x, denominator):
    re = Fraction(x.real).limit_denominator(denominator)
    im = Fraction(x.imag).limit_denominator(denominator)
    return EXACT_SCALAR.convert((re, im))


def _exact_slice(f, w):
    """ z -> f(z, w) for an exact w. """
    K = EXACT_SCALAR.domain
    values = []
    for row in f.coeffs:
        acc = K.zero
        for c in reversed(row):
            acc = acc * w + c
        values.append(acc)
    return Poly1.from_coeffs(values)


def _exact_witness_at(f, w):
    """ An exact zero (z, w) with Im z > 0 on the slice through the exact point w, or None. """
    p = _exact_slice(f, w)
    if p.is_zero:
        return Witness(1j, to_complex(w), 0.0)
    if p.degree < 1:
        return None
    for z in numpy.roots(p.to_numpy()[::-1]):
        if z.imag <= 0:
            continue
        exact = _snap(z, params['snap_root_denominator'])
        if exact.y > 0 and not p(exact):
            return Witness(to_complex(exact), to_complex(w), 0.0)
    return None


def _probe(f):
    """ Exact zeros on a few fixed slices, in both orientations. """
    tested = 0
    for swapped, g in ((False, f), (True, f.swap())):
        if g.zdeg < 1:
            continue
        for point in params['probe_points']:
            tested += 1
            witness = _exact_witness_at(g, EXACT_SCALAR.convert(point))
            if witness is not None:
                return (Witness(witness.w, witness.z, 0.0) if swapped else witness), tested
    return None, tested


def _snap_witness(f, witness):
    """ Tries to replace a float witness by a nearby exact one. """
    for den in params['snap_denominators']:
        w = _snap(witness.w, den)
        if w.y <= 0:
            continue
        exact = _exact_witness_at(f, w)
        if exact is not None:
            return exact
    return witness


def _falsify(f, budget=None, seed=0):
    if f.is_zero:
        raise ZeroPolynomial('falsify on the zero polynomial')
    if f.total_degree < 1:
        return falsifier.SearchResult(None, SearchEvidence(1, float(abs(f.to_numpy()).max()), {'kind': 'constant'},
                                                           float('-inf')))
    tested = 0
    if f.scalar.exact:
        witness, tested = _probe(f)
        if witness is not None:
            return falsifier.SearchResult(witness, SearchEvidence(tested, 0.0, {'kind': 'probe'}, witness.z.imag))
    result = falsifier.search(f, budget, seed)
    evidence = result.evidence._replace(samples_tested=result.evidence.samples_tested + tested)
    witness = result.witness
    if witness is not None and f.scalar.exact:
        witness = _snap_witness(f, witness)
    if witness is not None:
        assert witness.z.imag > 0 and witness.w.imag > 0, 'witness %s outside H x H' % (witness,)
    return falsifier.SearchResult(witness, evidence)


def falsify(f, budget=None, seed=0):
    """ A Witness (z, w) in H x H with f(z, w) = 0, or None when the search budget runs out. """
    return _falsify(f, budget, seed).witness


def _residual(f, z, w):
    return abs(to_complex(f.rationalize()(complex(z), complex(w))))


def vanishes(f, z, w):
    scale = float(numpy.abs(f.to_numpy()).max())
    bound = params['vanish_tolerance'] * scale * (1 + abs(z)) ** max(f.zdeg, 0) * (1 + abs(w)) ** max(f.wdeg, 0)
    return _residual(f, z, w) <= bound


def _split_filter(f, budget, seed):
    """
    For f = g + ih with g, h real: both parts must be real stable when f is stable. Returns a
    witness for f when a part's witness lifts to f, and notes on parts that fail without one.
    """
    notes = []
    for name, part in (('real', f.real_part()), ('imaginary', f.imag_part())):
        if part.is_zero or certify(part) is not None:
            continue
        witness = falsify(part, budget, seed)
        if witness is None:
            continue
        if vanishes(f, witness.z, witness.w):
            return Witness(witness.z, witness.w, _residual(f, witness.z, witness.w)), notes
        notes.append('%s part is not real stable (zero at z=%s, w=%s) but f does not vanish there' % (
            name, witness.z, witness.w))
    return None, notes


def decide(f, budget=None, seed=0):
    """ Verdict2 for f: certify, then the split filter for complex f, then falsify. """
    if f.is_zero:
        raise ZeroPolynomial('decide on the zero polynomial')
    cert = certify(f)
    if cert is not None:
        return Verdict2(STABLE, certificate=cert)

    notes = []
    g = f.rationalize()
    if not g.is_real and _split_phase(g) is None:
        lifted, notes = _split_filter(g, budget, seed)
        if lifted is not None:
            return Verdict2(UNSTABLE, witness=lifted, notes=['lifted from a non-stable part'])

    result = _falsify(f, budget, seed)
    if result.witness is not None:
        return Verdict2(UNSTABLE, witness=result.witness, evidence=result.evidence, notes=notes)
    log.debug('no certificate and no witness for %s after %d samples', f, result.evidence.samples_tested)
    return Verdict2(UNKNOWN, evidence=result.evidence, notes=notes)


def decide_on_domain(f, mobius, budget=None, seed=0):
    """
    Stability of f on C x C for the domain C of `mobius`, decided on the pullback to H x H at
    the exact degrees of f. Witnesses are mapped back into C x C.
    """
    if f.is_zero:
        raise ZeroPolynomial('decide on the zero polynomial')
    f, mobius = f.rationalize(), mobius.rationalize()
    degrees = (max(f.zdeg, 0), max(f.wdeg, 0))
    pulled = conjugate_bivar(mobius, f, degrees[0], degrees[1], BOTH, INVERSE)
    verdict = decide(pulled, budget, seed)

    if verdict.stable:
        cert = Certificate(DOMAIN_PULLBACK, {'mobius': mobius, 'degrees': degrees, 'pulled': pulled,
                                              'inner': verdict.certificate})
        return verdict._replace(certificate=cert)
    if verdict.unstable:
        inverse = mobius.inverse()
        z, w = inverse(verdict.witness.z), inverse(verdict.witness.w)
        pulled_note = 'zero of the pullback at z=%s, w=%s' % (verdict.witness.z, verdict.witness.w)
        if z is INFINITY or w is INFINITY:
            evidence = verdict.evidence or SearchEvidence(1, 0.0, {'kind': 'probe'}, 0.0)
            return Verdict2(UNKNOWN, evidence=evidence, notes=verdict.notes + (pulled_note + ' maps to infinity',))
        z, w = to_complex(z), to_complex(w)
        return verdict._replace(witness=Witness(z, w, _residual(f, z, w)), notes=verdict.notes + (pulled_note,))
    return verdict


# generators

def _rational_rows(M):
    return [[sympy.Rational(x) for x in row] for row in numpy.asarray(M).tolist()]


def determinantal(A, B, C, sign=1):
    """ (f, certificate) for f = sign * det(zA + wB + C). """
    A, B, C = (_rational_rows(M) for M in (A, B, C))
    cert = Certificate(DETERMINANTAL, {'A': A, 'B': B, 'C': C, 'sign': sign})
    f = _expand(A, B, C, sign).with_provenance(cert)
    return f, cert


def gen_real_stable(d, seed=0, spread=2):
    """
    A random real stable polynomial of degree d: A = M1 M1', B = M2 M2' with integer M1, M2
    (redrawn until A + B is nonsingular) and a symmetric integer C.
    """
    assert d >= 1, 'matrix size must be positive, got %d' % d
    rng = numpy.random.default_rng(seed)
    while True:
        M1 = rng.integers(-spread, spread + 1, size=(d, d))
        M2 = rng.integers(-spread, spread + 1, size=(d, d))
        A, B = M1 @ M1.T, M2 @ M2.T
        if to_sympy_matrix(A + B).det() != 0:
            break
    S = rng.integers(-spread, spread + 1, size=(d, d))
    return determinantal(A, B, S + S.T)


def mutate_determinantal(certificate, seed=0):
    """
    Flips B along its eigen-direction of smallest eigenvalue: B' = B - 2(lambda + 1) vv'/(v'v)
    with v rounded to rationals, then re-expands. Returns (f, A, B', C) with no certificate.
    """
    assert certificate.kind == DETERMINANTAL, 'not a determinantal certificate: %s' % certificate.kind
    A, B, C, sign = (certificate.data[k] for k in ('A', 'B', 'C', 'sign'))
    values, vectors = numpy.linalg.eigh(numpy.array([[float(x) for x in row] for row in B]))
    ties = numpy.flatnonzero(values <= values[0] + 1e-9)
    k = int(numpy.random.default_rng(seed).choice(ties))

    v = rationalize_vector(vectors[:, k])
    lam = sympy.Rational(int(round(values[k] * 64)), 64)
    norm = sum(x * x for x in v)
    flipped = [[B[i][j] - 2 * (lam + 1) * v[i] * v[j] / norm for j in range(len(B))] for i in range(len(B))]
    return _expand(A, flipped, C, sign), A, flipped, C


# polarization

class Polarization(namedtuple('Polarization', ['rep', 'd', 'scalar'])):
    """ Multi-affine symmetric polynomial in (z, x1..xd). """

    @property
    def variables(self):
        return polarization_variables(self.d)

    def __call__(self, z, xs):
        K = self.scalar
        z = K.convert(z)
        xs = [K.convert(x) for x in xs]
        assert len(xs) == self.d, 'expected %d polarization variables, got %d' % (self.d, len(xs))
        total = K.domain.zero
        for monom, c in self.rep.as_dict(native=True).items():
            term = c
            for _ in range(monom[0]):
                term = term * z
            for x, e in zip(xs, monom[1:]):
                if e:
                    term = term * x
            total = total + term
        return total

    def diag_restrict(self):
        return diag_restrict(self)


def polarize(f, d):
    """ Replaces w^k by e_k(x1..xd) / C(d, k). """
    if f.wdeg > d:
        raise DegreeExceeded(f.wdeg, d)
    K = f.scalar
    terms = {}
    for (i, k), c in f.terms.items():
        weight = c * K.convert(Fraction(1, math.comb(d, k)))
        for subset in combinations(range(d), k):
            terms[(i,) + tuple(int(j in subset) for j in range(d))] = weight
    if not terms:
        terms = {(0,) * (d + 1): K.domain.zero}
    rep = Poly.from_dict(terms, Z, *polarization_variables(d), domain=K.domain)
    return Polarization(rep, d, K)


def diag_restrict(p):
    """ Sets every x_j = w. """
    terms = {}
    for monom, c in p.rep.as_dict(native=True).items():
        key = (monom[0], sum(monom[1:]))
        terms[key] = terms[key] + c if key in terms else c
    return Poly2.from_dict(terms, p.scalar)
