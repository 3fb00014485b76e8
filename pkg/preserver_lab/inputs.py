"""
Operator and domain specs as JSON documents. Scalars are "p/q" strings, integers or decimals,
complex scalars [re, im] pairs. Errors carry a JSON pointer to the offending value.
"""
import logging
import sys
from collections import namedtuple
from fractions import Fraction

import ujson as json

from preserver_lab.algebra.components import EXACT, FLOAT, SCHEMA_VERSION
from preserver_lab.algebra.components.scalar import EXACT_SCALAR, Scalar, format_scalar
from preserver_lab.algebra.domains import BOUNDARY, CLOSED_COMPLEMENT, VIEWS, Mobius
from preserver_lab.algebra.poly import Poly1
from preserver_lab.analysis.operators import MultiplierSeq, DiffOpForm, construct
from preserver_lab.errors import ParseError, ValidationError, DegenerateMap, DimensionMismatch

log = logging.getLogger(__name__)

MATRIX = 'matrix'
MULTIPLIER = 'multiplier'
DIFFERENTIAL = 'differential'
REPRESENTATIONS = (MATRIX, MULTIPLIER, DIFFERENTIAL)

_I = (0, 1)
_HALF_I = (0, Fraction(1, 2))

# each shorthand names the point set holding the roots of the polynomial class
SHORTHANDS = {
    'lower_half_plane': ((1, 0, 0, 1), CLOSED_COMPLEMENT),
    'upper_half_plane': ((-1, 0, 0, 1), CLOSED_COMPLEMENT),
    'real_line': ((1, 0, 0, 1), BOUNDARY),
    'unit_disk': ((_HALF_I, Fraction(-1, 2), 1, (0, -1)), CLOSED_COMPLEMENT),
    'unit_circle': ((_HALF_I, Fraction(-1, 2), 1, (0, -1)), BOUNDARY),
    'unit_disk_exterior': (((0, Fraction(-1, 2)), Fraction(1, 2), 1, (0, -1)), CLOSED_COMPLEMENT),
}

OperatorSpec = namedtuple('OperatorSpec', ['degree_bound', 'kind', 'data', 'scalar'])
DomainSpec = namedtuple('DomainSpec', ['mobius', 'view', 'shorthand'])
ParsedSpec = namedtuple('ParsedSpec', ['operator', 'domain', 'options'])


def _scalar(value, scalar, pointer):
    if isinstance(value, list) and len(value) != 2:
        raise ParseError('complex scalars are [re, im] pairs', pointer)
    try:
        return scalar.convert(value)
    except (TypeError, ValueError, ZeroDivisionError, AssertionError) as e:
        raise ParseError('not a scalar: %r (%s)' % (value, e), pointer)


def _scalar_list(values, scalar, pointer):
    if not isinstance(values, list):
        raise ParseError('expected a list of scalars', pointer)
    return [_scalar(v, scalar, '%s/%d' % (pointer, k)) for k, v in enumerate(values)]


def _integer(value, pointer, minimum=0):
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ValidationError('expected an integer >= %d, got %r' % (minimum, value), pointer)
    return value


def parse_operator(doc, scalar=EXACT_SCALAR, pointer=''):
    n = _integer(doc.get('degree_bound'), pointer + '/degree_bound')
    representation = doc.get('representation')
    if not isinstance(representation, dict) or len(representation) != 1:
        raise ValidationError('representation must hold exactly one of %s' % ', '.join(REPRESENTATIONS),
                              pointer + '/representation')
    (kind, values), = representation.items()
    where = '%s/representation/%s' % (pointer, kind)
    if kind not in REPRESENTATIONS:
        raise ValidationError('unknown representation %r' % kind, where)

    if kind == MULTIPLIER:
        data = _scalar_list(values, scalar, where)
        if not all(scalar.is_real(x) for x in data):
            raise ValidationError('multiplier sequences are real', where)
        return OperatorSpec(n, kind, data, scalar)
    if not isinstance(values, list):
        raise ParseError('expected a list of coefficient lists', where)
    data = [_scalar_list(v, scalar, '%s/%d' % (where, k)) for k, v in enumerate(values)]
    if kind == MATRIX and len(data) != n + 1:
        raise ValidationError('%d images given for degree bound %d; the matrix must list T(z^k) for k = 0..%d'
                              % (len(data), n, n), where)
    return OperatorSpec(n, kind, data, scalar)


def build_operator(spec):
    """ The LinearOperator of a spec on degree <= its bound. """
    K = spec.scalar
    if spec.kind == MULTIPLIER:
        source = MultiplierSeq(spec.data, K)
    elif spec.kind == DIFFERENTIAL:
        source = DiffOpForm([Poly1.from_coeffs(q, K) for q in spec.data])
    else:
        source = spec.data
    try:
        return construct(source, spec.degree_bound, K)
    except DimensionMismatch as e:
        raise ValidationError(str(e), '/representation')


def multiplier_sequence(spec):
    if spec.kind != MULTIPLIER:
        return None
    return MultiplierSeq(spec.data, spec.scalar)


def operator_to_json(spec):
    data = spec.data
    if spec.kind == MULTIPLIER:
        encoded = [format_scalar(x) for x in data]
    else:
        encoded = [[format_scalar(x) for x in row] for row in data]
    return {'schema_version': SCHEMA_VERSION, 'degree_bound': spec.degree_bound,
            'representation': {spec.kind: encoded}}


def shorthand_domain(name):
    if name not in SHORTHANDS:
        raise ValidationError('unknown domain %r; expected one of %s' % (name, ', '.join(sorted(SHORTHANDS))),
                              '/domain/kind')
    coefficients, view = SHORTHANDS[name]
    return DomainSpec(Mobius(*coefficients), view, name)


def parse_domain(doc, scalar=EXACT_SCALAR, pointer='/domain'):
    if not isinstance(doc, dict):
        raise ParseError('a domain is an object with "mobius" or "kind"', pointer)
    view = doc.get('view')
    if view is not None and view not in VIEWS:
        raise ValidationError('unknown view %r' % view, pointer + '/view')
    if 'kind' in doc:
        domain = shorthand_domain(doc['kind'])
        return domain._replace(view=view or domain.view)

    mobius = doc.get('mobius')
    if not isinstance(mobius, dict):
        raise ParseError('missing "mobius" or "kind"', pointer)
    coefficients = []
    for name in 'abcd':
        if name not in mobius:
            raise ValidationError('missing coefficient %s' % name, '%s/mobius/%s' % (pointer, name))
        coefficients.append(_scalar(mobius[name], scalar, '%s/mobius/%s' % (pointer, name)))
    try:
        m = Mobius.normalize(*coefficients, scalar=scalar)
    except DegenerateMap as e:
        raise ValidationError(str(e), pointer + '/mobius')
    return DomainSpec(m, view or CLOSED_COMPLEMENT, None)


def _load(source):
    if isinstance(source, dict):
        return source
    try:
        if source in (None, '-'):
            return json.loads(sys.stdin.read())
        with open(source, 'r') as f:
            return json.loads(f.read())
    except ValueError as e:
        raise ParseError('malformed JSON: %s' % e)


def parse_spec(source, backend=None, tolerance=None):
    """
    (OperatorSpec, DomainSpec or None, options) from a path, '-' for stdin, or a loaded document.
    `backend` and `tolerance` override the document's own choice.
    """
    doc = _load(source)
    if not isinstance(doc, dict):
        raise ParseError('a spec is a JSON object')
    version = doc.get('schema_version', SCHEMA_VERSION)
    if str(version) != SCHEMA_VERSION:
        raise ValidationError('unsupported schema version %r' % version, '/schema_version')

    backend = backend or doc.get('backend', EXACT)
    if backend not in (EXACT, FLOAT):
        raise ValidationError('unknown backend %r' % backend, '/backend')
    scalar = Scalar(backend, tolerance if backend == FLOAT else None)

    operator = parse_operator(doc, scalar) if 'representation' in doc else None
    domain = None
    if 'domain' in doc:
        domain = parse_domain(doc['domain'], scalar)
    elif 'mobius' in doc or 'kind' in doc:
        domain = parse_domain(doc, scalar, '')
    options = doc.get('options', {})
    if not isinstance(options, dict):
        raise ParseError('options must be an object', '/options')
    log.debug('parsed spec: operator %s, domain %s', operator and operator.kind, domain and domain.shorthand)
    return ParsedSpec(operator, domain, options)
