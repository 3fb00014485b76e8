import pytest
import ujson as json

from preserver_lab.algebra.domains import BOUNDARY, CLOSED_COMPLEMENT, OPEN, DISK, EXTERIOR, HALF_PLANE, Mobius
from preserver_lab.analysis.operators import LinearOperator, MultiplierSeq
from preserver_lab.errors import ParseError, ValidationError
from preserver_lab.inputs import (
    parse_spec, build_operator, multiplier_sequence, operator_to_json, shorthand_domain)

DISK_SPEC = {
    'schema_version': '1',
    'degree_bound': 3,
    'representation': {'matrix': [[3], [1, 2], [0, 2, 1], [0, 0, 3]]},
    'domain': {'kind': 'unit_disk'},
}


def _operator(doc):
    return build_operator(parse_spec(doc).operator)


def test_multiplier_representation():
    spec = parse_spec({'degree_bound': 3, 'representation': {'multiplier': [0, 1, 2, 3]}})
    assert build_operator(spec.operator) == MultiplierSeq(range(4)).operator(3)
    assert multiplier_sequence(spec.operator).lambdas == MultiplierSeq(range(4)).lambdas
    assert spec.domain is None
    assert spec.options == {}


def test_differential_representation():
    doc = {'degree_bound': 3, 'representation': {'differential': [[0], [1]]}}
    assert _operator(doc) == LinearOperator.derivative(3)
    assert multiplier_sequence(parse_spec(doc).operator) is None


def test_matrix_representation(disk_operator):
    spec = parse_spec(DISK_SPEC)
    assert build_operator(spec.operator) == disk_operator(3)
    assert spec.domain.shorthand == 'unit_disk'
    assert spec.domain.view == CLOSED_COMPLEMENT


def test_scalar_encodings():
    doc = {'degree_bound': 1, 'representation': {'matrix': [['1/2'], [0.25, [0, -1]]]}}
    assert _operator(doc) == LinearOperator.from_columns([['1/2'], ['1/4', (0, -1)]])


def test_mobius_domain(disk_map):
    doc = {'mobius': {'a': [0, 0.5], 'b': -0.5, 'c': 1, 'd': [0, -1]}}
    domain = parse_spec(doc).domain
    assert domain.mobius == disk_map
    assert domain.view == CLOSED_COMPLEMENT
    assert domain.shorthand is None


def test_real_mobius_is_normalized():
    domain = parse_spec({'domain': {'mobius': {'a': 1, 'b': 0, 'c': 1, 'd': 1}}}).domain
    assert domain.mobius.kind == HALF_PLANE
    assert domain.mobius == Mobius.half_plane(1, 0)


def test_view_override():
    domain = parse_spec({'domain': {'kind': 'unit_disk', 'view': OPEN}}).domain
    assert domain.view == OPEN
    with pytest.raises(ValidationError) as e:
        parse_spec({'domain': {'kind': 'unit_disk', 'view': 'inside'}})
    assert e.value.pointer == '/domain/view'


@pytest.mark.parametrize('name,kind,view', [
    ('lower_half_plane', HALF_PLANE, CLOSED_COMPLEMENT),
    ('upper_half_plane', HALF_PLANE, CLOSED_COMPLEMENT),
    ('real_line', HALF_PLANE, BOUNDARY),
    ('unit_disk', EXTERIOR, CLOSED_COMPLEMENT),
    ('unit_circle', EXTERIOR, BOUNDARY),
    ('unit_disk_exterior', DISK, CLOSED_COMPLEMENT),
])
def test_shorthands(name, kind, view):
    domain = shorthand_domain(name)
    assert (domain.mobius.kind, domain.view, domain.shorthand) == (kind, view, name)


def test_unknown_shorthand():
    with pytest.raises(ValidationError) as e:
        shorthand_domain('annulus')
    assert e.value.pointer == '/domain/kind'


def test_degenerate_mobius():
    with pytest.raises(ValidationError) as e:
        parse_spec({'domain': {'mobius': {'a': 1, 'b': 1, 'c': 1, 'd': 1}}})
    assert e.value.pointer == '/domain/mobius'


def test_missing_mobius_coefficient():
    with pytest.raises(ValidationError) as e:
        parse_spec({'domain': {'mobius': {'a': 1, 'b': 0, 'c': 0}}})
    assert e.value.pointer == '/domain/mobius/d'


def test_matrix_needs_one_image_per_degree():
    doc = dict(DISK_SPEC, representation={'matrix': [[3], [1, 2], [0, 2, 1]]})
    with pytest.raises(ValidationError) as e:
        parse_spec(doc)
    assert e.value.pointer == '/representation/matrix'


def test_bad_scalar_pointer():
    with pytest.raises(ParseError) as e:
        parse_spec({'degree_bound': 2, 'representation': {'multiplier': [0, 'x', 2]}})
    assert e.value.pointer == '/representation/multiplier/1'
    with pytest.raises(ParseError) as e:
        parse_spec({'degree_bound': 1, 'representation': {'matrix': [[1], [0, [1, 2, 3]]]}})
    assert e.value.pointer == '/representation/matrix/1/1'


def test_representation_must_be_unique():
    with pytest.raises(ValidationError) as e:
        parse_spec({'degree_bound': 1, 'representation': {'multiplier': [1, 1], 'differential': [[1]]}})
    assert e.value.pointer == '/representation'


def test_complex_multiplier_rejected():
    with pytest.raises(ValidationError):
        parse_spec({'degree_bound': 1, 'representation': {'multiplier': [1, [0, 1]]}})


@pytest.mark.parametrize('bound', [-1, 1.5, True, None, '3'])
def test_degree_bound_must_be_a_natural_number(bound):
    with pytest.raises(ValidationError) as e:
        parse_spec({'degree_bound': bound, 'representation': {'multiplier': [1]}})
    assert e.value.pointer == '/degree_bound'


def test_schema_version():
    with pytest.raises(ValidationError) as e:
        parse_spec(dict(DISK_SPEC, schema_version='2'))
    assert e.value.pointer == '/schema_version'


def test_backend_choice():
    spec = parse_spec(dict(DISK_SPEC, backend='float'))
    assert not spec.operator.scalar.exact
    assert build_operator(spec.operator).n == 3
    assert parse_spec(DISK_SPEC, backend='float', tolerance=1e-6).operator.scalar.tolerance == 1e-6
    with pytest.raises(ValidationError):
        parse_spec(dict(DISK_SPEC, backend='interval'))


def test_operator_to_json_reads_back():
    for doc in (DISK_SPEC, {'degree_bound': 2, 'representation': {'multiplier': ['1/3', -2, 0.5]}}):
        spec = parse_spec(doc)
        encoded = json.loads(json.dumps(operator_to_json(spec.operator)))
        assert build_operator(parse_spec(encoded).operator) == build_operator(spec.operator)


def test_spec_files(tmp_path):
    path = tmp_path / 'spec.json'
    path.write_text(json.dumps(DISK_SPEC))
    assert parse_spec(str(path)).operator.degree_bound == 3

    path.write_text('{"degree_bound": 3,')
    with pytest.raises(ParseError):
        parse_spec(str(path))
    path.write_text('[1, 2]')
    with pytest.raises(ParseError):
        parse_spec(str(path))
