# degree of the zero polynomial
NEG_INF = float('-inf')

EXACT = 'exact'
FLOAT = 'float'

DEFAULT_TOLERANCE = 1e-9

PLUS = 'plus'
MINUS = 'minus'

UPPER = 'upper'
LOWER = 'lower'

SEED_ENV = 'PRESERVER_LAB_SEED'
SCHEMA_VERSION = '1'
