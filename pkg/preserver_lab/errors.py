class PreserverLabError(Exception):
    exit_code = 4


class ZeroPolynomial(PreserverLabError):
    pass


class ConstantPolynomial(PreserverLabError):
    pass


class NoConvergence(PreserverLabError):
    pass


class NotHyperbolic(PreserverLabError):
    pass


class NotStable(PreserverLabError):
    pass


class DegenerateMap(PreserverLabError):
    pass


class DegreeExceeded(PreserverLabError):
    def __init__(self, degree, bound):
        super().__init__('degree %s exceeds bound %s' % (degree, bound))
        self.degree = degree
        self.bound = bound


class DimensionMismatch(PreserverLabError):
    pass


class NotRealOperator(PreserverLabError):
    pass


class UnboundedDomainRequired(PreserverLabError):
    pass


class BudgetExhausted(PreserverLabError):
    pass


class InputError(PreserverLabError):
    """ Raised on malformed operator or domain specs; `pointer` is a JSON pointer into the document. """
    exit_code = 3

    def __init__(self, message, pointer=''):
        super().__init__('%s (at %s)' % (message, pointer or '/'))
        self.pointer = pointer


class ParseError(InputError):
    pass


class ValidationError(InputError):
    pass


class WitnessRejected(PreserverLabError):
    """ A witness failed its re-check before being written out. """
    exit_code = 5
