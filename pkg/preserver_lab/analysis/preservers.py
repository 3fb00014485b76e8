"""
Classifiers for linear operators on polynomials of bounded degree. Each one reports whether T
maps a class of polynomials (real-rooted, stable, rooted in the complement of a circular domain,
or rooted on its boundary) back into the class, with the clause that settled it.

A report says preserver only on exact degenerate checks or stable symbol verdicts, and
non_preserver only with a concrete witness: a zero of a symbol, or an input f in the class whose
image leaves it.
"""
import logging
import math
from collections import namedtuple
from fractions import Fraction

import numpy
from tqdm import tqdm

from preserver_lab.algebra.classify import (
    is_hyperbolic, is_stable1, is_domain_stable1, pencil_relation, szasz_bound)
from preserver_lab.algebra.components import PLUS, MINUS
from preserver_lab.algebra.components.scalar import EXACT_SCALAR, to_complex
from preserver_lab.algebra.domains import (
    BOTH, INVERSE, INFINITY, OPEN, REVERSED, BOUNDARY, CLOSED_COMPLEMENT, HALF_PLANE, EXTERIOR,
    Mobius, CircularDomain, conjugate_bivar)
from preserver_lab.algebra.poly import Poly1, real_root_count
from preserver_lab.analysis.operators import (
    CIRC, symbol, range_analysis, conjugate_operator, compose, reflect, gt_series)
from preserver_lab.analysis.stab2 import decide, decide_on_domain, jsonable
from preserver_lab.errors import (
    DegreeExceeded, NotHyperbolic, NotRealOperator, NotStable, UnboundedDomainRequired)

log = logging.getLogger(__name__)

PRESERVER = 'preserver'
NON_PRESERVER = 'non_preserver'
UNKNOWN = 'unknown'

HYP = 'hyp'
HYPC = 'hypC'
STAB = 'stab'
CIRCULAR = 'circular'
BOUNDARY_PROBLEM = 'boundary'
SWEEP = 'sweep'
TRANSCENDENTAL = 'transcendental'
MULTIPLIER = 'multiplier'
TRICHOTOMY = 'trichotomy'
PROBLEMS = (HYP, HYPC, STAB, CIRCULAR, BOUNDARY_PROBLEM, SWEEP, TRANSCENDENTAL, MULTIPLIER, TRICHOTOMY)

# inputs of degree exactly n, or of degree at most n
PB3 = 'pb3'
PB2 = 'pb2'

STABILITY_PRESERVING = 'stability_preserving'
STABILITY_REVERSING = 'stability_reversing'
DEGENERATE = 'degenerate'

params = {
    'counterexample_budget': 500,
    'attach_budget': 64,
    'same_degree_samples': 24,
    'szasz_radius': 1.0,
    'szasz_circle_points': 64,
    'szasz_slice_tangents': (0, '1/4', '1/2', 1, 2, 4),
}

_CANONICAL_ROOTS = (0, -1, 1, (0, -1), (0, 1), 2, -2)


class SymbolCheck(namedtuple('SymbolCheck', ['poly', 'verdict', 'mobius'])):
    """ A stability verdict on `poly`, over H x H or over C x C for the domain of `mobius`. """

    def __new__(cls, poly, verdict, mobius=None):
        return super().__new__(cls, poly, verdict, mobius)

    def to_json(self):
        return {
            'poly': self.poly.to_json(),
            'verdict': self.verdict.to_json(),
            'domain': None if self.mobius is None else self.mobius.to_json(),
        }


class InputWitness(namedtuple('InputWitness', ['f', 'image', 'root'])):
    """ f lies in the input class; `root` is a root of image = T(f) outside the target class. """

    def to_json(self):
        return {
            'f': self.f.to_json(),
            'image': self.image.to_json(),
            'root': None if self.root is None else [self.root.real, self.root.imag],
        }


class PreserverReport(namedtuple('PreserverReport', ['problem', 'verdict', 'clause', 'artifacts'])):

    def __new__(cls, problem, verdict, clause=None, artifacts=None):
        artifacts = dict(artifacts or {})
        assert verdict in (PRESERVER, NON_PRESERVER, UNKNOWN), 'unknown verdict: %s' % verdict
        assert verdict != NON_PRESERVER or _witnessed(artifacts), 'non_preserver report without a witness'
        assert verdict != PRESERVER or clause is not None, 'preserver report without a clause'
        return super().__new__(cls, problem, verdict, clause, artifacts)

    @property
    def symbol_witnesses(self):
        return [(name, check) for name, check in self.artifacts.get('symbols', {}).items()
                if check.verdict.unstable]

    @property
    def input_witness(self):
        return self.artifacts.get('input_witness')

    def to_json(self):
        return {
            'problem': self.problem,
            'verdict': self.verdict,
            'clause': self.clause,
            'artifacts': jsonable(self.artifacts),
        }


def _witnessed(artifacts):
    if artifacts.get('input_witness') is not None or artifacts.get('failure') is not None:
        return True
    return any(check.verdict.unstable for check in artifacts.get('symbols', {}).values())


# input classes

class Region(namedtuple('Region', ['mobius', 'boundary'])):
    """
    Where the roots of an input class live: on the boundary of C = Phi^-1(H) (the real line for
    the identity map), or in the closed complement C'. Targets are the same point set.
    """

    @property
    def view(self):
        return BOUNDARY if self.boundary else CLOSED_COMPLEMENT

    @property
    def bounded(self):
        if self.boundary:
            return self.mobius.kind != HALF_PLANE
        return self.mobius.kind == EXTERIOR

    def contains(self, point):
        return CircularDomain(self.mobius, self.view).contains(point)

    def canonical_roots(self):
        candidates = [EXACT_SCALAR.convert(p) for p in _CANONICAL_ROOTS]
        if self.mobius.shape.center is not None:
            candidates.insert(0, self.mobius.shape.center)
        roots = []
        for r in candidates:
            if r not in roots and self.contains(r):
                roots.append(r)
        return roots

    def sample_root(self, rng):
        """ Phi^-1 of a point of the quarter lattice on the real axis or below it. """
        inverse = self.mobius.inverse()
        while True:
            re = Fraction(int(rng.integers(-8, 9)), 4)
            im = Fraction(0) if self.boundary else -Fraction(int(rng.integers(0, 9)), 4)
            point = inverse(EXACT_SCALAR.convert((re, im)))
            if point is not INFINITY:
                return point

    def member(self, degree, rng):
        roots = [self.sample_root(rng) for _ in range(degree)]
        return from_roots(roots)

    def offending_root(self, p):
        """ A root of p outside the region, or None when p is zero or rooted in the region. """
        p = p.rationalize()
        if p.is_zero or p.degree < 1:
            return None
        views = (OPEN, REVERSED) if self.boundary else (OPEN,)
        for view in views:
            verdict = is_domain_stable1(p, CircularDomain(self.mobius, view))
            if not verdict.answer:
                return verdict.witness
        return None


def from_roots(roots):
    f = Poly1.from_coeffs([1])
    for r in roots:
        f = f * Poly1.from_coeffs([-r, 1])
    return f


def region_for(problem, mobius=None):
    if problem in (HYP, HYPC, TRICHOTOMY):
        return Region(Mobius.identity(), True)
    if problem == STAB:
        return Region(Mobius.identity(), False)
    assert mobius is not None, '%s problems need a Mobius map' % problem
    return Region(mobius.rationalize(), problem == BOUNDARY_PROBLEM)


def sample_class_member(problem, degree, seed=0, mobius=None):
    """ A random polynomial of the given degree with every root in the problem's root region. """
    return region_for(problem, mobius).member(degree, numpy.random.default_rng(seed))


def _on_backend(f, scalar):
    return f if scalar.exact else Poly1.from_coeffs(f.coeffs, scalar)


def _candidates(region, degrees, budget, rng):
    count = 0
    for degree in degrees:
        for r in region.canonical_roots():
            if count >= budget:
                return
            count += 1
            yield from_roots([r] * degree)
    quiet = not log.isEnabledFor(logging.INFO)
    for i in tqdm(range(count, budget), mininterval=2, desc='  - (Counterexamples) ', leave=False, disable=quiet):
        yield region.member(degrees[i % len(degrees)], rng)


def counterexample_search(T, n, problem, mobius=None, semantics=PB3, budget=None, seed=0):
    """
    Products of linear factors rooted in the input region, powers of a few fixed roots first, are
    pushed through T until an image leaves the target class. Returns an InputWitness or None.
    """
    if n > T.n:
        raise DegreeExceeded(n, T.n)
    region = region_for(problem, mobius)
    degrees = [n] if semantics == PB3 else list(range(n, -1, -1))
    budget = params['counterexample_budget'] if budget is None else budget
    rng = numpy.random.default_rng(seed)
    for f in _candidates(region, degrees, budget, rng):
        image = T(_on_backend(f, T.scalar))
        root = region.offending_root(image)
        if root is not None:
            log.debug('counterexample for %s: %s -> %s', problem, f, image)
            return InputWitness(f, image, root)
    log.info('no counterexample among %d inputs of degree %s', budget, degrees)
    return None


# shared clause logic

def _restricted(T, n):
    if n > T.n:
        raise DegreeExceeded(n, T.n)
    return T.restrict(n)


def _trivial(problem, artifacts=None):
    return PreserverReport(problem, PRESERVER, 'zero', dict(artifacts or {}, trivial=True))


def _range_artifact(ra):
    return {'rank': ra.rank, 'basis': ra.basis, 'phase': ra.phase, 'real_basis': ra.real_basis}


def _interlacing(p, q):
    try:
        return pencil_relation(p, q).interlacing
    except NotHyperbolic:
        return False


def _real_degenerate(ra):
    """ Range spanned by one hyperbolic polynomial or by two real ones in proper position. """
    if ra.rank == 1:
        return is_hyperbolic(ra.basis[0]).answer
    if ra.rank == 2:
        return _interlacing(*ra.basis)
    return False


def _symbol_check(G, budget, seed, mobius=None):
    if mobius is None:
        return SymbolCheck(G, decide(G, budget, seed))
    return SymbolCheck(G, decide_on_domain(G, mobius, budget, seed), mobius)


def _failed(checks):
    return checks is None or any(c.verdict.unstable for c in checks)


def _conclude(problem, artifacts, clauses, search):
    """
    Report for an operator none of whose clauses held. `clauses` lists the symbol checks of each
    clause, None for a clause that fails structurally; `search(budget)` looks for an input witness.
    """
    settled = all(_failed(checks) for checks in clauses)
    witnessed = any(c.verdict.unstable for checks in clauses if checks for c in checks)
    decisive = settled and witnessed
    witness = search(params['attach_budget'] if decisive else params['counterexample_budget'])
    if witness is not None:
        artifacts['input_witness'] = witness
        return PreserverReport(problem, NON_PRESERVER, None, artifacts)
    if decisive:
        return PreserverReport(problem, NON_PRESERVER, None, artifacts)
    return PreserverReport(problem, UNKNOWN, None, artifacts)


def _searcher(T, n, problem, mobius=None, semantics=PB3, seed=0):
    return lambda budget: counterexample_search(T, n, problem, mobius, semantics, budget, seed)


def _rotate_real(G):
    """ (eta G as a real polynomial, eta) for the unit eta fixed by the largest coefficient. """
    K = G.scalar
    pivot = max(G.terms.values(), key=lambda c: abs(to_complex(c)))
    value = to_complex(pivot)
    eta = value.conjugate() / abs(value)
    rotated = G * (K.domain.one / pivot)
    if not rotated.is_real:
        return None, eta
    return rotated.real_part(), eta


# finite-degree classifiers

def finitehyp_classify(T, n, budget=None, seed=0):
    """
    Real T preserves real-rootedness on degree <= n iff its range is spanned by one hyperbolic
    polynomial or two in proper position (a), or T[(z+w)^n] (b) or T[(z-w)^n] (c) is real stable.
    """
    T = _restricted(T, n)
    if not T.is_real:
        raise NotRealOperator('hyperbolicity classification needs a real operator')
    if T.is_zero:
        return _trivial(HYP)
    ra = range_analysis(T)
    artifacts = {'range': _range_artifact(ra)}
    if _real_degenerate(ra):
        return PreserverReport(HYP, PRESERVER, 'a', dict(artifacts, mode=DEGENERATE))

    symbols = artifacts['symbols'] = {}
    for clause, kind, mode in (('b', PLUS, STABILITY_PRESERVING), ('c', MINUS, STABILITY_REVERSING)):
        check = symbols[kind] = _symbol_check(symbol(T, n, kind), budget, seed)
        if check.verdict.stable:
            return PreserverReport(HYP, PRESERVER, clause, dict(artifacts, mode=mode))
    return _conclude(HYP, artifacts, [[c] for c in symbols.values()], _searcher(T, n, HYP, seed=seed))


def finitehypC_classify(T, n, budget=None, seed=0):
    """ Complex T on degree <= n taking real-rooted polynomials to real-rooted ones (up to phase). """
    T = _restricted(T, n)
    if T.is_zero:
        return _trivial(HYPC)
    ra = range_analysis(T)
    artifacts = {'range': _range_artifact(ra)}
    if ra.rank == 1 and is_hyperbolic(ra.basis[0]).answer:
        return PreserverReport(HYPC, PRESERVER, 'a', artifacts)
    if ra.rank == 2 and ra.phase is not None and _interlacing(*ra.real_basis):
        return PreserverReport(HYPC, PRESERVER, 'b', dict(artifacts, phase=ra.phase))

    symbols = artifacts['symbols'] = {}
    clauses = []
    for clause, kind in (('c', PLUS), ('d', MINUS)):
        rotated, eta = _rotate_real(symbol(T, n, kind))
        if rotated is None:
            artifacts.setdefault('not_real', []).append(kind)
            clauses.append(None)
            continue
        check = symbols[kind] = _symbol_check(rotated, budget, seed)
        if check.verdict.stable:
            return PreserverReport(HYPC, PRESERVER, clause, dict(artifacts, phase=eta))
        clauses.append([check])
    return _conclude(HYPC, artifacts, clauses, _searcher(T, n, HYPC, seed=seed))


def finitestab_classify(T, n, budget=None, seed=0):
    """ T on degree <= n preserves stability iff rank T <= 1 with a stable image, or T[(z+w)^n] is stable. """
    T = _restricted(T, n)
    if T.is_zero:
        return _trivial(STAB)
    ra = range_analysis(T)
    artifacts = {'range': _range_artifact(ra)}
    if ra.rank == 1 and is_stable1(ra.basis[0]).answer:
        return PreserverReport(STAB, PRESERVER, 'a', artifacts)

    check = _symbol_check(symbol(T, n, PLUS), budget, seed)
    artifacts['symbols'] = {PLUS: check}
    if check.verdict.stable:
        return PreserverReport(STAB, PRESERVER, 'b', artifacts)
    return _conclude(STAB, artifacts, [[check]], _searcher(T, n, STAB, seed=seed))


def same_degree(T, n, region, samples, seed=0):
    """ Whether the nonzero images of sampled degree-n class members all have one degree. """
    rng = numpy.random.default_rng(seed)
    degrees = set()
    for _ in range(samples):
        image = T(_on_backend(region.member(n, rng), T.scalar))
        if not image.is_zero:
            degrees.add(image.degree)
    return len(degrees) <= 1


def _exterior_degree_conditions(G, T, n):
    """
    Whether the circular symbol reaches degree m = deg T in z and n in w. The pullback in
    decide_on_domain always uses the degrees G actually has, so a shortfall is logged, not fatal.
    """
    conditions = {'z': G.zdeg == T.m, 'w': G.wdeg == n}
    if not all(conditions.values()):
        log.info('circular symbol has degrees (%d, %d) short of (%d, %d); pulling back at its own degrees',
                 G.zdeg, G.wdeg, T.m, n)
    return conditions


def _circular_exact_degree(T, n, mobius, budget, seed):
    T = _restricted(T, n)
    region = region_for(CIRCULAR, mobius)
    if T.is_zero:
        return _trivial(CIRCULAR, {'semantics': PB3})
    ra = range_analysis(T)
    artifacts = {'range': _range_artifact(ra), 'semantics': PB3}
    if ra.rank == 1 and region.offending_root(ra.basis[0]) is None:
        return PreserverReport(CIRCULAR, PRESERVER, 'a', artifacts)

    search = _searcher(T, n, CIRCULAR, region.mobius, PB3, seed)
    if region.bounded:
        artifacts['same_degree'] = same_degree(T, n, region, params['same_degree_samples'], seed)
        if not artifacts['same_degree']:
            witness = search(params['counterexample_budget'])
            if witness is not None:
                artifacts['input_witness'] = witness
                return PreserverReport(CIRCULAR, NON_PRESERVER, None, artifacts)

    G = symbol(T.rationalize(), n, CIRC, region.mobius, PLUS)
    if G.is_zero:
        artifacts['notes'] = ['the circular symbol vanishes identically']
        return _conclude(CIRCULAR, artifacts, [[]], search)
    if region.mobius.kind == EXTERIOR:
        artifacts['degree_conditions'] = _exterior_degree_conditions(G, T, n)
    check = _symbol_check(G, budget, seed, region.mobius)
    artifacts['symbols'] = {CIRC: check}
    if check.verdict.stable:
        return PreserverReport(CIRCULAR, PRESERVER, 'b', artifacts)
    return _conclude(CIRCULAR, artifacts, [[check]], search)


def circular_classify(T, n, mobius, semantics=PB3, budget=None, seed=0):
    """
    Whether T maps polynomials with every root in C' = complement of Phi^-1(H) back into that
    class (or to zero). Under pb3 inputs have degree exactly n; under pb2 every degree up to n is
    checked, from n down to the constants.
    """
    if semantics == PB3:
        return _circular_exact_degree(T, n, mobius, budget, seed)
    assert semantics == PB2, 'unknown semantics: %s' % semantics

    T = _restricted(T, n)
    per_degree = {}
    for k in range(n, 0, -1):
        report = _circular_exact_degree(T, k, mobius, budget, seed)
        per_degree[k] = report.verdict
        if report.verdict == NON_PRESERVER:
            artifacts = dict(report.artifacts, semantics=PB2, failed_degree=k, per_degree=per_degree)
            return PreserverReport(CIRCULAR, NON_PRESERVER, None, artifacts)

    region = region_for(CIRCULAR, mobius)
    constant = T.columns[0]
    root = region.offending_root(constant)
    if root is not None:
        witness = InputWitness(Poly1.from_coeffs([1]), constant, root)
        return PreserverReport(CIRCULAR, NON_PRESERVER, None,
                               {'semantics': PB2, 'failed_degree': 0, 'input_witness': witness})
    per_degree[0] = PRESERVER
    artifacts = {'semantics': PB2, 'per_degree': per_degree}
    if any(v == UNKNOWN for v in per_degree.values()):
        return PreserverReport(CIRCULAR, UNKNOWN, None, artifacts)
    return PreserverReport(CIRCULAR, PRESERVER, 'pb2', artifacts)


def boundary_classify(T, n, mobius, semantics=PB3, budget=None, seed=0):
    """
    Whether T maps polynomials rooted on the boundary of an unbounded circular domain C back into
    that class. Clause (b) conjugates T to the real line; clauses (c) and (d) need the plus or
    minus circular symbol to be both C-stable and stable on the interior of the complement.
    """
    region = region_for(BOUNDARY_PROBLEM, mobius)
    m = region.mobius
    if m.kind not in (HALF_PLANE, EXTERIOR):
        raise UnboundedDomainRequired('boundary classification needs a half-plane or a disk exterior, got a %s'
                                      % m.kind)
    T = _restricted(T, n)
    if T.is_zero:
        return _trivial(BOUNDARY_PROBLEM)
    ra = range_analysis(T)
    artifacts = {'range': _range_artifact(ra)}
    if ra.rank == 1 and region.offending_root(ra.basis[0]) is None:
        return PreserverReport(BOUNDARY_PROBLEM, PRESERVER, 'a', artifacts)
    if ra.rank == 2:
        conjugated = range_analysis(conjugate_operator(T.rationalize(), m))
        artifacts['conjugated_range'] = _range_artifact(conjugated)
        if conjugated.rank == 2 and conjugated.phase is not None and _interlacing(*conjugated.real_basis):
            return PreserverReport(BOUNDARY_PROBLEM, PRESERVER, 'b', dict(artifacts, phase=conjugated.phase))

    symbols = artifacts['symbols'] = {}
    clauses = []
    for clause, sign in (('c', PLUS), ('d', MINUS)):
        G = symbol(T.rationalize(), n, CIRC, m, sign)
        if G.is_zero:
            clauses.append([])
            continue
        pulled = conjugate_bivar(m, G, G.zdeg, G.wdeg, BOTH, INVERSE)
        checks = [_symbol_check(pulled, budget, seed), _symbol_check(pulled.reflect(z=True, w=True), budget, seed)]
        symbols[sign] = checks[0]
        symbols[sign + '_reversed'] = checks[1]
        if all(c.verdict.stable for c in checks):
            return PreserverReport(BOUNDARY_PROBLEM, PRESERVER, clause, artifacts)
        clauses.append(checks)
    return _conclude(BOUNDARY_PROBLEM, artifacts, clauses, _searcher(T, n, BOUNDARY_PROBLEM, m, semantics, seed))


def trichotomy_classify(T, n, budget=None, seed=0):
    """
    Labels a real operator as degenerate, stability preserving (T[(z+w)^n] stable) or stability
    reversing (the plus symbol of f -> T(f)(-z) stable), in that order of precedence.
    """
    T = _restricted(T, n)
    if not T.is_real:
        raise NotRealOperator('the trichotomy is stated for real operators')
    if T.is_zero:
        return _trivial(TRICHOTOMY)
    ra = range_analysis(T)
    artifacts = {'range': _range_artifact(ra)}
    if _real_degenerate(ra):
        return PreserverReport(TRICHOTOMY, PRESERVER, 'a', dict(artifacts, mode=DEGENERATE))

    reversed_T = compose(reflect(T.m, T.scalar), T)
    symbols = artifacts['symbols'] = {}
    for clause, key, op, mode in (('b', PLUS, T, STABILITY_PRESERVING),
                                  ('c', 'reflected_plus', reversed_T, STABILITY_REVERSING)):
        check = symbols[key] = _symbol_check(symbol(op, n, PLUS), budget, seed)
        if check.verdict.stable:
            return PreserverReport(TRICHOTOMY, PRESERVER, clause, dict(artifacts, mode=mode))
    return _conclude(TRICHOTOMY, artifacts, [[c] for c in symbols.values()], _searcher(T, n, HYP, seed=seed))


# all degrees up to N

def _hyp_sweep(T, N, budget, seed):
    if not T.is_real:
        raise NotRealOperator('hyperbolicity sweeps need a real operator')
    top = T.restrict(N)
    ra = range_analysis(top)
    artifacts = {'problem': HYP, 'range': _range_artifact(ra), 'finite_evidence': True, 'checked_up_to': N}
    if top.is_zero:
        return _trivial(SWEEP, artifacts)
    if _real_degenerate(ra):
        return PreserverReport(SWEEP, PRESERVER, 'a', dict(artifacts, mode=DEGENERATE))

    first_failure = {PLUS: None, MINUS: None}
    open_signs = set()
    checks = {}
    quiet = not log.isEnabledFor(logging.INFO)
    for n in tqdm(range(1, N + 1), mininterval=2, desc='  - (Sweeping)     ', leave=False, disable=quiet):
        for kind in (PLUS, MINUS):
            if first_failure[kind] is not None:
                continue
            G = symbol(T, n, kind)
            if G.is_zero:
                continue
            check = checks[(kind, n)] = _symbol_check(G, budget, seed)
            if check.verdict.unstable:
                first_failure[kind] = n
            elif check.verdict.unknown:
                open_signs.add(kind)
        if first_failure[PLUS] is not None and first_failure[MINUS] is not None:
            break

    for clause, kind, mode in (('b', PLUS, STABILITY_PRESERVING), ('c', MINUS, STABILITY_REVERSING)):
        if first_failure[kind] is None and kind not in open_signs:
            return PreserverReport(SWEEP, PRESERVER, clause, dict(artifacts, mode=mode))
    if first_failure[PLUS] is not None and first_failure[MINUS] is not None:
        failed_at = max(first_failure.values())
        symbols = {'%s_%d' % (kind, first_failure[kind]): checks[(kind, first_failure[kind])]
                   for kind in (PLUS, MINUS)}
        artifacts.update(symbols=symbols, failed_at=failed_at)
        witness = counterexample_search(T, failed_at, HYP, budget=params['attach_budget'], seed=seed)
        if witness is not None:
            artifacts['input_witness'] = witness
        return PreserverReport(SWEEP, NON_PRESERVER, None, artifacts)
    artifacts['symbols'] = {'%s_%d' % key: check for key, check in checks.items()}
    return PreserverReport(SWEEP, UNKNOWN, None, artifacts)


def algebraic_sweep(T, N, problem, mobius=None, semantics=PB3, budget=None, seed=0):
    """
    Runs the finite classifier of `problem` for every degree 1..N. A pass is evidence up to N,
    never a claim about all degrees; for hyp one sign of the symbol has to work at every degree.
    """
    assert N >= 1, 'sweeps start at degree 1, got N = %d' % N
    if N > T.n:
        raise DegreeExceeded(N, T.n)
    if problem == HYP:
        return _hyp_sweep(T, N, budget, seed)

    classifiers = {
        HYPC: lambda n: finitehypC_classify(T, n, budget, seed),
        STAB: lambda n: finitestab_classify(T, n, budget, seed),
        CIRCULAR: lambda n: circular_classify(T, n, mobius, semantics, budget, seed),
        BOUNDARY_PROBLEM: lambda n: boundary_classify(T, n, mobius, semantics, budget, seed),
    }
    assert problem in classifiers, 'no sweep for problem %s' % problem
    per_degree = {}
    quiet = not log.isEnabledFor(logging.INFO)
    for n in tqdm(range(1, N + 1), mininterval=2, desc='  - (Sweeping)     ', leave=False, disable=quiet):
        report = classifiers[problem](n)
        per_degree[n] = report.clause if report.verdict == PRESERVER else report.verdict
        if report.verdict == NON_PRESERVER:
            artifacts = dict(report.artifacts, problem=problem, failed_at=n, per_degree=per_degree)
            return PreserverReport(SWEEP, NON_PRESERVER, None, artifacts)
    artifacts = {'problem': problem, 'per_degree': per_degree, 'finite_evidence': True, 'checked_up_to': N}
    if any(v == UNKNOWN for v in per_degree.values()):
        return PreserverReport(SWEEP, UNKNOWN, None, artifacts)
    return PreserverReport(SWEEP, PRESERVER, 'all_degrees', artifacts)


# transcendental evidence

def _diagonal(Q):
    coeffs = [Q.scalar.domain.zero] * (Q.total_degree + 1)
    for (i, j), c in Q.terms.items():
        coeffs[i + j] = coeffs[i + j] + c
    return Poly1.from_coeffs(coeffs, Q.scalar)


def _slice(Q, w):
    """ z -> Q(z, w). """
    K = Q.scalar
    w = K.convert(w)
    result, power = Poly1.zero(K), K.domain.one
    for j in range(Q.wdeg + 1):
        result = result + Q.coefficient_in_w(j) * power
        power = power * w
    return result


def _upper_semicircle(radius):
    """ Rational points r(1 - s^2 + 2is)/(1 + s^2) of |w| = r with Im w >= 0, and -r. """
    r = Fraction(repr(float(radius)))
    points = [(r * (1 - s * s) / (1 + s * s), r * 2 * s / (1 + s * s))
              for s in (Fraction(s) for s in params['szasz_slice_tangents'])]
    return points + [(-r, Fraction(0))]


def _growth(p, radius):
    """ (bound, observed) for a univariate slice, or None when the slice vanishes. """
    if p.is_zero:
        return None
    bound = szasz_bound(p, radius)
    angles = numpy.linspace(0, 2 * numpy.pi, params['szasz_circle_points'], endpoint=False)
    values = numpy.polyval(p.to_numpy()[::-1], radius * numpy.exp(1j * angles))
    return bound, float(numpy.max(numpy.abs(values)))


def szasz_diagnostic(Q, radius=None):
    """
    Compares growth bounds with moduli sampled on |z| = radius, for the diagonal t -> Q(t, t)
    and for the slices z -> Q(z, w0) with w0 on the closed upper half of |w| = radius. Stability
    of Q makes every one of these univariate polynomials stable. `bound` and `observed` are the
    maxima over all of them.
    """
    radius = params['szasz_radius'] if radius is None else radius
    diagonal = _diagonal(Q)
    if diagonal.is_zero:
        return None
    try:
        growths = [_growth(diagonal, radius)]
        growths += [g for g in (_growth(_slice(Q, w), radius) for w in _upper_semicircle(radius)) if g is not None]
    except NotStable as e:
        log.warning('growth bound precondition fails for %s: %s', Q, e)
        return {'radius': radius, 'bound': None, 'observed': None, 'sound': False}
    return {
        'radius': radius,
        'bound': max(bound for bound, _ in growths),
        'observed': max(observed for _, observed in growths),
        'sound': all(observed <= bound * (1 + 1e-9) for bound, observed in growths),
        'slices': len(growths) - 1,
        'diagonal': {'bound': growths[0][0], 'observed': growths[0][1]},
    }


def transcendental_probe(T, N, problem=STAB, budget=None, seed=0):
    """
    Decides the truncations sum_k (n)_k P_k(z) w^k, P_k = (-1)^k T(z^k)/k!, for n = 0..N. For hyp
    the truncations of G_T(z, -w) are tried as well and the surviving branch is reported. A pass
    is evidence of order N only.
    """
    assert N >= 1, 'probe order must be positive, got %d' % N
    branches = [(PLUS, False)]
    if problem == HYP:
        if not T.is_real:
            raise NotRealOperator('the hyperbolicity probe needs a real operator')
        branches.append((MINUS, True))
    series = gt_series(T, N)

    results = {}
    for name, reflected in branches:
        entries = []
        for n, Q in enumerate(series.truncations()):
            if reflected:
                Q = Q.reflect(w=True)
            if Q.is_zero:
                entries.append({'n': n, 'zero': True})
                continue
            check = _symbol_check(Q, budget, seed)
            entry = {'n': n, 'check': check}
            if check.verdict.stable:
                entry['szasz'] = szasz_diagnostic(Q)
            entries.append(entry)
            if check.verdict.unstable:
                break
        results[name] = entries

    artifacts = {'problem': problem, 'order': N, 'finite_evidence': True, 'truncations': results}
    status = {name: _branch_status(entries) for name, entries in results.items()}
    survived = [name for name, _ in branches if status[name] == PRESERVER]
    if survived:
        return PreserverReport(TRANSCENDENTAL, PRESERVER, 'truncations', dict(artifacts, branch=survived[0]))
    if all(s == NON_PRESERVER for s in status.values()):
        artifacts['symbols'] = {'%s_%d' % (name, entries[-1]['n']): entries[-1]['check']
                                for name, entries in results.items()}
        return PreserverReport(TRANSCENDENTAL, NON_PRESERVER, None, artifacts)
    return PreserverReport(TRANSCENDENTAL, UNKNOWN, None, artifacts)


def _branch_status(entries):
    checks = [e['check'] for e in entries if 'check' in e]
    if any(c.verdict.unstable for c in checks):
        return NON_PRESERVER
    if any(c.verdict.unknown for c in checks):
        return UNKNOWN
    return PRESERVER


# multiplier sequences

def binomial_image(lam, n):
    """ T[(z+1)^n] = sum_k C(n, k) lambda(k) z^k. """
    return Poly1.from_coeffs([lam[k] * math.comb(n, k) for k in range(n + 1)], lam.scalar)


def _same_sign_roots(p):
    degree = p.degree
    return (real_root_count(p, (None, 0)).with_multiplicity == degree
            or real_root_count(p, (0, None)).with_multiplicity == degree)


def multiplier_test(lam, N):
    """
    lambda is a multiplier sequence up to N when every T[(z+1)^n], n <= N, is hyperbolic with all
    roots of one sign; a root at 0 counts for either sign.
    """
    assert N >= 1, 'N must be positive, got %d' % N
    for n in range(1, N + 1):
        p = binomial_image(lam, n)
        if p.is_zero or p.degree < 1:
            continue
        verdict = is_hyperbolic(p)
        if not verdict.answer:
            failure = {'n': n, 'poly': p, 'root': verdict.witness, 'reason': 'not hyperbolic'}
            return PreserverReport(MULTIPLIER, NON_PRESERVER, None, {'failure': failure, 'checked_up_to': n})
        if not _same_sign_roots(p):
            failure = {'n': n, 'poly': p, 'root': None, 'reason': 'roots of both signs'}
            return PreserverReport(MULTIPLIER, NON_PRESERVER, None, {'failure': failure, 'checked_up_to': n})
    return PreserverReport(MULTIPLIER, PRESERVER, 'ps_iv', {'checked_up_to': N, 'finite_evidence': True})
