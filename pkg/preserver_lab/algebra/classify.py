"""
Univariate zero-locus predicates. Every decision on the exact backend is made with rational
arithmetic (Sturm counts, Wronskian signs, Hermite-Biehler splitting); root approximations are
only used to produce witnesses. The float backend decides from certified root clusters and
resolves ties to the closed condition.
"""
import logging
import math
from collections import namedtuple

from preserver_lab.algebra.components import EXACT, FLOAT, UPPER, LOWER
from preserver_lab.algebra.components.scalar import to_complex
from preserver_lab.algebra.domains import (
    OPEN, REVERSED, CLOSED_COMPLEMENT, BOUNDARY, INVERSE, conjugate_poly)
from preserver_lab.algebra.poly import (
    Poly1, all_roots, derivative, real_root_count, sturm_count)
from preserver_lab.errors import ZeroPolynomial, NotHyperbolic, NotStable

log = logging.getLogger(__name__)

F_LL_G = 'f_ll_g'
G_LL_F = 'g_ll_f'
PROPORTIONAL = 'proportional'
NEITHER = 'neither'

NONPOSITIVE = 'nonpositive'
NONNEGATIVE = 'nonnegative'
MIXED = 'mixed'
IDENTICALLY_ZERO = 'identically_zero'


class LocusVerdict(namedtuple('LocusVerdict', ['answer', 'witness', 'backend'])):
    """ answer False always comes with a witness root lying in the forbidden region. """

    def to_json(self):
        return {
            'answer': 'yes' if self.answer else 'no',
            'witness': None if self.witness is None else [self.witness.real, self.witness.imag],
            'backend': self.backend
        }


class PencilRelation(namedtuple('PencilRelation', ['relation', 'degenerate'])):
    """ `degenerate` marks a zero member, for which 0 << f and f << 0 both hold. """

    @property
    def f_ll_g(self):
        return self.degenerate or self.relation in (F_LL_G, PROPORTIONAL)

    @property
    def g_ll_f(self):
        return self.degenerate or self.relation in (G_LL_F, PROPORTIONAL)

    @property
    def interlacing(self):
        return self.degenerate or self.relation != NEITHER


HBSplit = namedtuple('HBSplit', ['f', 'g', 'relation', 'stable'])


def _backend(f):
    return EXACT if f.scalar.exact else FLOAT


def _yes(f):
    return LocusVerdict(True, None, _backend(f))


def _no(f, witness):
    assert witness is not None, 'negative verdict without a witness for %s' % f
    return LocusVerdict(False, complex(witness), _backend(f))


def _slack(f, root):
    return max(root.radius, f.scalar.tolerance)


def _worst_root(f, score):
    """ The root with the largest violation score; score(root) -> float or None to skip. """
    best, best_score = None, None
    for r in all_roots(f):
        s = score(r)
        if s is not None and (best_score is None or s > best_score):
            best, best_score = r, s
    return best.value if best is not None else None


def real_phase(f):
    """
    f rescaled by 1/c for its largest-magnitude coefficient c, if that makes it real; else None.
    The rescaled polynomial is returned with its imaginary part dropped.
    """
    K = f.scalar
    if f.is_zero:
        return f
    pivot = max(f.coeffs, key=lambda c: abs(to_complex(c)))
    g = f * (K.domain.one / pivot)
    if not g.is_real:
        return None
    return g.real_part()


def is_hyperbolic(f, strict=False):
    if f.is_zero:
        raise ZeroPolynomial('hyperbolicity of the zero polynomial')
    g = real_phase(f)
    if g is None:
        return _no(f, _worst_root(f, lambda r: abs(r.value.imag)))
    if g.degree < 1:
        return _yes(f)

    count = real_root_count(g)
    if count.with_multiplicity < g.degree:
        return _no(f, _worst_root(g, lambda r: abs(r.value.imag)))
    if strict and count.distinct < g.degree:
        return _no(f, _worst_root(g, lambda r: r.multiplicity if r.multiplicity > 1 else None))
    return _yes(f)


def is_stable1(f, half=UPPER, strict=False):
    """ No root with Im > 0 (strict: Im >= 0); `half=LOWER` mirrors the sign. """
    if f.is_zero:
        raise ZeroPolynomial('stability of the zero polynomial')
    assert half in (UPPER, LOWER), 'unknown half-plane: %s' % half
    h = f if half == UPPER else f.conjugate()
    sign = 1 if half == UPPER else -1

    if h.degree < 1:
        return _yes(f)

    if h.scalar.exact:
        stable = hb_split(h).stable
        if stable and strict:
            stable = not _has_common_real_root(h.real_part(), h.imag_part())
    else:
        stable = all(_float_upper_ok(h, r, strict) for r in all_roots(h))

    if stable:
        return _yes(f)
    return _no(f, _worst_root(f, lambda r: sign * r.value.imag))


def _float_upper_ok(h, root, strict):
    slack = _slack(h, root)
    if strict:
        return root.value.imag < -slack
    return root.value.imag <= slack


def _has_common_real_root(p, q):
    if p.is_zero or q.is_zero:
        common = q if p.is_zero else p
    else:
        common = Poly1.from_qq(p.to_qq().gcd(q.to_qq()))
    if common.degree < 1:
        return False
    return real_root_count(common).distinct > 0


def is_domain_stable1(f, domain):
    """
    No root of f in the domain's point set. Decided exactly on g = phi_n^-1(f), n = deg f: roots of
    f in C are roots of g in H, roots in C^r are roots of g below the axis, and roots on the
    boundary are real roots of g or the pole -d/c (exactly when deg g < n).
    """
    if f.is_zero:
        raise ZeroPolynomial('domain stability of the zero polynomial')
    n = f.degree
    if n < 1:
        return _yes(f)
    m = domain.mobius
    g = conjugate_poly(m, n, f, INVERSE)
    pole_root = g.degree < n

    if domain.view == OPEN:
        ok = is_stable1(g, UPPER).answer
    elif domain.view == REVERSED:
        ok = is_stable1(g, LOWER).answer
    elif domain.view == CLOSED_COMPLEMENT:
        ok = not pole_root and (g.degree < 1 or is_stable1(g, LOWER, strict=True).answer)
    else:
        ok = not pole_root and _no_real_roots(g)
    if ok:
        return _yes(f)
    return _no(f, _worst_root(f, lambda r: _violation(domain, r.value)))


def _no_real_roots(g):
    if g.degree < 1:
        return True
    if not g.scalar.exact:
        return all(abs(r.value.imag) > _slack(g, r) for r in all_roots(g))
    return not _has_common_real_root(g.real_part(), g.imag_part())


def _violation(domain, point):
    m = domain.mobius
    den = to_complex(m.c) * point + to_complex(m.d)
    if abs(den) < 1e-12 * (1 + abs(point)):
        level = 0.0
    else:
        level = ((to_complex(m.a) * point + to_complex(m.b)) / den).imag
    return {
        OPEN: level,
        REVERSED: -level,
        CLOSED_COMPLEMENT: -level,
        BOUNDARY: -abs(level),
    }[domain.view]


def wronskian(f, g):
    """ W[f, g] = f'g - fg' """
    return derivative(f) * g - f * derivative(g)


def wronskian_sign(f, g):
    assert f.is_real and g.is_real, 'Wronskian sign needs real polynomials'
    w = wronskian(f, g)
    if w.is_zero or (not w.scalar.exact and all(abs(c) <= w.scalar.tolerance for c in w.to_numpy())):
        return IDENTICALLY_ZERO

    if w.degree >= 1:
        if w.scalar.exact:
            _, factors = w.to_qq().sqf_list()
            if any(k % 2 == 1 and p.degree() > 0 and sturm_count(p) > 0 for p, k in factors):
                return MIXED
        else:
            for r in all_roots(w):
                if abs(r.value.imag) <= _slack(w, r) and r.multiplicity % 2 == 1:
                    return MIXED

    lc = to_complex(w.lc).real
    return NONNEGATIVE if lc > 0 else NONPOSITIVE


def pencil_relation(f, g):
    for p in (f, g):
        assert p.is_real, 'pencil relation needs real polynomials, got %s' % p
        if not p.is_zero and not is_hyperbolic(p).answer:
            raise NotHyperbolic('%s is not hyperbolic' % p)

    if f.is_zero:
        return PencilRelation(F_LL_G, True)
    if g.is_zero:
        return PencilRelation(G_LL_F, True)

    sign = wronskian_sign(f, g)
    if sign == IDENTICALLY_ZERO:
        return PencilRelation(PROPORTIONAL, False)
    if abs(f.degree - g.degree) > 1 or sign == MIXED:
        return PencilRelation(NEITHER, False)
    return PencilRelation(F_LL_G if sign == NONPOSITIVE else G_LL_F, False)


def hb_split(h):
    """ h = f + ig; h is stable exactly when f, g are hyperbolic (or zero) and g << f. """
    if h.is_zero:
        raise ZeroPolynomial('Hermite-Biehler split of the zero polynomial')
    f, g = h.real_part(), h.imag_part()
    if any(not p.is_zero and not is_hyperbolic(p).answer for p in (f, g)):
        return HBSplit(f, g, PencilRelation(NEITHER, False), False)
    relation = pencil_relation(f, g)
    return HBSplit(f, g, relation, relation.g_ll_f)


def szasz_bound(f, r):
    """
    Growth bound for a stable f on |z| <= r, from its lowest nonzero coefficient c_m and the two
    that follow it.
    """
    if f.is_zero:
        raise ZeroPolynomial('Szasz bound of the zero polynomial')
    if not is_stable1(f).answer:
        raise NotStable('%s is not stable' % f)
    assert r > 0, 'radius must be positive, got %s' % r

    coeffs = [abs(to_complex(c)) for c in f.coeffs]
    m = next(k for k, c in enumerate(coeffs) if c)
    cm = coeffs[m]
    c1 = coeffs[m + 1] if m + 1 < len(coeffs) else 0.0
    c2 = coeffs[m + 2] if m + 2 < len(coeffs) else 0.0
    return cm * r ** m * math.exp(r * c1 / cm + 3 * r ** 2 * c1 ** 2 / cm ** 2 + 3 * r ** 2 * c2 / cm)
