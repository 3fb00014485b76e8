import logging
from collections import namedtuple

import mpmath
import numpy

from preserver_lab.algebra.components.scalar import to_mpc
from preserver_lab.errors import NoConvergence

log = logging.getLogger(__name__)

params = {
    'dps': 50,
    'maxsteps': 200,
    'extraprec': 120,
}

Root = namedtuple('Root', ['value', 'multiplicity', 'radius'])


def inclusion_radii(coeffs, approx):
    """
    Inclusion radii for approximate simple roots of the polynomial with highest-first `coeffs`.
    The union of the disks D(z_i, n|f(z_i)| / |lc prod_j (z_i - z_j)|) holds every root, and a
    connected component made of k disks holds exactly k of them.
    """
    n = len(approx)
    lc = coeffs[0]
    radii = []
    for i, zi in enumerate(approx):
        denom = lc
        for j, zj in enumerate(approx):
            if j != i:
                denom *= zi - zj
        if not denom:
            radii.append(mpmath.inf)
            continue
        radii.append(n * abs(mpmath.polyval(coeffs, zi)) / abs(denom))
    return radii


def merge_disks(candidates):
    """ Union-find over overlapping (value, multiplicity, radius) disks. """
    parent = list(range(len(candidates)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, (zi, _, ri) in enumerate(candidates):
        for j in range(i + 1, len(candidates)):
            zj, _, rj = candidates[j]
            if abs(zi - zj) <= ri + rj:
                parent[find(i)] = find(j)

    groups = {}
    for i in range(len(candidates)):
        groups.setdefault(find(i), []).append(candidates[i])

    roots = []
    for members in groups.values():
        multiplicity = sum(k for _, k, _ in members)
        center = sum(z * k for z, k, _ in members) / multiplicity
        radius = max(abs(center - z) + r for z, _, r in members)
        roots.append(Root(complex(center), multiplicity, float(radius)))
    return sorted(roots, key=lambda r: (r.value.real, r.value.imag))


def _simple_roots(coeffs):
    try:
        return mpmath.polyroots(coeffs, maxsteps=params['maxsteps'], extraprec=params['extraprec'])
    except mpmath.libmp.NoConvergence as e:
        raise NoConvergence(str(e))


def exact_roots(factors):
    """
    Roots of a polynomial given as square-free factors [(highest-first Gaussian rational coefficients,
    multiplicity)], each factor solved at `params['dps']` digits.
    """
    candidates = []
    with mpmath.workdps(params['dps']):
        for coeffs, multiplicity in factors:
            coeffs = [to_mpc(c) for c in coeffs]
            if len(coeffs) < 2:
                continue
            approx = [mpmath.mpc(z) for z in _simple_roots(coeffs)]
            for z, r in zip(approx, inclusion_radii(coeffs, approx)):
                candidates.append((z, multiplicity, r))
        return merge_disks(candidates)


def companion_roots(coeffs, tolerance):
    """ Roots of highest-first complex `coeffs` through companion-matrix eigenvalues. """
    coeffs = numpy.asarray(coeffs, dtype=complex)
    zeros = 0
    while zeros < len(coeffs) - 1 and abs(coeffs[len(coeffs) - 1 - zeros]) <= tolerance:
        zeros += 1
    trimmed = coeffs[:len(coeffs) - zeros]

    candidates = []
    if zeros:
        candidates.append((0j, zeros, 0.0))
    if len(trimmed) > 1:
        try:
            approx = numpy.roots(trimmed)
        except numpy.linalg.LinAlgError as e:
            raise NoConvergence('companion eigenvalues failed: %s' % e)
        if not numpy.all(numpy.isfinite(approx)):
            raise NoConvergence('non-finite roots for coefficients %s' % trimmed)

        distinct = {}
        for z in approx:
            distinct[complex(z)] = distinct.get(complex(z), 0) + 1
        values = list(distinct)
        radii = inclusion_radii([mpmath.mpc(c) for c in trimmed], [mpmath.mpc(z) for z in values])
        for z, r in zip(values, radii):
            k = distinct[z]
            if k > 1 or r == mpmath.inf:
                r = max(tolerance, 1e-12 * (1 + abs(z)))
            candidates.append((z, k, float(r)))
    return merge_disks(candidates)


def batched_companion_roots(coeffs):
    """
    Roots for a batch of polynomials sharing a degree: `coeffs` is (batch, deg + 1), lowest-first,
    with nonzero leading column. Returns (batch, deg) eigenvalues of the stacked companion matrices.
    """
    batch, width = coeffs.shape
    deg = width - 1
    monic = coeffs[:, :-1] / coeffs[:, -1:]
    companion = numpy.zeros((batch, deg, deg), dtype=complex)
    companion[:, 0, :] = -monic[:, ::-1]
    if deg > 1:
        companion[:, numpy.arange(1, deg), numpy.arange(deg - 1)] = 1
    return numpy.linalg.eigvals(companion)
