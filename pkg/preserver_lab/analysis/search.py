"""
Slice-and-solve falsification of bivariate stability. A quasi-random grid of points w0 in the
upper half-plane is swept; for each w0 the univariate slice z -> f(z, w0) is solved through
companion eigenvalues and any root above the axis is polished and re-checked before it becomes
a witness. Part of the budget refines around the slices whose roots came closest to the axis.
"""
import logging
from collections import namedtuple
from types import SimpleNamespace

import mpmath
import numpy
from scipy.stats import qmc
from tqdm import tqdm

from preserver_lab.algebra.components.roots import batched_companion_roots
from preserver_lab.algebra.components.scalar import to_mpc

log = logging.getLogger(__name__)

params = {
    'budget': 10000,
    'imag_floor': 1e-6,
    'imag_ceiling': 1e2,
    'real_scale': 2.0,
    'batch_size': 512,
    'refine_fraction': 0.25,
    'refine_seeds': 8,
    'tolerance': 1e-9,
    'polish_dps': 40,
}

Witness = namedtuple('Witness', ['z', 'w', 'residual'])
SearchEvidence = namedtuple('SearchEvidence', ['samples_tested', 'min_modulus_found', 'grid', 'best_margin'])
SearchResult = namedtuple('SearchResult', ['witness', 'evidence'])


def _options(overrides):
    opt = SimpleNamespace(**params)
    for k, v in overrides.items():
        if v is not None:
            setattr(opt, k, v)
    return opt


def halton_points(count, seed, opt):
    """ Grid points w0 = s tan(pi(u - 1/2)) + i exp(log-uniform between the floor and the ceiling). """
    sampler = qmc.Halton(d=2, scramble=True, seed=seed)
    u = sampler.random(count)
    u = numpy.clip(u, 1e-12, 1 - 1e-12)
    re = opt.real_scale * numpy.tan(numpy.pi * (u[:, 0] - 0.5))
    lo, hi = numpy.log(opt.imag_floor), numpy.log(opt.imag_ceiling)
    im = numpy.exp(lo + u[:, 1] * (hi - lo))
    return re + 1j * im


def refine_points(centers, count, seed, opt):
    """ Points scattered around `centers`, with spread proportional to their imaginary parts. """
    rng = numpy.random.default_rng(seed)
    picks = rng.integers(0, len(centers), size=count)
    base = centers[picks]
    spread = numpy.maximum(base.imag, opt.imag_floor)
    re = base.real + spread * rng.normal(size=count)
    im = numpy.clip(base.imag * numpy.exp(0.5 * rng.normal(size=count)), opt.imag_floor, opt.imag_ceiling)
    return re + 1j * im


class SliceSolver(object):
    """ Roots of z -> f(z, w0) for batches of w0, f given as an exact or float Poly2. """

    def __init__(self, f, opt):
        self.f = f
        self.opt = opt
        self.matrix = f.to_numpy()
        self.scale = numpy.max(numpy.abs(self.matrix)) or 1.0
        self.matrix = self.matrix / self.scale
        self.zdeg = self.matrix.shape[0] - 1
        with mpmath.workdps(opt.polish_dps):
            self.exact_rows = [[to_mpc(c) for c in row] for row in f.coeffs]

    def slices(self, points):
        powers = points[None, :] ** numpy.arange(self.matrix.shape[1])[:, None]
        return self.matrix @ powers

    def roots(self, slice_coeffs):
        """ Per-slice root arrays; None marks a slice that vanishes identically. """
        batch = slice_coeffs.shape[1]
        out = [None] * batch
        norms = numpy.max(numpy.abs(slice_coeffs), axis=0)
        lead = numpy.abs(slice_coeffs[-1, :])
        regular = (lead > 1e-8 * numpy.maximum(norms, 1e-300)) & (norms > 1e-14)
        if self.zdeg >= 1 and numpy.any(regular):
            eig = batched_companion_roots(slice_coeffs[:, regular].T)
            for idx, r in zip(numpy.flatnonzero(regular), eig):
                out[idx] = r
        for idx in numpy.flatnonzero(~regular):
            if norms[idx] <= 1e-14:
                continue
            coeffs = slice_coeffs[:, idx]
            top = numpy.flatnonzero(numpy.abs(coeffs) > 1e-12 * norms[idx]).max()
            out[idx] = numpy.roots(coeffs[:top + 1][::-1]) if top >= 1 else numpy.array([], dtype=complex)
        for idx in range(batch):
            if out[idx] is None and norms[idx] > 1e-14:
                out[idx] = numpy.array([], dtype=complex)
        return out, norms

    def value(self, z, w):
        """ |f(z, w)| at polishing precision. """
        with mpmath.workdps(self.opt.polish_dps):
            z, w = mpmath.mpc(z), mpmath.mpc(w)
            acc = mpmath.mpc(0)
            for row in reversed(self.exact_rows):
                inner = mpmath.mpc(0)
                for c in reversed(row):
                    inner = inner * w + c
                acc = acc * z + inner
            return float(abs(acc))

    def polish(self, z0, w):
        with mpmath.workdps(self.opt.polish_dps):
            w = mpmath.mpc(w)
            rows = self.exact_rows

            def fz(z):
                acc = mpmath.mpc(0)
                for row in reversed(rows):
                    inner = mpmath.mpc(0)
                    for c in reversed(row):
                        inner = inner * w + c
                    acc = acc * z + inner
                return acc

            try:
                z = mpmath.findroot(fz, mpmath.mpc(z0), solver='newton', verify=False, maxsteps=50)
            except (ZeroDivisionError, ValueError):
                return complex(z0)
            return complex(z)

    def residual_ok(self, z, w):
        bound = self.opt.tolerance * self.scale * (1 + abs(z)) ** max(self.zdeg, 1) * (1 + abs(w)) ** max(
            self.matrix.shape[1] - 1, 1)
        return self.value(z, w) <= bound


def _check_candidate(solver, z, w, opt):
    if w.imag <= opt.tolerance or z.imag <= opt.tolerance * (1 + abs(z)):
        return None
    z = solver.polish(z, w)
    if z.imag <= opt.tolerance * (1 + abs(z)) or not solver.residual_ok(z, w):
        return None
    return Witness(z, complex(w), solver.value(z, w))


class _Tracker(object):
    def __init__(self):
        self.samples = 0
        self.min_modulus = float('inf')
        self.best_margin = -float('inf')
        self.scores = []

    def record(self, points, roots, solver):
        for w, rs in zip(points, roots):
            self.samples += 1
            if rs is None or len(rs) == 0:
                self.scores.append((-float('inf'), w))
                continue
            margin = float(numpy.max(rs.imag))
            self.best_margin = max(self.best_margin, margin)
            self.scores.append((margin, w))
            projected = rs.real + 1j * numpy.maximum(rs.imag, 0.0)
            powers = w ** numpy.arange(solver.matrix.shape[1])
            row_values = solver.matrix @ powers
            values = numpy.abs(numpy.polyval(row_values[::-1], projected))
            self.min_modulus = min(self.min_modulus, float(numpy.min(values)))


def _sweep(solver, points, tracker, opt, desc):
    """ First witness in grid order, or None. """
    quiet = not log.isEnabledFor(logging.INFO)
    starts = range(0, len(points), opt.batch_size)
    for start in tqdm(starts, mininterval=2, desc=desc, leave=False, disable=quiet):
        chunk = points[start:start + opt.batch_size]
        roots, norms = solver.roots(solver.slices(chunk))
        tracker.record(chunk, roots, solver)
        for w, rs, norm in zip(chunk, roots, norms):
            if rs is None:
                z = complex(0, 1)
                if solver.residual_ok(z, w):
                    return Witness(z, complex(w), solver.value(z, w))
                continue
            for z in sorted(rs, key=lambda r: -r.imag):
                witness = _check_candidate(solver, complex(z), w, opt)
                if witness is not None:
                    return witness
                if z.imag <= opt.tolerance:
                    break
    return None


def search(f, budget=None, seed=0, **overrides):
    """
    Sweeps slices of f (and of f with z and w exchanged, when both degrees are positive) and returns
    a SearchResult whose witness, if any, has Im z > 0, Im w > 0 and a vanishing residual.
    """
    opt = _options(dict(overrides, budget=budget))
    orientations = []
    if f.zdeg >= 1:
        orientations.append(False)
    if f.wdeg >= 1:
        orientations.append(True)
    grid = {'kind': 'halton', 'seed': seed, 'imag_floor': opt.imag_floor, 'imag_ceiling': opt.imag_ceiling,
            'real_scale': opt.real_scale, 'orientations': len(orientations)}
    tracker = _Tracker()

    if not orientations:
        return SearchResult(None, SearchEvidence(1, float(numpy.abs(f.to_numpy()).max()), grid, -float('inf')))

    share = max(1, opt.budget // len(orientations))
    for swapped in orientations:
        g = f.swap() if swapped else f
        solver = SliceSolver(g, opt)
        coarse = max(1, int(share * (1 - opt.refine_fraction)))
        tracker.scores = []
        witness = _sweep(solver, halton_points(coarse, seed, opt), tracker, opt, '  - (Falsifying)   ')
        if witness is None and share > coarse:
            ranked = sorted(tracker.scores, key=lambda s: -s[0])[:opt.refine_seeds]
            centers = numpy.array([w for _, w in ranked], dtype=complex)
            if len(centers):
                witness = _sweep(solver, refine_points(centers, share - coarse, seed + 1, opt), tracker, opt,
                                 '  - (Refining)     ')
        if witness is not None:
            if swapped:
                witness = Witness(witness.w, witness.z, witness.residual)
            log.debug('witness for %s: %s', f, witness)
            return SearchResult(witness, SearchEvidence(tracker.samples, tracker.min_modulus, grid,
                                                        tracker.best_margin))

    return SearchResult(None, SearchEvidence(tracker.samples, tracker.min_modulus, grid, tracker.best_margin))
