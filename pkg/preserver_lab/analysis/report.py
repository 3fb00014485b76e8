"""
Rendering of PreserverReports and the re-check every witness passes before it is written out.
"""
import logging

import ujson as json

from preserver_lab.algebra.classify import is_hyperbolic
from preserver_lab.algebra.components import SCHEMA_VERSION
from preserver_lab.algebra.domains import OPEN, CircularDomain
from preserver_lab.analysis import preservers
from preserver_lab.analysis.stab2 import vanishes, jsonable
from preserver_lab.errors import WitnessRejected

log = logging.getLogger(__name__)


def _check_symbol(name, check):
    witness = check.verdict.witness
    if not vanishes(check.poly, witness.z, witness.w):
        raise WitnessRejected('symbol %s does not vanish at its witness %s' % (name, witness))
    if check.mobius is None:
        inside = witness.z.imag > 0 and witness.w.imag > 0
    else:
        domain = CircularDomain(check.mobius.rationalize(), OPEN)
        inside = domain.contains(witness.z) and domain.contains(witness.w)
    if not inside:
        raise WitnessRejected('witness %s of symbol %s lies outside the domain' % (witness, name))


def _check_input(witness, T, problem, mobius):
    region = preservers.region_for(problem, mobius)
    if region.offending_root(witness.f) is not None:
        raise WitnessRejected('input %s is not in the %s class' % (witness.f, problem))
    image = T(preservers._on_backend(witness.f, T.scalar))
    if image != witness.image:
        raise WitnessRejected('recorded image of %s is not T(f)' % witness.f)
    if region.offending_root(image) is None:
        raise WitnessRejected('image %s of %s stays in the %s class' % (image, witness.f, problem))


def _check_multiplier(failure, lam):
    p = preservers.binomial_image(lam, failure['n'])
    if p != failure['poly']:
        raise WitnessRejected('recorded T[(z+1)^%d] does not match the sequence' % failure['n'])
    if is_hyperbolic(p).answer and preservers._same_sign_roots(p):
        raise WitnessRejected('T[(z+1)^%d] = %s passes the multiplier test' % (failure['n'], p))


def verify_report(report, T=None, mobius=None, lam=None):
    """ Re-checks every witness a report carries; raises WitnessRejected on the first failure. """
    for name, check in report.symbol_witnesses:
        _check_symbol(name, check)
    if report.input_witness is not None:
        assert T is not None, 'input witnesses are checked against their operator'
        problem = report.artifacts.get('problem', report.problem)
        _check_input(report.input_witness, T, problem, mobius)
    failure = report.artifacts.get('failure')
    if failure is not None:
        assert lam is not None, 'multiplier failures are checked against their sequence'
        _check_multiplier(failure, lam)
    log.debug('witnesses of the %s report re-checked', report.problem)


def to_document(report, metadata):
    return {'schema_version': SCHEMA_VERSION, 'report': report.to_json(), 'metadata': jsonable(metadata)}


def render_json(document):
    return json.dumps(document, sort_keys=True, indent=2)


def _describe_check(check):
    verdict = check.verdict
    if verdict.stable:
        return 'stable [%s]' % verdict.certificate.kind
    if verdict.unstable:
        w = verdict.witness
        return 'unstable, zero at z = %.6g%+.6gi, w = %.6g%+.6gi' % (w.z.real, w.z.imag, w.w.real, w.w.imag)
    return 'unknown after %d samples' % verdict.evidence.samples_tested


def render_text(report, metadata=None):
    lines = ['problem:  %s' % report.problem]
    verdict = report.verdict if report.clause is None else '%s (clause %s)' % (report.verdict, report.clause)
    lines.append('verdict:  %s' % verdict)
    artifacts = report.artifacts
    for key in ('mode', 'semantics', 'phase', 'failed_at', 'failed_degree', 'checked_up_to', 'branch'):
        if artifacts.get(key) is not None:
            lines.append('%s: %s' % (key.replace('_', ' '), artifacts[key]))
    if 'range' in artifacts:
        lines.append('rank:     %d' % artifacts['range']['rank'])
    for name, check in artifacts.get('symbols', {}).items():
        lines.append('symbol %s = %s' % (name, check.poly))
        lines.append('    %s' % _describe_check(check))
    witness = report.input_witness
    if witness is not None:
        lines.append('witness:  %s -> %s' % (witness.f, witness.image))
        if witness.root is not None:
            lines.append('          root %.6g%+.6gi leaves the class' % (witness.root.real, witness.root.imag))
    failure = artifacts.get('failure')
    if failure is not None:
        lines.append('failure:  n = %d, %s (%s)' % (failure['n'], failure['poly'], failure['reason']))
    for note in artifacts.get('notes', ()):
        lines.append('note:     %s' % note)
    if artifacts.get('finite_evidence'):
        lines.append('note:     finite evidence only')
    if metadata:
        lines.append('-' * 40)
        lines.extend('%s: %s' % (k, metadata[k]) for k in sorted(metadata))
    return '\n'.join(lines)
