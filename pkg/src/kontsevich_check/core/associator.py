"""Rational associators solved degree by degree.

Phi is parametrized as exp(phi) with phi a Lie series in a = t12 and
b = t23 written in the Lyndon basis, so Phi is grouplike and survives
every strand deletion.  At degree n the unknown part phi_n enters the
pentagon, the hexagon and the inversion symmetry linearly; the solution
orthogonal to the solution space of the homogeneous system is taken, and
in odd degree phi_n = 0 is kept whenever it already solves the system.
"""

import hashlib
import json
import logging
import os
from collections import OrderedDict
from fractions import Fraction

from kontsevich_check.config import Config
from kontsevich_check.core.algebra import AlgebraElement
from kontsevich_check.core.diagram import Skeleton, check_degree, theta
from kontsevich_check.core.horizontal import HorizontalElement
from kontsevich_check.core.hopf import (StrandMap, StrandMapKind,
                                        delete_strand, duplicate, embed,
                                        exp_trunc, inverse, multiply,
                                        permute_strands)
from kontsevich_check.errors import (InconsistentSystemError,
                                     PreconditionError)
from kontsevich_check.util.linalg import nullity, solve_least_norm
from kontsevich_check.util.statistics import Statistics

PENTAGON = 'pentagon'
HEXAGON = 'hexagon'
INVERSION = 'inversion'
COUNIT = 'counit'
AXIOMS = [PENTAGON, HEXAGON, INVERSION, COUNIT]

# Superscript notation: Phi^{ijk} puts strand f of Phi at position ijk[f].
SUPERSCRIPTS = {
    '123': (0, 1, 2),
    '132': (0, 2, 1),
    '312': (2, 0, 1),
    '321': (2, 1, 0),
}


def lyndon_words(n, alphabet=2):
    """Lyndon words of length exactly n (Duval's algorithm)."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == n:
            out.append(tuple(w))
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet - 1:
            w.pop()
    return out


def _is_lyndon(w):
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def lyndon_bracket(word, letters):
    """Standard bracketing of a Lyndon word as a HorizontalElement."""
    if len(word) == 1:
        return letters[word[0]]
    for i in range(1, len(word)):
        if _is_lyndon(word[i:]):
            left = lyndon_bracket(word[:i], letters)
            right = lyndon_bracket(word[i:], letters)
            return left * right - right * left
    raise AssertionError('{} is not a Lyndon word'.format(word))


def word_name(word):
    return ''.join('ab'[i] for i in word)


def lie_letters(truncation):
    return [HorizontalElement.generator(3, truncation, 0, 1),
            HorizontalElement.generator(3, truncation, 1, 2)]


def superscript(x, code):
    positions = SUPERSCRIPTS[code]
    return x.map_strands([(p,) for p in positions], x.strands)


def _blocks(sizes):
    lifts, start = [], 0
    for size in sizes:
        lifts.append(tuple(range(start, start + size)))
        start += size
    return lifts, start


def inflate(x, sizes):
    lifts, target = _blocks(sizes)
    return x.map_strands(lifts, target)


def shift(x, offset, target):
    return x.map_strands([(offset + i,) for i in range(x.strands)], target)


def pentagon_residual(phi):
    lhs = inflate(phi, (1, 1, 2)) * inflate(phi, (2, 1, 1))
    rhs = shift(phi, 1, 4) * inflate(phi, (1, 2, 1)) * shift(phi, 0, 4)
    return lhs - rhs


def hexagon_residual(phi, r):
    lhs = inflate(r, (2, 1))
    r13 = r.map_strands([(0,), (2,)], 3)
    r23 = r.map_strands([(1,), (2,)], 3)
    rhs = (superscript(phi, '312') * r13 * superscript(phi, '132').inverse()
           * r23 * phi)
    return lhs - rhs


def inversion_residual(phi):
    return superscript(phi, '321') * phi - \
        HorizontalElement.one(3, phi.truncation)


def counit_residuals(phi):
    out = []
    for i in range(3):
        lifts = [(j if j < i else j - 1,) if j != i else () for j in range(3)]
        out.append(phi.map_strands(lifts, 2) -
                   HorizontalElement.one(2, phi.truncation))
    return out


def _linear_parts(lie):
    # Degree-n contribution of Phi -> Phi + lie to each residual.
    pent = (inflate(lie, (1, 1, 2)) + inflate(lie, (2, 1, 1))
            - shift(lie, 1, 4) - inflate(lie, (1, 2, 1)) - shift(lie, 0, 4))
    hexa = superscript(lie, '132') - superscript(lie, '312') - lie
    inv = superscript(lie, '321') + lie
    return [pent, hexa, inv]


def standard_r(truncation):
    return HorizontalElement.generator(2, truncation, 0, 1,
                                       Fraction(1, 2)).exp()


class AssociatorData(object):
    """A solved associator Phi on 3 strands and R = exp(H/2) on 2 strands,
    with the Lie coefficients of log Phi in the Lyndon basis."""

    def __init__(self, truncation, coefficients, gauge_version=None):
        self.truncation = truncation
        self.coefficients = OrderedDict(
            (tuple(w), Fraction(c)) for w, c in coefficients.items())
        self.gauge_version = gauge_version or Config().get_gauge_version()
        self.phi = self.lie_part().exp()
        self.r = standard_r(truncation)
        self.nu = None

    @classmethod
    def trivial(cls, truncation, r=None):
        data = cls(truncation, {})
        if r is not None:
            data.r = r
        return data

    def lie_part(self, truncation=None):
        n = self.truncation if truncation is None else truncation
        letters = lie_letters(n)
        out = HorizontalElement(3, n)
        for word, c in self.coefficients.items():
            if len(word) <= n and c != 0:
                out = out + lyndon_bracket(word, letters).scaled(c)
        return out

    def phi_element(self):
        return self.phi.to_algebra()

    def r_element(self):
        return self.r.to_algebra()

    def truncated(self, n):
        if n > self.truncation:
            raise PreconditionError(
                'associator solved to degree {} asked for {}'.format(
                    self.truncation, n))
        data = AssociatorData(
            n, OrderedDict((w, c) for w, c in self.coefficients.items()
                           if len(w) <= n), self.gauge_version)
        data.r = self.r.truncated(n)
        return data

    def to_json(self):
        return OrderedDict([
            ('truncation', self.truncation),
            ('gauge_version', self.gauge_version),
            ('coefficients', OrderedDict(
                (word_name(w), str(c)) for w, c in self.coefficients.items())),
        ])

    @classmethod
    def from_json(cls, data):
        coefficients = OrderedDict(
            (tuple('ab'.index(ch) for ch in name), Fraction(c))
            for name, c in data['coefficients'].items())
        return cls(data['truncation'], coefficients, data['gauge_version'])

    def __repr__(self):
        return 'AssociatorData(N={}, {})'.format(
            self.truncation,
            ', '.join('{}: {}'.format(word_name(w), c)
                      for w, c in self.coefficients.items() if c != 0))


def _equations(residuals, linear):
    """Rows of sum_k x_k linear[k] = -residual, one per normal word."""
    rows, rhs = [], []
    for a, res in enumerate(residuals):
        words = set(res.terms)
        for lin in linear:
            words.update(lin[a].terms)
        for word in sorted(words):
            row = dict((k, lin[a].terms[word]) for k, lin in enumerate(linear)
                       if word in lin[a].terms)
            value = res.terms.get(word, 0)
            if not row and value == 0:
                continue
            rows.append(row)
            rhs.append(-value)
    return rows, rhs


def _solve_degree(coefficients, n):
    data = AssociatorData(n, coefficients)
    phi, r = data.phi, standard_r(n)
    residuals = [pentagon_residual(phi).degree_part(n),
                 hexagon_residual(phi, r).degree_part(n),
                 inversion_residual(phi).degree_part(n)]
    words = lyndon_words(n)
    letters = lie_letters(n)
    linear = [_linear_parts(lyndon_bracket(w, letters)) for w in words]
    rows, rhs = _equations(residuals, linear)
    if n % 2 == 1 and all(v == 0 for v in rhs):
        solution = [Fraction(0)] * len(words)
    else:
        solution = solve_least_norm(rows, rhs, len(words))
    logging.debug('degree %d: %d equations, %d unknowns, gauge freedom %d'
                  % (n, len(rows), len(words), nullity(rows, len(words))))
    return OrderedDict(zip(words, solution))


def cache_path(n, gauge_version):
    cache_dir = Config().get_cache_dir()
    if cache_dir is None:
        return None
    key = hashlib.sha256(json.dumps([n, gauge_version]).encode('utf-8'))
    return os.path.join(cache_dir, 'associator-{}.json'.format(
        key.hexdigest()[:16]))


def _load_cached(n, gauge_version):
    path = cache_path(n, gauge_version)
    if path is None or not os.path.exists(path):
        return None
    try:
        with open(path) as f:
            data = AssociatorData.from_json(json.load(f))
    except (ValueError, KeyError) as e:
        logging.warning('ignoring unreadable associator cache %s: %s'
                        % (path, e))
        return None
    logging.info('loaded degree %d associator from %s' % (n, path))
    return data


def _store_cached(data):
    path = cache_path(data.truncation, data.gauge_version)
    if path is None:
        return
    try:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, 'w') as f:
            json.dump(data.to_json(), f, indent=2)
    except OSError as e:
        logging.warning('could not write associator cache %s: %s' % (path, e))


def solve_associator(n):
    """Associator through degree n satisfying pentagon, hexagon, inversion
    symmetry and counit exactly."""
    check_degree(n)
    gauge_version = Config().get_gauge_version()
    cached = _load_cached(n, gauge_version)
    if cached is not None:
        return cached
    with Statistics().associator_time:
        coefficients = OrderedDict()
        for k in range(2, n + 1):
            coefficients.update(_solve_degree(coefficients, k))
        data = AssociatorData(n, coefficients, gauge_version)
        report = verify_horizontal(data)
        if not report.passed():
            raise InconsistentSystemError(
                'solved associator fails {}'.format(report.failures()))
    logging.info('solved associator through degree %d: %s' % (n, data))
    _store_cached(data)
    return data


class AxiomReport(object):
    """Per-axiom, per-degree residuals; a residual is a dict of normal words
    (or diagrams) to nonzero coefficients."""

    def __init__(self, truncation):
        self.truncation = truncation
        self.residuals = OrderedDict(
            (axiom, [dict() for _ in range(truncation + 1)])
            for axiom in AXIOMS)

    def record(self, axiom, element):
        for word, c in element.terms.items():
            slot = self.residuals[axiom][len(word)]
            slot[word] = slot.get(word, 0) + c
            if slot[word] == 0:
                del slot[word]

    def passed(self, axiom=None):
        axioms = AXIOMS if axiom is None else [axiom]
        return all(not part for a in axioms for part in self.residuals[a])

    def failures(self):
        return [(a, k) for a in AXIOMS
                for k, part in enumerate(self.residuals[a]) if part]

    def to_json(self):
        return OrderedDict(
            (a, OrderedDict([('passed', self.passed(a)),
                             ('failing_degrees',
                              [k for k, p in enumerate(self.residuals[a])
                               if p])]))
            for a in AXIOMS)


def verify_horizontal(data):
    """Axiom residuals computed directly in the horizontal algebra."""
    report = AxiomReport(data.truncation)
    report.record(PENTAGON, pentagon_residual(data.phi))
    report.record(HEXAGON, hexagon_residual(data.phi, data.r))
    report.record(INVERSION, inversion_residual(data.phi))
    for res in counit_residuals(data.phi):
        report.record(COUNIT, res)
    return report


def verify_associator_axioms(data, n=None):
    """Evaluate both sides of every axiom with the diagram operations on
    A(strands) and compare them through the horizontal normal form."""
    if n is not None:
        data = data.truncated(n)
    phi = data.phi_element()
    r = data.r_element()
    report = AxiomReport(data.truncation)

    def record(axiom, lhs, rhs):
        report.record(axiom, HorizontalElement.from_algebra(lhs - rhs))

    record(PENTAGON,
           multiply(duplicate(phi, StrandMap.from_blocks((1, 1, 2))),
                    duplicate(phi, StrandMap.from_blocks((2, 1, 1)))),
           multiply(multiply(embed(phi, 1, 4),
                             duplicate(phi, StrandMap.from_blocks((1, 2, 1)))),
                    embed(phi, 0, 4)))
    r13 = duplicate(r, StrandMap(StrandMapKind.DUPLICATE, 2, 3, [(0,), (2,)]))
    r23 = embed(r, 1, 3)
    rhs = permute_strands(phi, SUPERSCRIPTS['312'])
    for factor in (r13, inverse(permute_strands(phi, SUPERSCRIPTS['132'])),
                   r23, phi):
        rhs = multiply(rhs, factor)
    record(HEXAGON, duplicate(r, StrandMap.from_blocks((2, 1))), rhs)
    one3 = AlgebraElement.one(Skeleton.strands(3), data.truncation)
    record(INVERSION,
           multiply(permute_strands(phi, SUPERSCRIPTS['321']), phi), one3)
    one2 = AlgebraElement.one(Skeleton.strands(2), data.truncation)
    for i in range(3):
        record(COUNIT, delete_strand(phi, i), one2)
    return report


def r_from_anomaly(a, n=None):
    """R = exp((delta(a) - a_1 - a_2) / 4) on two strands."""
    if not a.skeleton.is_strands() or len(a.skeleton) != 1:
        raise PreconditionError('anomaly must live on one strand, not {}'
                                ''.format(a.skeleton))
    if a.constant_term() != 0:
        raise PreconditionError('anomaly has a degree-0 part')
    if n is not None:
        a = a.truncated(n)
    doubled = duplicate(a, StrandMap.duplication(1, 0))
    x = (doubled - embed(a, 0, 2) - embed(a, 1, 2)) / 4
    return exp_trunc(x)


def theta_anomaly(n):
    return AlgebraElement.from_diagram(theta(Skeleton.strands(1)), n)
