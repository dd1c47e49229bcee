"""The graded algebra A(M) as an explicit quotient.

Every trivalent diagram is rewritten in chord diagrams by repeated STU on
its first leg; the chord diagrams are then taken modulo the relations
obtained by resolving a one-vertex diagram along two different legs (the
4T relations).  With `full_relations` set, the complete AS/IHX/STU system
over all enumerated diagrams is row-reduced instead.  Either way the basis
is the set of non-pivot chord diagrams under Diagram.sort_key.
"""

import logging
from collections import OrderedDict
from fractions import Fraction

from kontsevich_check.config import Config
from kontsevich_check.core.diagram import (Component, Diagram, Skeleton,
                                           canonicalize, check_degree,
                                           enumerate_diagrams)
from kontsevich_check.core.relations import (combine, generate_relations,
                                             stu_expansion)
from kontsevich_check.errors import (DegreeCapError, MissingBasisError,
                                     SkeletonMismatchError, TruncationError)
from kontsevich_check.util.linalg import RowReducer, add_scaled
from kontsevich_check.util.statistics import Statistics


class AlgebraElement(object):
    """Truncated sparse rational combination of canonical diagrams.

    `parts[k]` maps degree-k canonical diagrams to nonzero Fractions."""

    def __init__(self, skeleton, truncation, parts=None):
        self.skeleton = skeleton
        self.truncation = truncation
        self.parts = [dict() for _ in range(truncation + 1)]
        for k, part in enumerate(parts or []):
            if k > truncation:
                break
            for d, c in part.items():
                if c != 0:
                    self.parts[k][d] = Fraction(c)

    @classmethod
    def zero(cls, skeleton, truncation):
        return cls(skeleton, truncation)

    @classmethod
    def one(cls, skeleton, truncation):
        x = cls(skeleton, truncation)
        x.parts[0][Diagram.empty(skeleton)] = Fraction(1)
        return x

    @classmethod
    def from_diagram(cls, d, truncation, coeff=1):
        """Canonicalize a raw diagram and wrap it; zero-flagged classes and
        diagrams above the truncation give 0."""
        x = cls(d.skeleton, truncation)
        x.add_diagram(d, coeff)
        return x

    @classmethod
    def from_terms(cls, skeleton, truncation, terms):
        x = cls(skeleton, truncation)
        for d, coeff in terms:
            x.add_diagram(d, coeff)
        return x

    def add_diagram(self, d, coeff=1):
        if d.skeleton != self.skeleton:
            raise SkeletonMismatchError(
                '{} added to an element on {}'.format(d.skeleton,
                                                      self.skeleton))
        k = d.degree()
        if k > self.truncation or coeff == 0:
            return
        c = canonicalize(d, check=False)
        s = c.coefficient_sign()
        if s == 0:
            return
        self._add(k, c.diagram, Fraction(coeff) * s)

    def _add(self, k, key, value):
        part = self.parts[k]
        new = part.get(key, 0) + value
        if new == 0:
            part.pop(key, None)
        else:
            part[key] = new

    def items(self):
        for part in self.parts:
            for d, c in part.items():
                yield d, c

    def degree_part(self, k):
        x = AlgebraElement(self.skeleton, self.truncation)
        if k <= self.truncation:
            x.parts[k] = dict(self.parts[k])
        return x

    def constant_term(self):
        return self.parts[0].get(Diagram.empty(self.skeleton), Fraction(0))

    def is_zero(self):
        return not any(self.parts)

    def copy(self):
        return AlgebraElement(self.skeleton, self.truncation, self.parts)

    def truncated(self, n):
        if n > self.truncation:
            raise TruncationError(
                'cannot raise truncation from {} to {}'.format(
                    self.truncation, n))
        return AlgebraElement(self.skeleton, n, self.parts[:n + 1])

    def _check_compatible(self, other):
        if self.skeleton != other.skeleton:
            raise SkeletonMismatchError('{} vs {}'.format(self.skeleton,
                                                          other.skeleton))
        if self.truncation != other.truncation:
            raise TruncationError('truncation {} vs {}'.format(
                self.truncation, other.truncation))

    def __add__(self, other):
        self._check_compatible(other)
        x = self.copy()
        for k, part in enumerate(other.parts):
            for d, c in part.items():
                x._add(k, d, c)
        return x

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, factor):
        factor = Fraction(factor)
        return AlgebraElement(
            self.skeleton, self.truncation,
            [dict((d, c * factor) for d, c in part.items())
             for part in self.parts])

    def __mul__(self, factor):
        # Scalars only; the algebra product lives in hopf.multiply.
        return self.scaled(factor)

    __rmul__ = __mul__

    def __truediv__(self, factor):
        return self.scaled(Fraction(1) / Fraction(factor))

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement)
                and self.skeleton == other.skeleton
                and self.truncation == other.truncation
                and self.parts == other.parts)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        terms = []
        for k, part in enumerate(self.parts):
            for d in sorted(part, key=lambda d: d.sort_key()):
                terms.append('{}*{}'.format(part[d], _short_name(d)))
        return 'AlgebraElement({}, N={}: {})'.format(
            self.skeleton, self.truncation, ' + '.join(terms) or '0')

    def to_json(self):
        return OrderedDict([
            ('skeleton', self.skeleton.to_json()),
            ('truncation', self.truncation),
            ('terms', [OrderedDict([('coeff', str(c)),
                                    ('diagram', d.to_json())])
                       for k, part in enumerate(self.parts)
                       for d, c in sorted(part.items(),
                                          key=lambda dc: dc[0].sort_key())]),
        ])

    @classmethod
    def from_json(cls, data):
        terms = [(Diagram.from_json(t['diagram']), Fraction(t['coeff']))
                 for t in data['terms']]
        skeleton = Skeleton([Component(c['id'], c['kind'])
                             for c in data['skeleton']])
        return cls.from_terms(skeleton, data['truncation'], terms)


def _short_name(d):
    if d.degree() == 0:
        return '1'
    return 'D{}{}'.format(list(d.leg_counts()), list(d.edges))


class Basis(object):
    """Basis of the degree-n part of A(skeleton) with its reduction map."""

    def __init__(self, skeleton, degree, reducer, columns):
        self.skeleton = skeleton
        self.degree = degree
        self.reducer = reducer
        # Diagrams reduced by row operations; everything else goes through STU.
        self.columns = columns
        self.elements = sorted(
            (d for d in columns if d.is_chord_diagram()
             and not reducer.is_pivot(d)),
            key=lambda d: d.sort_key())
        self.index = dict((d, i) for i, d in enumerate(self.elements))
        self._memo = {}

    def dimension(self):
        return len(self.elements)

    def reduce_diagram(self, d):
        """Reduction of a canonical diagram as a dict basis diagram ->
        Fraction."""
        if d in self._memo:
            return self._memo[d]
        if canonicalize(d, check=False).zero:
            result = {}
        elif d in self.columns:
            result = self.reducer.reduce({d: 1})
        else:
            result = {}
            u = first_trivalent_leg(d)
            for key, coeff in combine(stu_expansion(d, u)).items():
                add_scaled(result, self.reduce_diagram(key), coeff)
        self._memo[d] = result
        return result

    def reduce_vector(self, vector):
        out = {}
        for d, c in vector.items():
            add_scaled(out, self.reduce_diagram(d), c)
        return out

    def coordinates(self, vector):
        reduced = self.reduce_vector(vector)
        coords = [Fraction(0)] * self.dimension()
        for d, c in reduced.items():
            coords[self.index[d]] = c
        return coords

    def __repr__(self):
        return 'Basis({}, degree {}, dimension {})'.format(
            self.skeleton, self.degree, self.dimension())


def first_trivalent_leg(d):
    """First univalent vertex (in component order) attached to a trivalent
    vertex, or None for chord diagrams."""
    owner = d.owners()
    partner = d.partners()
    for seq in d.univalent:
        for v, _ in seq:
            if owner[partner[v]][1]:
                return v
    return None


def _trivalent_legs(d):
    owner = d.owners()
    partner = d.partners()
    return [v for seq in d.univalent for v, _ in seq
            if owner[partner[v]][1]]


def _four_term_rows(d):
    # Resolving one trivalent vertex along each of its legs gives the same
    # element; pairwise differences are relations among chord diagrams.
    c = canonicalize(d, check=False)
    expansions = [combine(stu_expansion(d, u)) for u in _trivalent_legs(d)]
    rows = []
    if c.zero:
        rows.append(expansions[0])
    for other in expansions[1:]:
        rows.append(add_scaled(dict(expansions[0]), other, -1))
    return rows


def _compute_basis_four_term(skeleton, n):
    chords = [c.diagram for c in
              enumerate_diagrams(skeleton, n, max_trivalent=0)]
    reducer = RowReducer(lambda d: d.sort_key())
    count = 0
    if n > 0:
        for c in enumerate_diagrams(skeleton, n, max_trivalent=1):
            if c.diagram.is_chord_diagram():
                continue
            for row in _four_term_rows(c.diagram):
                count += 1
                reducer.add_row(row)
    Statistics().num_relations.inc(count)
    return Basis(skeleton, n, reducer, frozenset(chords))


def _compute_basis_full(skeleton, n):
    diagrams = [c.diagram for c in enumerate_diagrams(skeleton, n)]
    reducer = RowReducer(lambda d: d.sort_key())
    for rel in generate_relations(skeleton, n):
        reducer.add_row(rel)
    return Basis(skeleton, n, reducer, frozenset(diagrams))


_basis_cache = {}


def compute_basis(skeleton, n, full_relations=None):
    """Basis and reduction map of the degree-n part of A(skeleton)."""
    check_degree(n)
    if full_relations is None:
        full_relations = Config().get_full_relations()
    key = (skeleton, n, full_relations)
    if key in _basis_cache:
        return _basis_cache[key]
    with Statistics().basis_time:
        if full_relations:
            basis = _compute_basis_full(skeleton, n)
        else:
            basis = _compute_basis_four_term(skeleton, n)
    Statistics().avg_basis_dimension.record(basis.dimension())
    logging.debug('basis of degree %d on %s has dimension %d'
                  % (n, skeleton, basis.dimension()))
    _basis_cache[key] = basis
    return basis


def clear_basis_cache():
    _basis_cache.clear()


def _basis_or_missing(skeleton, k):
    try:
        return compute_basis(skeleton, k)
    except DegreeCapError as e:
        raise MissingBasisError('no basis for degree {} on {}: {}'.format(
            k, skeleton, e))


def reduce(x):
    """Rewrite x on basis diagrams only, degree by degree."""
    out = AlgebraElement(x.skeleton, x.truncation)
    for k, part in enumerate(x.parts):
        if not part:
            continue
        basis = _basis_or_missing(x.skeleton, k)
        for d, c in basis.reduce_vector(part).items():
            out._add(k, d, c)
    return out


def equal_mod_relations(x, y):
    return reduce(x - y).is_zero()


def coordinates(x, k):
    """Coordinates of the degree-k part of x in the degree-k basis."""
    return _basis_or_missing(x.skeleton, k).coordinates(x.parts[k])


def is_connected(d):
    return len(d.connected_components()) == 1


def meets_two_components(d):
    return sum(1 for seq in d.univalent if seq) >= 2


def primitive_dimension(skeleton, n):
    """Dimension of the degree-n part spanned by connected diagrams whose
    univalent vertices meet at least two components."""
    basis = compute_basis(skeleton, n)
    if n == 0:
        return 0
    reducer = RowReducer(lambda d: d.sort_key())
    rank = 0
    for c in enumerate_diagrams(skeleton, n, exclude_zero=True):
        d = c.diagram
        if not (is_connected(d) and meets_two_components(d)):
            continue
        if reducer.add_row(basis.reduce_diagram(d)) is not None:
            rank += 1
    return rank


def export_basis(basis):
    """JSON-ready description of a basis for golden files."""
    return OrderedDict([
        ('skeleton', repr(basis.skeleton)),
        ('degree', basis.degree),
        ('dimension', basis.dimension()),
        ('basis', [d.to_json() for d in basis.elements]),
    ])
