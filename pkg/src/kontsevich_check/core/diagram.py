"""Jacobi diagrams on one-dimensional skeletons.

A diagram has univalent vertices sitting on the components of a skeleton
(in linear order on intervals, cyclic order on circles, each with a local
orientation sign) and trivalent vertices carrying a cyclic order of their
three half-edges.  Edges are a perfect matching of half-edges.  A univalent
vertex v owns exactly one half-edge, whose id is v itself.

Canonical representatives use a fixed labeling: univalent vertices are
0..U-1 in component order with sign +1, trivalent vertex j is U+j and owns
half-edges U+3j, U+3j+1, U+3j+2 in its cyclic order.  Two canonical
representatives are equal as Python objects exactly when they are
isomorphic diagrams, so they can be used directly as dictionary keys.
"""

import itertools
import logging
from collections import namedtuple

from enum import Enum

from kontsevich_check.config import Config
from kontsevich_check.errors import (DegreeCapError, InvalidDiagramError,
                                     PreconditionError)
from kontsevich_check.util.statistics import Statistics

CIRCLE = 'circle'
INTERVAL = 'interval'

Component = namedtuple('Component', 'id kind')

Violation = Enum(
    'Violation',
    'OK BAD_COMPONENT_IDS BAD_SIGN DUPLICATE_VERTEX BAD_TRIVALENT '
    'HALF_EDGE_MATCHING SELF_EDGE ODD_VERTEX_COUNT COMPONENT_MISSES_U')

ValidationReport = namedtuple('ValidationReport', 'violation message')


class Skeleton(object):
    """An ordered list of circle / interval components with ids 0..k-1."""

    def __init__(self, components):
        self.components = tuple(
            c if isinstance(c, Component) else Component(*c)
            for c in components)
        self._hash = hash(self.components)

    @classmethod
    def circle(cls):
        return cls([Component(0, CIRCLE)])

    @classmethod
    def circles(cls, k):
        return cls([Component(i, CIRCLE) for i in range(k)])

    @classmethod
    def strands(cls, k):
        return cls([Component(i, INTERVAL) for i in range(k)])

    @classmethod
    def from_kinds(cls, kinds):
        return cls([Component(i, kind) for i, kind in enumerate(kinds)])

    @classmethod
    def parse(cls, text):
        """Parse 'circle', 'interval', 'circles:k' or 'strands:k'."""
        name, _, count = text.partition(':')
        if count and not count.isdigit():
            raise PreconditionError("bad component count in '{}'".format(text))
        k = int(count) if count else 1
        if name in ('circle', 'circles'):
            return cls.circles(k)
        if name in ('interval', 'strand', 'strands'):
            return cls.strands(k)
        raise PreconditionError("unknown skeleton '{}'".format(text))

    def __len__(self):
        return len(self.components)

    def kinds(self):
        return tuple(c.kind for c in self.components)

    def is_strands(self):
        return all(c.kind == INTERVAL for c in self.components)

    def is_closed(self):
        return all(c.kind == CIRCLE for c in self.components)

    def __eq__(self, other):
        return (isinstance(other, Skeleton)
                and self.components == other.components)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.is_strands():
            return 'strands:{}'.format(len(self))
        if self.is_closed():
            return 'circle' if len(self) == 1 else 'circles:{}'.format(
                len(self))
        return 'Skeleton({})'.format(','.join(self.kinds()))

    def to_json(self):
        return [{'id': c.id, 'kind': c.kind} for c in self.components]


class Diagram(object):
    """Immutable Jacobi diagram.

    univalent: per component, a tuple of (vertex id, sign) in component order
    trivalent: tuple of (vertex id, (h0, h1, h2)) with the cyclic order
    edges: tuple of half-edge pairs
    """
    __slots__ = ('skeleton', 'univalent', 'trivalent', 'edges', '_hash')

    def __init__(self, skeleton, univalent, trivalent=(), edges=()):
        self.skeleton = skeleton
        self.univalent = tuple(
            tuple((v, s) for v, s in seq) for seq in univalent)
        self.trivalent = tuple((v, tuple(hs)) for v, hs in trivalent)
        self.edges = tuple(tuple(e) for e in edges)
        self._hash = None

    @classmethod
    def empty(cls, skeleton):
        return cls(skeleton, [()] * len(skeleton))

    @classmethod
    def from_chords(cls, skeleton, words, signs=None):
        """Build a chord diagram from per-component sequences of chord labels.

        Every label must occur exactly twice in total; `signs`, if given,
        mirrors `words` with the local orientation of each endpoint."""
        univalent = []
        ends = {}
        v = 0
        for ci, word in enumerate(words):
            seq = []
            for pi, label in enumerate(word):
                sign = 1 if signs is None else signs[ci][pi]
                seq.append((v, sign))
                ends.setdefault(label, []).append(v)
                v += 1
            univalent.append(seq)
        edges = []
        for label, vs in ends.items():
            if len(vs) != 2:
                raise InvalidDiagramError(
                    "chord label {!r} has {} endpoints".format(label, len(vs)))
            edges.append((vs[0], vs[1]))
        return cls(skeleton, univalent, (), edges)

    def num_univalent(self):
        return sum(len(seq) for seq in self.univalent)

    def num_trivalent(self):
        return len(self.trivalent)

    def degree(self):
        return (self.num_univalent() + self.num_trivalent()) // 2

    def is_chord_diagram(self):
        return not self.trivalent

    def leg_counts(self):
        return tuple(len(seq) for seq in self.univalent)

    def _key(self):
        return (self.skeleton, self.univalent, self.trivalent, self.edges)

    def __eq__(self, other):
        return isinstance(other, Diagram) and self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return 'Diagram({}, U={}, T={}, E={})'.format(
            self.skeleton, list(self.univalent), list(self.trivalent),
            list(self.edges))

    def sort_key(self):
        """Graded order: by degree, then diagrams with more trivalent
        vertices first, then lexicographically on the canonical data."""
        return (self.degree(), -self.num_trivalent(), self.leg_counts(),
                self.edges)

    # Structure helpers used by canonicalization and relation generation.

    def owners(self):
        """Map half-edge -> (vertex, is_trivalent)."""
        owner = {}
        for seq in self.univalent:
            for v, _ in seq:
                owner[v] = (v, False)
        for v, hs in self.trivalent:
            for h in hs:
                owner[h] = (v, True)
        return owner

    def partners(self):
        partner = {}
        for h, k in self.edges:
            partner[h] = k
            partner[k] = h
        return partner

    def univalent_positions(self):
        """Map univalent vertex -> (component index, position, sign)."""
        pos = {}
        for ci, seq in enumerate(self.univalent):
            for pi, (v, s) in enumerate(seq):
                pos[v] = (ci, pi, s)
        return pos

    def connected_components(self):
        """Return the vertex sets of the connected components of the graph
        (skeleton ignored), each as a frozenset of vertex ids."""
        owner = self.owners()
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for v, _ in owner.values():
            parent.setdefault(v, v)
        for h, k in self.edges:
            a, b = find(owner[h][0]), find(owner[k][0])
            if a != b:
                parent[a] = b
        groups = {}
        for v in parent:
            groups.setdefault(find(v), set()).add(v)
        return [frozenset(g) for g in groups.values()]

    def to_json(self):
        return {
            'skeleton': self.skeleton.to_json(),
            'univalent': [[{'v': v, 'sign': s} for v, s in seq]
                          for seq in self.univalent],
            'trivalent': [{'v': v, 'cyclic': list(hs)}
                          for v, hs in self.trivalent],
            'edges': [list(e) for e in self.edges],
        }

    @classmethod
    def from_json(cls, data):
        skeleton = Skeleton([Component(c['id'], c['kind'])
                             for c in data['skeleton']])
        univalent = [[(u['v'], u.get('sign', 1)) for u in seq]
                     for seq in data['univalent']]
        trivalent = [(t['v'], t['cyclic']) for t in data.get('trivalent', [])]
        edges = [tuple(e) for e in data.get('edges', [])]
        return cls(skeleton, univalent, trivalent, edges)


class CanonicalDiagram(object):
    """Result of canonicalize: the canonical representative, the number of
    automorphisms (orientations ignored) and the orientation sign of the
    input relative to the representative.  `zero` is set when some
    automorphism reverses the orientation; such a class vanishes."""

    def __init__(self, diagram, aut_count, sign, zero):
        self.diagram = diagram
        self.aut_count = aut_count
        self.sign = sign
        self.zero = zero

    def coefficient_sign(self):
        return 0 if self.zero else self.sign

    def __repr__(self):
        return 'CanonicalDiagram({!r}, aut={}, sign={}, zero={})'.format(
            self.diagram, self.aut_count, self.sign, self.zero)


def validate(d):
    """Check every Diagram invariant; return a ValidationReport whose
    violation is Violation.OK when the diagram is well formed."""
    ids = [c.id for c in d.skeleton.components]
    if ids != list(range(len(ids))):
        return ValidationReport(Violation.BAD_COMPONENT_IDS,
                                'component ids {} are not 0..k-1'.format(ids))
    if len(d.univalent) != len(ids):
        return ValidationReport(
            Violation.BAD_COMPONENT_IDS,
            '{} univalent sequences for {} components'.format(
                len(d.univalent), len(ids)))
    seen = set()
    for seq in d.univalent:
        for v, s in seq:
            if s not in (1, -1):
                return ValidationReport(
                    Violation.BAD_SIGN,
                    'univalent vertex {} has sign {}'.format(v, s))
            if v in seen:
                return ValidationReport(
                    Violation.DUPLICATE_VERTEX,
                    'vertex {} appears twice'.format(v))
            seen.add(v)
    half_edges = set(seen)
    for v, hs in d.trivalent:
        if v in seen:
            return ValidationReport(Violation.DUPLICATE_VERTEX,
                                    'vertex {} appears twice'.format(v))
        seen.add(v)
        if len(hs) != 3 or len(set(hs)) != 3:
            return ValidationReport(
                Violation.BAD_TRIVALENT,
                'trivalent vertex {} needs 3 distinct half-edges'.format(v))
        for h in hs:
            if h in half_edges:
                return ValidationReport(
                    Violation.BAD_TRIVALENT,
                    'half-edge {} is owned twice'.format(h))
            half_edges.add(h)
    matched = set()
    for e in d.edges:
        if len(e) != 2:
            return ValidationReport(Violation.HALF_EDGE_MATCHING,
                                    'edge {} is not a pair'.format(e))
        h, k = e
        if h == k:
            return ValidationReport(Violation.SELF_EDGE,
                                    'edge {} joins a half-edge to itself'
                                    ''.format(e))
        for x in e:
            if x not in half_edges:
                return ValidationReport(
                    Violation.HALF_EDGE_MATCHING,
                    'edge {} uses unknown half-edge {}'.format(e, x))
            if x in matched:
                return ValidationReport(
                    Violation.HALF_EDGE_MATCHING,
                    'half-edge {} is used by two edges'.format(x))
            matched.add(x)
    if matched != half_edges:
        return ValidationReport(
            Violation.HALF_EDGE_MATCHING,
            'unmatched half-edges {}'.format(sorted(half_edges - matched)))
    if (d.num_univalent() + d.num_trivalent()) % 2:
        return ValidationReport(Violation.ODD_VERTEX_COUNT,
                                'odd number of vertices')
    univalent_ids = set(v for seq in d.univalent for v, _ in seq)
    for comp in d.connected_components():
        if not comp & univalent_ids:
            return ValidationReport(
                Violation.COMPONENT_MISSES_U,
                'component {} misses U'.format(sorted(comp)))
    return ValidationReport(Violation.OK, 'ok')


def assert_valid(d):
    report = validate(d)
    if report.violation != Violation.OK:
        raise InvalidDiagramError(report.message)


class _Structure(object):
    # Precomputed lookups shared by every labeling of one diagram.

    def __init__(self, d):
        self.partner = d.partners()
        self.trivalent_of = {}
        self.successors = {}
        for v, hs in d.trivalent:
            for i, h in enumerate(hs):
                self.trivalent_of[h] = v
                self.successors[h] = (hs[(i + 1) % 3], hs[(i + 2) % 3])


def _extend(struct, labels, queue, pos, nu, nt, sign):
    while pos < len(queue):
        h = queue[pos]
        pos += 1
        p = struct.partner[h]
        if p in labels:
            continue
        a, b = struct.successors[p]
        base = nu + 3 * nt
        for swap in (False, True):
            first, second = (b, a) if swap else (a, b)
            lab = dict(labels)
            lab[p] = base
            lab[first] = base + 1
            lab[second] = base + 2
            for result in _extend(struct, lab, queue + [p, first, second],
                                  pos, nu, nt + 1, -sign if swap else sign):
                yield result
        return
    yield labels, sign


def _labelings(d):
    struct = _Structure(d)
    ranges = []
    for comp, seq in zip(d.skeleton.components, d.univalent):
        if comp.kind == CIRCLE and seq:
            ranges.append(range(len(seq)))
        else:
            ranges.append([0])
    nu = d.num_univalent()
    for rotation in itertools.product(*ranges):
        labels = {}
        queue = []
        sign = 1
        for seq, r in zip(d.univalent, rotation):
            for v, s in seq[r:] + seq[:r]:
                labels[v] = len(queue)
                queue.append(v)
                sign *= s
        for result in _extend(struct, labels, queue, 0, nu, 0, sign):
            yield result


def _encode(d, labels):
    return tuple(sorted(
        (labels[h], labels[k]) if labels[h] < labels[k]
        else (labels[k], labels[h]) for h, k in d.edges))


def _representative(d, encoding):
    nu = d.num_univalent()
    univalent = []
    v = 0
    for seq in d.univalent:
        univalent.append(tuple((v + i, 1) for i in range(len(seq))))
        v += len(seq)
    trivalent = tuple((nu + j, (nu + 3 * j, nu + 3 * j + 1, nu + 3 * j + 2))
                      for j in range(d.num_trivalent()))
    return Diagram(d.skeleton, univalent, trivalent, encoding)


def canonicalize(d, check=True):
    """Canonical form, automorphism count and orientation sign of `d`."""
    if check:
        assert_valid(d)
    Statistics().num_canonicalizations.inc()
    best = None
    best_signs = set()
    count = 0
    for labels, sign in _labelings(d):
        enc = _encode(d, labels)
        if best is None or enc < best:
            best = enc
            best_signs = set([sign])
            best_sign = sign
            count = 1
        elif enc == best:
            best_signs.add(sign)
            count += 1
    zero = len(best_signs) > 1
    return CanonicalDiagram(_representative(d, best), count, best_sign, zero)


def theta(skeleton, component=0):
    """The single chord with both ends on one component."""
    words = [[] for _ in skeleton.components]
    words[component] = ['t', 't']
    return Diagram.from_chords(skeleton, words)


def chord(skeleton, i, j):
    """A chord joining components i and j (i < j), both ends oriented
    along their components."""
    words = [[] for _ in skeleton.components]
    words[i].append('c')
    words[j].append('c')
    return Diagram.from_chords(skeleton, words)


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _simple_graphs(degrees):
    """All labeled simple graphs (no loops, no parallel edges) with the given
    degree sequence, as lists of vertex pairs."""
    n = len(degrees)
    remaining = list(degrees)
    adjacent = [set() for _ in range(n)]
    edges = []

    def rec(x):
        while x < n and remaining[x] == 0:
            x += 1
        if x == n:
            yield list(edges)
            return
        r = remaining[x]
        candidates = [y for y in range(x + 1, n)
                      if remaining[y] > 0 and y not in adjacent[x]]
        for chosen in itertools.combinations(candidates, r):
            remaining[x] = 0
            for y in chosen:
                remaining[y] -= 1
                adjacent[x].add(y)
                adjacent[y].add(x)
                edges.append((x, y))
            for g in rec(x + 1):
                yield g
            for y in chosen:
                remaining[y] += 1
                adjacent[x].discard(y)
                adjacent[y].discard(x)
                edges.pop()
            remaining[x] = r

    for g in rec(0):
        yield g


def _graph_to_diagram(skeleton, counts, nt, graph):
    # Univalent vertices 0..U-1, trivalent U..U+T-1; half-edges of trivalent
    # vertex w are allocated in the order its edges appear.
    nu = sum(counts)
    univalent = []
    v = 0
    for c in counts:
        univalent.append([(v + i, 1) for i in range(c)])
        v += c
    next_slot = dict((nu + j, 0) for j in range(nt))
    half_base = nu + nt

    def half_edge(x):
        if x < nu:
            return x
        h = half_base + 3 * (x - nu) + next_slot[x]
        next_slot[x] += 1
        return h

    edges = [(half_edge(x), half_edge(y)) for x, y in graph]
    trivalent = [(nu + j, (half_base + 3 * j, half_base + 3 * j + 1,
                           half_base + 3 * j + 2)) for j in range(nt)]
    return Diagram(skeleton, univalent, trivalent, edges)


def check_degree(n):
    cap = Config().get_degree_cap()
    if n < 0 or n > cap:
        raise DegreeCapError(n, cap)


def enumerate_diagrams(skeleton, n, exclude_zero=False, max_trivalent=None):
    """One CanonicalDiagram per isomorphism class of degree-n diagrams on
    `skeleton`, sorted by Diagram.sort_key.  Only diagrams whose graph is
    simple (no loops, no parallel edges) are generated."""
    check_degree(n)
    if n == 0:
        return [canonicalize(Diagram.empty(skeleton))]
    found = {}
    top = 2 * n - 1 if max_trivalent is None else min(max_trivalent,
                                                      2 * n - 1)
    for nt in range(top + 1):
        nu = 2 * n - nt
        for counts in _compositions(nu, len(skeleton)):
            degrees = [1] * nu + [3] * nt
            for graph in _simple_graphs(degrees):
                d = _graph_to_diagram(skeleton, counts, nt, graph)
                if validate(d).violation != Violation.OK:
                    continue
                c = canonicalize(d, check=False)
                if c.diagram not in found:
                    found[c.diagram] = canonicalize(c.diagram, check=False)
    result = [c for c in found.values() if not (exclude_zero and c.zero)]
    result.sort(key=lambda c: c.diagram.sort_key())
    logging.debug('enumerated %d diagrams of degree %d on %s'
                  % (len(result), n, skeleton))
    return result
