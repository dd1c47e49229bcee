"""Product, coproduct and strand operations on A(M).

Strand skeletons are read bottom to top: the univalent order on an interval
follows its upward direction, and multiply(x, y) puts x above y.
"""

import itertools
from fractions import Fraction
from math import factorial

from enum import Enum

from kontsevich_check.core.algebra import AlgebraElement, compute_basis, reduce
from kontsevich_check.core.diagram import Diagram, Skeleton, canonicalize
from kontsevich_check.errors import (PreconditionError, SkeletonMismatchError,
                                     TruncationError)

StrandMapKind = Enum('StrandMapKind', 'DUPLICATE DELETE PERMUTE')


class StrandMap(object):
    """How strands of a source skeleton map to a target skeleton.

    For DUPLICATE and PERMUTE, `lifts[i]` lists the target strands that
    source strand i is spread over (a single strand for a permutation).  For
    DELETE, `deleted` names the removed strand."""

    def __init__(self, kind, source, target, lifts=None, deleted=None):
        self.kind = kind
        self.source = source
        self.target = target
        self.lifts = tuple(tuple(l) for l in lifts) if lifts else None
        self.deleted = deleted
        self.check()

    def check(self):
        if self.kind == StrandMapKind.DELETE:
            if not 0 <= self.deleted < self.source:
                raise PreconditionError('cannot delete strand {} of {}'.format(
                    self.deleted, self.source))
            if self.target != self.source - 1:
                raise PreconditionError('deletion must drop one strand')
            return
        if len(self.lifts) != self.source:
            raise PreconditionError('{} lifts for {} strands'.format(
                len(self.lifts), self.source))
        used = [t for lift in self.lifts for t in lift]
        if len(used) != len(set(used)) or \
                any(not 0 <= t < self.target for t in used):
            raise PreconditionError('lifts {} overlap or leave {} strands'
                                    ''.format(self.lifts, self.target))
        if self.kind == StrandMapKind.PERMUTE and (
                self.source != self.target or
                any(len(lift) != 1 for lift in self.lifts)):
            raise PreconditionError('{} is not a permutation'.format(
                self.lifts))

    @classmethod
    def from_blocks(cls, sizes):
        """Duplication sending strand i onto the next sizes[i] strands, e.g.
        (1, 1, 2) is Id x Id x delta."""
        lifts = []
        start = 0
        for size in sizes:
            lifts.append(tuple(range(start, start + size)))
            start += size
        return cls(StrandMapKind.DUPLICATE, len(sizes), start, lifts)

    @classmethod
    def duplication(cls, source, strand, copies=2):
        sizes = [1] * source
        sizes[strand] = copies
        return cls.from_blocks(sizes)

    @classmethod
    def embedding(cls, source, offset, target):
        lifts = [(offset + i,) for i in range(source)]
        return cls(StrandMapKind.DUPLICATE, source, target, lifts)

    @classmethod
    def deletion(cls, source, strand):
        return cls(StrandMapKind.DELETE, source, source - 1, deleted=strand)

    @classmethod
    def permutation(cls, sigma):
        """sigma[i] is the new position of strand i."""
        if sorted(sigma) != list(range(len(sigma))):
            raise PreconditionError('{} is not a permutation'.format(sigma))
        return cls(StrandMapKind.PERMUTE, len(sigma), len(sigma),
                   [(s,) for s in sigma])

    def __repr__(self):
        if self.kind == StrandMapKind.DELETE:
            return 'StrandMap(delete {} of {})'.format(self.deleted,
                                                      self.source)
        return 'StrandMap({}, {} -> {}, {})'.format(
            self.kind.name, self.source, self.target, self.lifts)


def _same_truncation(x, y):
    if x.truncation != y.truncation:
        raise TruncationError('truncation {} vs {}'.format(x.truncation,
                                                           y.truncation))


def _max_id(d):
    ids = [-1]
    for seq in d.univalent:
        ids.extend(v for v, _ in seq)
    for v, hs in d.trivalent:
        ids.append(v)
        ids.extend(hs)
    return max(ids)


def shift_ids(d, offset):
    """Add `offset` to every vertex and half-edge id of d."""
    return Diagram(
        d.skeleton,
        [[(v + offset, s) for v, s in seq] for seq in d.univalent],
        [(v + offset, [h + offset for h in hs]) for v, hs in d.trivalent],
        [(h + offset, k + offset) for h, k in d.edges])


def stack(top, bottom):
    """Raw diagram with `top` placed above `bottom` on the same skeleton."""
    if top.skeleton != bottom.skeleton:
        raise SkeletonMismatchError('cannot stack {} on {}'.format(
            top.skeleton, bottom.skeleton))
    top = shift_ids(top, _max_id(bottom) + 1)
    univalent = [b + t for b, t in zip(bottom.univalent, top.univalent)]
    return Diagram(bottom.skeleton, univalent,
                   bottom.trivalent + top.trivalent, bottom.edges + top.edges)


def multiply(x, y):
    """x stacked above y; bilinear and graded."""
    if x.skeleton != y.skeleton:
        raise SkeletonMismatchError('{} vs {}'.format(x.skeleton, y.skeleton))
    _same_truncation(x, y)
    n = x.truncation
    out = AlgebraElement(x.skeleton, n)
    for i, xpart in enumerate(x.parts):
        for j, ypart in enumerate(y.parts):
            if i + j > n or not xpart or not ypart:
                continue
            for dx, cx in xpart.items():
                for dy, cy in ypart.items():
                    out.add_diagram(stack(dx, dy), cx * cy)
    return out


def power(x, k):
    out = AlgebraElement.one(x.skeleton, x.truncation)
    for _ in range(k):
        out = multiply(out, x)
    return out


def _truncate_to(x, n):
    if n is None or n == x.truncation:
        return x
    if n > x.truncation:
        raise TruncationError('element truncated at {} asked for degree {}'
                              ''.format(x.truncation, n))
    return x.truncated(n)


def exp_trunc(x, n=None):
    """exp(x) truncated at degree n; x has no degree-0 part."""
    x = _truncate_to(x, n)
    if x.constant_term() != 0:
        raise PreconditionError('exp of an element with constant term {}'
                                ''.format(x.constant_term()))
    out = AlgebraElement.one(x.skeleton, x.truncation)
    term = AlgebraElement.one(x.skeleton, x.truncation)
    for k in range(1, x.truncation + 1):
        term = multiply(term, x)
        out = out + term.scaled(Fraction(1, factorial(k)))
    return out


def log_trunc(y, n=None):
    """Inverse of exp_trunc; y has constant term 1."""
    y = _truncate_to(y, n)
    if y.constant_term() != 1:
        raise PreconditionError('log of an element with constant term {}'
                                ''.format(y.constant_term()))
    z = y - AlgebraElement.one(y.skeleton, y.truncation)
    out = AlgebraElement.zero(y.skeleton, y.truncation)
    term = AlgebraElement.one(y.skeleton, y.truncation)
    for k in range(1, y.truncation + 1):
        term = multiply(term, z)
        out = out + term.scaled(Fraction((-1) ** (k + 1), k))
    return out


def inverse(y):
    """Multiplicative inverse of an element with constant term 1."""
    if y.constant_term() != 1:
        raise PreconditionError('inverse of an element with constant term {}'
                                ''.format(y.constant_term()))
    z = AlgebraElement.one(y.skeleton, y.truncation) - y
    out = AlgebraElement.one(y.skeleton, y.truncation)
    term = AlgebraElement.one(y.skeleton, y.truncation)
    for _ in range(y.truncation):
        term = multiply(term, z)
        out = out + term
    return out


def bracket(x, y):
    return reduce(multiply(x, y) - multiply(y, x))


class TensorElement(object):
    """Sparse element of A(M) (x) A(M): (left, right) canonical pairs ->
    Fraction, truncated at total degree N."""

    def __init__(self, skeleton, truncation, terms=None):
        self.skeleton = skeleton
        self.truncation = truncation
        self.terms = dict((k, Fraction(v)) for k, v in (terms or {}).items()
                          if v != 0)

    def add(self, left, right, coeff):
        if left.degree() + right.degree() > self.truncation:
            return
        key = (left, right)
        new = self.terms.get(key, 0) + coeff
        if new == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    def __add__(self, other):
        out = TensorElement(self.skeleton, self.truncation, self.terms)
        for (l, r), c in other.terms.items():
            out.add(l, r, c)
        return out

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, factor):
        return TensorElement(self.skeleton, self.truncation,
                             dict((k, v * factor)
                                  for k, v in self.terms.items()))

    def flip(self):
        return TensorElement(self.skeleton, self.truncation,
                             dict(((r, l), c)
                                  for (l, r), c in self.terms.items()))

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, TensorElement)
                and self.skeleton == other.skeleton
                and self.terms == other.terms)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'TensorElement({}, N={}, {} terms)'.format(
            self.skeleton, self.truncation, len(self.terms))


def restrict(d, vertices):
    """Sub-diagram on a union of connected components."""
    owner = d.owners()
    univalent = [[(v, s) for v, s in seq if v in vertices]
                 for seq in d.univalent]
    trivalent = [(v, hs) for v, hs in d.trivalent if v in vertices]
    edges = [e for e in d.edges if owner[e[0]][0] in vertices]
    return Diagram(d.skeleton, univalent, trivalent, edges)


def coproduct(x):
    """Sum over splittings of each diagram's connected components into a
    left and a right factor."""
    out = TensorElement(x.skeleton, x.truncation)
    for d, c in x.items():
        comps = d.connected_components()
        for choice in itertools.product((0, 1), repeat=len(comps)):
            left = frozenset().union(*[comp for comp, side
                                       in zip(comps, choice) if side == 0])
            right = frozenset().union(*[comp for comp, side
                                        in zip(comps, choice) if side == 1])
            cl = canonicalize(restrict(d, left), check=False)
            cr = canonicalize(restrict(d, right), check=False)
            sign = cl.coefficient_sign() * cr.coefficient_sign()
            if sign:
                out.add(cl.diagram, cr.diagram, c * sign)
    return out


def tensor(x, y):
    if x.skeleton != y.skeleton:
        raise SkeletonMismatchError('{} vs {}'.format(x.skeleton, y.skeleton))
    out = TensorElement(x.skeleton, x.truncation)
    for dx, cx in x.items():
        for dy, cy in y.items():
            out.add(dx, dy, cx * cy)
    return out


def tensor_multiply(s, t):
    """(a (x) b)(c (x) d) = ac (x) bd"""
    out = TensorElement(s.skeleton, s.truncation)
    for (a, b), c1 in s.terms.items():
        for (c, d), c2 in t.terms.items():
            if a.degree() + b.degree() + c.degree() + d.degree() > \
                    s.truncation:
                continue
            left = AlgebraElement.from_diagram(stack(a, c), s.truncation)
            right = AlgebraElement.from_diagram(stack(b, d), s.truncation)
            for dl, cl in left.items():
                for dr, cr in right.items():
                    out.add(dl, dr, c1 * c2 * cl * cr)
    return out


def reduce_tensor(t):
    """Reduce both factors of every term to basis coordinates."""
    out = TensorElement(t.skeleton, t.truncation)
    for (l, r), c in t.terms.items():
        rl = compute_basis(t.skeleton, l.degree()).reduce_diagram(l)
        rr = compute_basis(t.skeleton, r.degree()).reduce_diagram(r)
        for bl, cl in rl.items():
            for br, cr in rr.items():
                out.add(bl, br, c * cl * cr)
    return out


def is_grouplike(x, n=None):
    """True iff coproduct(x) = x (x) x modulo relations through degree n."""
    x = _truncate_to(x, n)
    if x.constant_term() != 1:
        raise PreconditionError('grouplike test needs constant term 1, got {}'
                                ''.format(x.constant_term()))
    return reduce_tensor(coproduct(x) - tensor(x, x)).is_zero()


def _check_strands(x):
    if not x.skeleton.is_strands():
        raise SkeletonMismatchError(
            'strand operation on non-strand skeleton {}'.format(x.skeleton))


def _lift_diagram(d, smap, target):
    # All ways of sending each univalent vertex to one of its strand's lifts,
    # keeping the order along each target strand.
    choices = []
    for i, seq in enumerate(d.univalent):
        for v, s in seq:
            choices.append([(v, s, t) for t in smap.lifts[i]])
    for assignment in itertools.product(*choices):
        univalent = [[] for _ in range(smap.target)]
        for v, s, t in assignment:
            univalent[t].append((v, s))
        yield Diagram(target, univalent, d.trivalent, d.edges)


def duplicate(x, smap):
    """Sum of all lifts of each diagram along a duplication map."""
    _check_strands(x)
    if len(x.skeleton) != smap.source:
        raise SkeletonMismatchError('{} applied to {}'.format(smap,
                                                              x.skeleton))
    target = Skeleton.strands(smap.target)
    out = AlgebraElement(target, x.truncation)
    for d, c in x.items():
        for lifted in _lift_diagram(d, smap, target):
            out.add_diagram(lifted, c)
    return out


def embed(x, offset, k):
    """Place x on strands offset.. of a k-strand skeleton."""
    return duplicate(x, StrandMap.embedding(len(x.skeleton), offset, k))


def delete_strand(x, i):
    _check_strands(x)
    smap = StrandMap.deletion(len(x.skeleton), i)
    target = Skeleton.strands(smap.target)
    out = AlgebraElement(target, x.truncation)
    for d, c in x.items():
        if d.univalent[i]:
            continue
        univalent = d.univalent[:i] + d.univalent[i + 1:]
        out.add_diagram(Diagram(target, univalent, d.trivalent, d.edges), c)
    return out


def permute_strands(x, sigma):
    """Move strand i to position sigma[i]."""
    _check_strands(x)
    smap = StrandMap.permutation(sigma)
    if smap.source != len(x.skeleton):
        raise PreconditionError('{} does not act on {}'.format(sigma,
                                                              x.skeleton))
    return duplicate(x, StrandMap(StrandMapKind.DUPLICATE, smap.source,
                                  smap.target, smap.lifts))


def apply_strand_map(x, smap):
    if smap.kind == StrandMapKind.DELETE:
        return delete_strand(x, smap.deleted)
    if smap.kind == StrandMapKind.PERMUTE:
        return permute_strands(x, [lift[0] for lift in smap.lifts])
    return duplicate(x, smap)


def chord_element(k, i, j, truncation, coeff=1):
    """The chord t_ij between strands i and j of a k-strand skeleton
    (i == j gives an isolated chord on one strand)."""
    skeleton = Skeleton.strands(k)
    words = [[] for _ in range(k)]
    words[i].append('c')
    words[j].append('c')
    return AlgebraElement.from_diagram(
        Diagram.from_chords(skeleton, words), truncation, coeff)


def reduced_equal(x, y):
    return reduce(x - y).is_zero()

