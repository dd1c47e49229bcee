"""Combinatorial Kontsevich invariant of parenthesized tangle words.

The sweep keeps an AlgebraElement on the skeleton of everything below the
current level: one interval per open arc and one circle per closed
component, in creation order.  Arc directions follow the link orientation,
so a chord end placed on a downward point is prepended to its arc with the
local orientation flipped.  Slices contribute

    crossing   exp(+-H/2) on the two points, then the points swap
    move       Phi or Phi^-1 on three consecutive blocks of points
    cap        nu on the left point, then the two arcs are joined
    cup        nothing; a new arc starts

and before every crossing, cap or ASSOC the parenthesization is moved so
that the affected points are siblings.
"""

import logging
from fractions import Fraction

from kontsevich_check.config import Config
from kontsevich_check.core.algebra import AlgebraElement, reduce
from kontsevich_check.core.diagram import (CIRCLE, INTERVAL, Diagram,
                                           Skeleton, theta)
from kontsevich_check.core.hopf import (StrandMap, _max_id, duplicate,
                                        embed, exp_trunc, inverse,
                                        multiply, shift_ids)
from kontsevich_check.core.tangle import (LEAF, Arc, Slice, SliceKind,
                                          TangleWord, insert_cup, left_comb,
                                          moves_between, pair_tree,
                                          remove_pair)
from kontsevich_check.errors import (MalformedTangleError,
                                     SkeletonMismatchError, TruncationError)
from kontsevich_check.util.statistics import Statistics


class _Slot(object):

    def __init__(self, ident):
        self.ident = ident
        self.closed = False


class TangleSweep(object):
    """Running value of a tangle word, level by level."""

    def __init__(self, bottom, data, n, nu=None):
        self.n = n
        self.data = data
        self.nu = nu
        self.slots = [_Slot(i) for i in range(len(bottom))]
        self.next_ident = len(bottom)
        self.points = [(i, o) for i, o in enumerate(bottom)]
        self.tree = left_comb([LEAF] * len(bottom))
        self.element = AlgebraElement.one(self.skeleton(), n)
        self._phi = None
        self._phi_inv = None
        self._r = None
        self._r_inv = None
        self._cache = {}

    def skeleton(self):
        return Skeleton.from_kinds([CIRCLE if s.closed else INTERVAL
                                    for s in self.slots])

    # Elements on the current row of points.

    def _crossing_element(self, sign, i, k):
        key = ('X', sign, i, k)
        if key not in self._cache:
            if self._r is None:
                self._r = self.data.r.truncated(self.n)
                self._r_inv = self._r.inverse()
            r = self._r if sign > 0 else self._r_inv
            self._cache[key] = embed(r.to_algebra(), i, k)
        return self._cache[key]

    def _move_element(self, move, k):
        key = ('M', move, k)
        if key not in self._cache:
            if self._phi is None:
                self._phi = self.data.phi.truncated(self.n).to_algebra()
                self._phi_inv = inverse(self._phi)
            phi = self._phi_inv if move.to_left else self._phi
            inflated = duplicate(phi, StrandMap.from_blocks(
                (move.a, move.b, move.c)))
            self._cache[key] = embed(inflated, move.offset, k)
        return self._cache[key]

    # Sweep steps.

    def stack(self, x):
        """Put x, an element on the current points, on top."""
        skeleton = self.skeleton()
        out = AlgebraElement(skeleton, self.n)
        for ds, cs in self.element.items():
            for dx, cx in x.items():
                if ds.degree() + dx.degree() > self.n:
                    continue
                out.add_diagram(self._glue(skeleton, ds, dx), cs * cx)
        self.element = out

    def _glue(self, skeleton, ds, dx):
        dx = shift_ids(dx, _max_id(ds) + 1)
        univalent = [list(seq) for seq in ds.univalent]
        for p, seq in enumerate(dx.univalent):
            slot, orientation = self.points[p]
            if orientation > 0:
                univalent[slot].extend(seq)
            else:
                univalent[slot][:0] = [(v, -s) for v, s in reversed(seq)]
        return Diagram(skeleton, univalent, ds.trivalent + dx.trivalent,
                       ds.edges + dx.edges)

    def _rebuild(self, remap_univalent):
        skeleton = self.skeleton()
        out = AlgebraElement(skeleton, self.n)
        for d, c in self.element.items():
            out.add_diagram(Diagram(skeleton, remap_univalent(d.univalent),
                                    d.trivalent, d.edges), c)
        self.element = out

    def regroup(self, target):
        k = len(self.points)
        for move in moves_between(self.tree, target):
            self.stack(self._move_element(move, k))
        self.tree = target

    def crossing(self, i, sign):
        k = len(self.points)
        self.regroup(pair_tree(k, i))
        self.stack(self._crossing_element(sign, i, k))
        self.points[i], self.points[i + 1] = self.points[i + 1], \
            self.points[i]

    def cup(self, i, sign):
        k = len(self.points)
        self.slots.append(_Slot(self.next_ident))
        self.next_ident += 1
        slot = len(self.slots) - 1
        self._rebuild(lambda univalent: list(univalent) + [()])
        self.points[i:i] = [(slot, -sign), (slot, sign)]
        self.tree = insert_cup(self.tree, k, i)

    def cap(self, i):
        k = len(self.points)
        self.regroup(pair_tree(k, i))
        if self.nu is not None:
            self.stack(embed(self.nu, i, k))
        (a, oa), (b, ob) = self.points[i], self.points[i + 1]
        if oa == ob:
            raise MalformedTangleError(
                'cap joins points of equal orientation')
        up, down = (a, b) if oa > 0 else (b, a)
        del self.points[i:i + 2]
        self.tree = remove_pair(self.tree, i)
        if up == down:
            self.slots[up].closed = True
            self._rebuild(list)
            return
        keep, drop = min(up, down), max(up, down)

        def merge(univalent):
            univalent = list(univalent)
            joined = tuple(univalent[up]) + tuple(univalent[down])
            univalent[keep] = joined
            del univalent[drop]
            return univalent

        del self.slots[drop]
        self._rebuild(merge)
        self.points = [(s - 1 if s > drop else (keep if s == drop else s), o)
                       for s, o in self.points]

    def finish(self):
        k = len(self.points)
        if k:
            self.regroup(left_comb([LEAF] * k))
        return self.element


def _check_truncation(data, n):
    if n is None:
        return data.truncation
    if n > data.truncation:
        raise TruncationError('associator solved to degree {}, asked for {}'
                              ''.format(data.truncation, n))
    return n


def evaluate_raw(word, data, n=None, nu=None):
    """Value of a word between left-comb parenthesizations, with no
    framing correction and without reduction."""
    n = _check_truncation(data, n)
    sweep = TangleSweep(word.bottom, data, n, nu)
    for s in word.slices:
        if s.kind == SliceKind.CROSSING:
            sweep.crossing(s.position, s.sign)
        elif s.kind == SliceKind.CUP:
            sweep.cup(s.position, s.sign)
        elif s.kind == SliceKind.CAP:
            sweep.cap(s.position)
        elif s.kind == SliceKind.ASSOC:
            sweep.regroup(s.trees[0])
            sweep.regroup(s.trees[1])
    return sweep.finish()


def _chains(lower_word, upper_word):
    """Components of upper_word on top of lower_word as lists of pieces
    (0, c) and (1, c), in link order, each with a closed flag; sorted so
    that they come out in creation order of the glued word."""
    lower_top, lower_arcs, _ = lower_word.sweep()
    lower_index, lower_roots = lower_word.component_index()
    upper_index, upper_roots = upper_word.component_index()
    glued = len(upper_word.bottom)
    offset = len(lower_arcs)

    succ = {}
    for p, (arc, o) in enumerate(lower_top):
        low, up = (0, lower_index[arc]), (1, upper_index[Arc(p)])
        if o > 0:
            succ[low] = up
        else:
            succ[up] = low

    def key(piece):
        side, c = piece
        if side == 0:
            return lower_roots[c].ident
        ident = upper_roots[c].ident
        return offset + ident - glued if ident >= glued else float('inf')

    pieces = [(0, c) for c in range(len(lower_roots))] + \
        [(1, c) for c in range(len(upper_roots))]
    has_pred = set(succ.values())
    seen = set()
    chains = []
    for start in pieces:
        if start in has_pred or start in seen:
            continue
        roots = lower_roots if start[0] == 0 else upper_roots
        chain = [start]
        seen.add(start)
        while chain[-1] in succ:
            chain.append(succ[chain[-1]])
            seen.add(chain[-1])
        chains.append((chain, roots[start[1]].closed))
    for start in pieces:
        if start in seen:
            continue
        chain = [start]
        seen.add(start)
        while succ[chain[-1]] != start:
            chain.append(succ[chain[-1]])
            seen.add(chain[-1])
        chains.append((chain, True))
    chains.sort(key=lambda entry: min(key(piece) for piece in entry[0]))
    return chains


def compose(lower_word, x, upper_word, y):
    """Value of `upper_word` stacked on `lower_word`, given x on the
    skeleton of the lower word and y on that of the upper one.  The top
    points of the lower word are glued to the bottom points of the upper
    word and the univalent sequences are concatenated along the link.  Both
    values must end and start at the left-comb parenthesization."""
    if upper_word.bottom != lower_word.top():
        raise SkeletonMismatchError('top {} of the lower word is not the '
                                    'bottom {} of the upper word'.format(
                                        lower_word.top(), upper_word.bottom))
    if x.truncation != y.truncation:
        raise TruncationError('truncation {} vs {}'.format(x.truncation,
                                                           y.truncation))
    chains = _chains(lower_word, upper_word)
    if len(x.skeleton) != len(lower_word.components()) or \
            len(y.skeleton) != len(upper_word.components()):
        raise SkeletonMismatchError('{} and {} do not fit the words'.format(
            x.skeleton, y.skeleton))
    n = x.truncation
    skeleton = Skeleton.from_kinds([CIRCLE if closed else INTERVAL
                                    for _, closed in chains])
    out = AlgebraElement(skeleton, n)
    for dx, cx in x.items():
        for dy, cy in y.items():
            if dx.degree() + dy.degree() > n:
                continue
            dy = shift_ids(dy, _max_id(dx) + 1)
            sides = (dx.univalent, dy.univalent)
            univalent = [sum((tuple(sides[side][c]) for side, c in chain), ())
                         for chain, _ in chains]
            out.add_diagram(Diagram(skeleton, univalent,
                                    dx.trivalent + dy.trivalent,
                                    dx.edges + dy.edges), cx * cy)
    return out


def zigzag_word():
    """One upward strand with a hump: a cup to its right capped against it."""
    return TangleWord([1], [Slice(SliceKind.CUP, 1, 1, None, 0),
                            Slice(SliceKind.CAP, 0, None, None, 0)])


def hump_normalizer(data, n=None):
    """nu, the inverse of the raw value of a strand with one hump; one copy
    is placed at every maximum."""
    n = _check_truncation(data, n)
    if data.nu is not None and data.nu.truncation >= n:
        return data.nu.truncated(n)
    raw = reduce(evaluate_raw(zigzag_word(), data, n))
    nu = inverse(raw)
    logging.debug('hump normalizer: %s' % nu)
    if data.nu is None or data.nu.truncation < n:
        data.nu = nu
    return nu


def framing_targets(word, framings=None):
    """Framing per link component: explicit > word FRAMING lines >
    blackboard (writhe)."""
    roots = word.components()
    targets = {}
    for c in range(len(roots)):
        if framings and c in framings:
            targets[c] = framings[c]
        elif c in word.framings:
            targets[c] = word.framings[c]
        else:
            targets[c] = word.writhe(c)
    return targets


def evaluate_tangle(word, data, n=None, framings=None):
    """Reduced value of a tangle word; circle components are brought to
    their target framing with exp((f - writhe) theta / 2)."""
    n = _check_truncation(data, n)
    if framings is None:
        framings = Config().get_framings()
    with Statistics().tangle_time:
        nu = hump_normalizer(data, n)
        value = evaluate_raw(word, data, n, nu)
        skeleton = value.skeleton
        targets = framing_targets(word, framings)
        for c, comp in enumerate(skeleton.components):
            if comp.kind != CIRCLE:
                continue
            delta = targets[c] - word.writhe(c)
            if delta:
                correction = AlgebraElement.from_diagram(
                    theta(skeleton, c), n, Fraction(delta, 2))
                value = multiply(value, exp_trunc(correction))
        result = reduce(value)
    logging.debug('evaluated %d slices at degree %d' % (len(word), n))
    return result
