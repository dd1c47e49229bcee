"""Sliced tangle words and their parenthesizations.

A word is read bottom to top.  Every level carries a row of points with an
orientation each (+1 up, -1 down).  Text format, one slice per line:

    BOTTOM + + -        orientations of the bottom points (default: none)
    X+ 2                crossing of points 2 and 3, over-strand from
                        bottom-left to top-right; X- is the other one
    CUP 3 +             new arc at points 3, 4; '+' orients the left point
                        down and the right point up, '-' the opposite
    CAP 1               close points 1 and 2 (opposite orientations)
    ASSOC ((1 2) 3)->(1 (2 3))
    ID                  identity slice
    FRAMING 1 -2        framing of link component 1

Positions and components are 1-based in the file and 0-based in memory.
"""

import re
from collections import namedtuple
from fractions import Fraction

from enum import Enum

from kontsevich_check.errors import MalformedTangleError, TangleParseError

SliceKind = Enum('SliceKind', 'CROSSING CUP CAP ASSOC IDENTITY')

Slice = namedtuple('Slice', 'kind position sign trees line_no')

LEAF = 1

Move = namedtuple('Move', 'offset a b c to_left')


def tree_size(tree):
    if tree == LEAF:
        return 1
    return tree_size(tree[0]) + tree_size(tree[1])


def left_comb(items):
    if not items:
        return None
    tree = items[0]
    for item in items[1:]:
        tree = (tree, item)
    return tree


def pair_tree(k, i):
    """Left comb on k points in which points i and i+1 are siblings."""
    items = [LEAF] * i + [(LEAF, LEAF)] + [LEAF] * (k - i - 2)
    return left_comb(items)


def _comb_moves(tree, offset, moves):
    if tree == LEAF:
        return LEAF
    left, right = tree
    while right != LEAF:
        b, c = right
        moves.append(Move(offset, tree_size(left), tree_size(b),
                          tree_size(c), True))
        left, right = (left, b), c
    return (_comb_moves(left, offset, moves), LEAF)


def moves_between(current, target):
    """Elementary moves (A(BC)) <-> ((AB)C) turning `current` into
    `target`, each with the leaf offset and the sizes of A, B and C."""
    if current == target or current is None:
        return []
    down = []
    _comb_moves(current, 0, down)
    up = []
    _comb_moves(target, 0, up)
    return down + [m._replace(to_left=not m.to_left) for m in reversed(up)]


def replace_leaf(tree, index, subtree):
    """Replace the index-th leaf of tree by subtree."""
    if tree == LEAF:
        assert index == 0
        return subtree
    n = tree_size(tree[0])
    if index < n:
        return (replace_leaf(tree[0], index, subtree), tree[1])
    return (tree[0], replace_leaf(tree[1], index - n, subtree))


def remove_pair(tree, i):
    """Drop the sibling leaves i, i+1 from tree."""
    if tree == (LEAF, LEAF):
        assert i == 0
        return None
    left, right = tree
    n = tree_size(left)
    if left == (LEAF, LEAF) and i == 0:
        return right
    if right == (LEAF, LEAF) and i == n:
        return left
    if i < n:
        return (remove_pair(left, i), right)
    return (left, remove_pair(right, i - n))


def insert_cup(tree, k, i):
    """Parenthesization after a cup at new positions i, i+1 among k old
    points: old leaf i becomes ((new new) old), or the last old leaf
    becomes (old (new new)) when appending."""
    pair = (LEAF, LEAF)
    if tree is None:
        return pair
    if i < k:
        return replace_leaf(tree, i, (pair, LEAF))
    return replace_leaf(tree, k - 1, (LEAF, pair))


def parse_tree(text, line_no):
    tokens = re.findall(r'\(|\)|\d+', text)
    pos = [0]

    def parse():
        if pos[0] >= len(tokens):
            raise TangleParseError(line_no, 'truncated tree {!r}'.format(text))
        tok = tokens[pos[0]]
        pos[0] += 1
        if tok == '(':
            left = parse()
            right = parse()
            if pos[0] >= len(tokens) or tokens[pos[0]] != ')':
                raise TangleParseError(line_no,
                                       'expected ) in {!r}'.format(text))
            pos[0] += 1
            return (left, right)
        if tok == ')':
            raise TangleParseError(line_no, 'unexpected ) in {!r}'.format(
                text))
        return int(tok) - 1

    tree = parse()
    if pos[0] != len(tokens):
        raise TangleParseError(line_no, 'trailing input in {!r}'.format(text))
    leaves = []

    def shape(t):
        if isinstance(t, int):
            leaves.append(t)
            return LEAF
        return (shape(t[0]), shape(t[1]))

    result = shape(tree)
    if leaves != list(range(len(leaves))):
        raise TangleParseError(line_no, 'tree leaves {} are not 1..k in order'
                               ''.format([l + 1 for l in leaves]))
    return result


def _orientation(token, line_no):
    if token == '+':
        return 1
    if token == '-':
        return -1
    raise TangleParseError(line_no, "orientation must be '+' or '-', not {!r}"
                           "".format(token))


class Arc(object):
    """One arc during a sweep; `ident` is its creation number."""

    def __init__(self, ident):
        self.ident = ident
        self.closed = False

    # Arcs of separate sweeps of one word compare equal by creation number.
    def __eq__(self, other):
        return isinstance(other, Arc) and self.ident == other.ident

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.ident)

    def __repr__(self):
        return 'Arc({})'.format(self.ident)


class TangleWord(object):

    def __init__(self, bottom=(), slices=(), framings=None):
        self.bottom = tuple(bottom)
        self.slices = list(slices)
        self.framings = dict(framings or {})
        self.check()

    @classmethod
    def parse(cls, text):
        bottom = ()
        slices = []
        framings = {}
        for line_no, raw in enumerate(text.splitlines(), 1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            head, _, rest = line.partition(' ')
            head = head.upper()
            args = rest.split()
            try:
                if head == 'BOTTOM':
                    if slices:
                        raise TangleParseError(line_no,
                                               'BOTTOM after the first slice')
                    bottom = tuple(_orientation(ch, line_no)
                                   for ch in ''.join(args))
                elif head in ('X+', 'X-'):
                    slices.append(Slice(SliceKind.CROSSING, int(args[0]) - 1,
                                        1 if head == 'X+' else -1, None,
                                        line_no))
                elif head == 'CUP':
                    sign = _orientation(args[1], line_no) if len(args) > 1 \
                        else 1
                    slices.append(Slice(SliceKind.CUP, int(args[0]) - 1, sign,
                                        None, line_no))
                elif head == 'CAP':
                    slices.append(Slice(SliceKind.CAP, int(args[0]) - 1, None,
                                        None, line_no))
                elif head == 'ASSOC':
                    source, arrow, target = rest.partition('->')
                    if not arrow:
                        raise TangleParseError(line_no, 'ASSOC needs ->')
                    trees = (parse_tree(source, line_no),
                             parse_tree(target, line_no))
                    slices.append(Slice(SliceKind.ASSOC, None, None, trees,
                                        line_no))
                elif head == 'ID':
                    slices.append(Slice(SliceKind.IDENTITY, None, None, None,
                                        line_no))
                elif head == 'FRAMING':
                    framings[int(args[0]) - 1] = int(args[1])
                else:
                    raise TangleParseError(line_no,
                                           'unknown slice {!r}'.format(head))
            except (IndexError, ValueError) as e:
                raise TangleParseError(line_no, 'bad arguments in {!r}: {}'
                                       ''.format(line, e))
        try:
            return cls(bottom, slices, framings)
        except MalformedTangleError as e:
            raise TangleParseError(getattr(e, 'line_no', 0), str(e))

    @classmethod
    def from_file(cls, path):
        with open(path) as f:
            return cls.parse(f.read())

    def _fail(self, s, message):
        e = MalformedTangleError('line {}: {}'.format(s.line_no, message)
                                 if s.line_no else message)
        e.line_no = s.line_no
        raise e

    def check(self):
        """Walk the word once, validating positions and orientations."""
        self.sweep()

    def sweep(self, visit=None):
        """Track points level by level.  `visit(slice, points, arcs)` is
        called before each slice with points as a list of (arc, orientation).
        Returns (points, arcs, merges) at the top; merges maps every arc to
        the arc it was merged into."""
        arcs = [Arc(i) for i in range(len(self.bottom))]
        points = [(arc, o) for arc, o in zip(arcs, self.bottom)]
        parent = dict((a, a) for a in arcs)

        def find(a):
            while parent[a] is not a:
                a = parent[a]
            return a

        for s in self.slices:
            if visit is not None:
                visit(s, points, arcs)
            k = len(points)
            if s.kind == SliceKind.CROSSING:
                if not 0 <= s.position < k - 1:
                    self._fail(s, 'crossing at {} on {} points'.format(
                        s.position + 1, k))
                i = s.position
                points[i], points[i + 1] = points[i + 1], points[i]
            elif s.kind == SliceKind.CUP:
                if not 0 <= s.position <= k:
                    self._fail(s, 'cup at {} on {} points'.format(
                        s.position + 1, k))
                arc = Arc(len(arcs))
                arcs.append(arc)
                parent[arc] = arc
                points[s.position:s.position] = [(arc, -s.sign),
                                                 (arc, s.sign)]
            elif s.kind == SliceKind.CAP:
                i = s.position
                if not 0 <= i < k - 1:
                    self._fail(s, 'cap at {} on {} points'.format(i + 1, k))
                (a, oa), (b, ob) = points[i], points[i + 1]
                if oa == ob:
                    self._fail(s, 'cap joins points of equal orientation')
                ra, rb = find(a), find(b)
                if ra is rb:
                    ra.closed = True
                else:
                    keep, drop = (ra, rb) if ra.ident < rb.ident else (rb, ra)
                    parent[drop] = keep
                del points[i:i + 2]
            elif s.kind == SliceKind.ASSOC:
                for tree in s.trees:
                    if tree_size(tree) != k:
                        self._fail(s, 'tree on {} points at a level with {}'
                                   ''.format(tree_size(tree), k))
        return points, arcs, dict((a, find(a)) for a in arcs)

    def top(self):
        points, _, _ = self.sweep()
        return tuple(o for _, o in points)

    def is_closed(self):
        return not self.bottom and not self.top()

    def components(self):
        """Root arcs of the link components in creation order; a root is
        `closed` when its component is a circle."""
        _, roots = self.component_index()
        return roots

    def component_index(self):
        """Map from every arc to the index of its link component, and the
        component roots."""
        _, arcs, merges = self.sweep()
        roots = []
        for a in arcs:
            if merges[a] not in roots:
                roots.append(merges[a])
        return dict((a, roots.index(merges[a])) for a in arcs), roots

    def crossing_signs(self):
        """(component of left strand, component of right strand, sign) for
        every crossing, with the sign of the oriented crossing."""
        index, _ = self.component_index()
        out = []

        def visit(s, points, arcs):
            if s.kind != SliceKind.CROSSING:
                return
            (a, oa), (b, ob) = points[s.position], points[s.position + 1]
            out.append((index[a], index[b], s.sign * oa * ob))

        self.sweep(visit)
        return out

    def writhe(self, component):
        return sum(sign for a, b, sign in self.crossing_signs()
                   if a == component and b == component)

    def linking_number(self, c1, c2):
        total = sum(sign for a, b, sign in self.crossing_signs()
                    if set((a, b)) == set((c1, c2)) and a != b)
        return Fraction(total, 2)

    def strand_permutation(self):
        """For a braid-like word, the top position of each bottom strand."""
        points, arcs, merges = self.sweep()
        bottom_arcs = arcs[:len(self.bottom)]
        top_roots = [merges[a] for a, _ in points]
        return [top_roots.index(merges[a]) for a in bottom_arcs]

    def split(self, height):
        """(lower, upper) with lower holding the first `height` slices."""
        lower = TangleWord(self.bottom, self.slices[:height], self.framings)
        upper = TangleWord(lower.top(), self.slices[height:], self.framings)
        return lower, upper

    def __len__(self):
        return len(self.slices)

    def to_text(self):
        lines = []
        if self.bottom:
            lines.append('BOTTOM ' + ' '.join('+' if o > 0 else '-'
                                              for o in self.bottom))
        for s in self.slices:
            if s.kind == SliceKind.CROSSING:
                lines.append('X{} {}'.format('+' if s.sign > 0 else '-',
                                             s.position + 1))
            elif s.kind == SliceKind.CUP:
                lines.append('CUP {} {}'.format(s.position + 1,
                                                '+' if s.sign > 0 else '-'))
            elif s.kind == SliceKind.CAP:
                lines.append('CAP {}'.format(s.position + 1))
            elif s.kind == SliceKind.ASSOC:
                lines.append('ASSOC {}->{}'.format(*[_tree_text(t)
                                                     for t in s.trees]))
            else:
                lines.append('ID')
        for c, f in sorted(self.framings.items()):
            lines.append('FRAMING {} {}'.format(c + 1, f))
        return '\n'.join(lines) + '\n'


def _tree_text(tree):
    counter = [0]

    def text(t):
        if t == LEAF:
            counter[0] += 1
            return str(counter[0])
        return '({} {})'.format(text(t[0]), text(t[1]))

    return text(tree)


def braid_word(strands, generators):
    """Upward braid from signed 1-based generators, e.g. [1, 1, -2]."""
    slices = [Slice(SliceKind.CROSSING, abs(g) - 1, 1 if g > 0 else -1, None,
                    0) for g in generators]
    return TangleWord([1] * strands, slices)
