"""Horizontal chord diagrams on k strands as words in the generators t_ij.

A word lists chords from the top down, so the product x*y (x above y) is
word concatenation.  Words are kept in a normal form: chords touching the
last strand are moved to the front with the infinitesimal braid relations

    [t_jk, t_in] = 0                      if i not in {j, k}
    t_jk t_jn = t_jn t_jk + t_jn t_kn - t_kn t_jn
    t_jk t_kn = t_kn t_jk + t_kn t_jn - t_jn t_kn

and the remaining suffix is normalized recursively on one strand fewer.
Normal words form a basis, so two elements are equal in A(strands) iff
their normal forms agree.
"""

import functools
from fractions import Fraction
from math import factorial

from kontsevich_check.core.algebra import AlgebraElement
from kontsevich_check.core.diagram import Diagram, Skeleton
from kontsevich_check.errors import PreconditionError, TruncationError


def generator(i, j):
    return (i, j) if i < j else (j, i)


def _add(terms, word, value):
    new = terms.get(word, 0) + value
    if new == 0:
        terms.pop(word, None)
    else:
        terms[word] = new


@functools.lru_cache(maxsize=None)
def normal_form(word, top):
    """Normal form of a word whose strands are all <= top, as a tuple of
    (word, coefficient) pairs."""
    if top < 2:
        return ((word, 1),)
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if top in a or top not in b:
            continue
        pre, post = word[:i], word[i + 2:]
        m = b[0]
        if m not in a:
            replacements = [((b, a), 1)]
        else:
            other = generator(a[1] if m == a[0] else a[0], top)
            replacements = [((b, a), 1), ((b, other), 1), ((other, b), -1)]
        terms = {}
        for rep, coeff in replacements:
            for w, c in normal_form(pre + rep + post, top):
                _add(terms, w, coeff * c)
        return tuple(sorted(terms.items()))
    split = 0
    while split < len(word) and top in word[split]:
        split += 1
    prefix, suffix = word[:split], word[split:]
    return tuple((prefix + w, c) for w, c in normal_form(suffix, top - 1))


class HorizontalElement(object):
    """Truncated combination of normal words on `strands` strands."""

    def __init__(self, strands, truncation, terms=None):
        self.strands = strands
        self.truncation = truncation
        self.terms = {}
        for word, coeff in (terms or {}).items():
            self.add_word(word, coeff)

    @classmethod
    def one(cls, strands, truncation):
        return cls(strands, truncation, {(): 1})

    @classmethod
    def generator(cls, strands, truncation, i, j, coeff=1):
        return cls(strands, truncation, {(generator(i, j),): coeff})

    def add_word(self, word, coeff):
        if len(word) > self.truncation or coeff == 0:
            return
        for w, c in normal_form(tuple(word), self.strands - 1):
            _add(self.terms, w, Fraction(coeff) * c)

    def copy(self):
        out = HorizontalElement(self.strands, self.truncation)
        out.terms = dict(self.terms)
        return out

    def _check(self, other):
        if self.strands != other.strands:
            raise PreconditionError('{} strands vs {}'.format(self.strands,
                                                              other.strands))
        if self.truncation != other.truncation:
            raise TruncationError('truncation {} vs {}'.format(
                self.truncation, other.truncation))

    def __add__(self, other):
        self._check(other)
        out = self.copy()
        for w, c in other.terms.items():
            _add(out.terms, w, c)
        return out

    def __sub__(self, other):
        return self + other.scaled(-1)

    def __neg__(self):
        return self.scaled(-1)

    def scaled(self, factor):
        out = HorizontalElement(self.strands, self.truncation)
        if factor != 0:
            out.terms = dict((w, c * factor) for w, c in self.terms.items())
        return out

    def __mul__(self, other):
        """Product with self above other."""
        if not isinstance(other, HorizontalElement):
            return self.scaled(other)
        self._check(other)
        out = HorizontalElement(self.strands, self.truncation)
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                out.add_word(w1 + w2, c1 * c2)
        return out

    def __eq__(self, other):
        return (isinstance(other, HorizontalElement)
                and self.strands == other.strands
                and self.terms == other.terms)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        def name(w):
            return '*'.join('t{}{}'.format(i + 1, j + 1) for i, j in w) or '1'
        body = ' + '.join('{}*{}'.format(c, name(w)) for w, c in
                          sorted(self.terms.items(),
                                 key=lambda wc: (len(wc[0]), wc[0])))
        return 'HorizontalElement({} strands, N={}: {})'.format(
            self.strands, self.truncation, body or '0')

    def constant_term(self):
        return self.terms.get((), Fraction(0))

    def degree_part(self, k):
        out = HorizontalElement(self.strands, self.truncation)
        out.terms = dict((w, c) for w, c in self.terms.items()
                         if len(w) == k)
        return out

    def up_to(self, k):
        out = HorizontalElement(self.strands, self.truncation)
        out.terms = dict((w, c) for w, c in self.terms.items()
                         if len(w) <= k)
        return out

    def truncated(self, n):
        return HorizontalElement(self.strands, n, self.terms)

    def is_zero(self):
        return not self.terms

    def exp(self):
        if self.constant_term() != 0:
            raise PreconditionError('exp needs a zero constant term')
        out = HorizontalElement.one(self.strands, self.truncation)
        term = HorizontalElement.one(self.strands, self.truncation)
        for k in range(1, self.truncation + 1):
            term = term * self
            out = out + term.scaled(Fraction(1, factorial(k)))
        return out

    def log(self):
        if self.constant_term() != 1:
            raise PreconditionError('log needs constant term 1')
        z = self - HorizontalElement.one(self.strands, self.truncation)
        out = HorizontalElement(self.strands, self.truncation)
        term = HorizontalElement.one(self.strands, self.truncation)
        for k in range(1, self.truncation + 1):
            term = term * z
            out = out + term.scaled(Fraction((-1) ** (k + 1), k))
        return out

    def inverse(self):
        if self.constant_term() != 1:
            raise PreconditionError('inverse needs constant term 1')
        one = HorizontalElement.one(self.strands, self.truncation)
        z = one - self
        out, term = one, one
        for _ in range(self.truncation):
            term = term * z
            out = out + term
        return out

    def map_strands(self, lifts, target):
        """Algebra map t_ij -> sum of t_pq over p in lifts[i], q in lifts[j].

        Duplication, embedding and permutation are lifts of sizes >= 1;
        an empty lift deletes the strand."""
        out = HorizontalElement(target, self.truncation)
        for word, coeff in self.terms.items():
            images = [[]]
            for i, j in word:
                letters = [generator(p, q) for p in lifts[i] for q in lifts[j]]
                images = [img + [l] for img in images for l in letters]
            for img in images:
                out.add_word(tuple(img), coeff)
        return out

    def to_algebra(self):
        """The same element as chord diagrams on a strand skeleton."""
        skeleton = Skeleton.strands(self.strands)
        out = AlgebraElement(skeleton, self.truncation)
        for word, coeff in self.terms.items():
            out.add_diagram(word_to_diagram(word, self.strands), coeff)
        return out

    @classmethod
    def from_algebra(cls, x):
        if not x.skeleton.is_strands():
            raise PreconditionError('{} is not a strand skeleton'.format(
                x.skeleton))
        out = cls(len(x.skeleton), x.truncation)
        for d, coeff in x.items():
            word, sign = diagram_to_word(d)
            out.add_word(word, coeff * sign)
        return out


def word_to_diagram(word, strands):
    words = [[] for _ in range(strands)]
    for label, (i, j) in reversed(list(enumerate(word))):
        words[i].append(label)
        words[j].append(label)
    return Diagram.from_chords(Skeleton.strands(strands), words)


def diagram_to_word(d):
    """Read a horizontal chord diagram from the top down; returns the word
    and the product of the local orientation signs."""
    if d.trivalent:
        raise PreconditionError('diagram with trivalent vertices is not '
                                'horizontal')
    pos = d.univalent_positions()
    partner = d.partners()
    remaining = [len(seq) for seq in d.univalent]
    word = []
    sign = 1
    while any(remaining):
        for ci, count in enumerate(remaining):
            if not count:
                continue
            v, s = d.univalent[ci][count - 1]
            w = partner[v]
            cj, pj, t = pos[w]
            if cj == ci:
                raise PreconditionError('chord with both ends on strand {}'
                                        ''.format(ci))
            if pj == remaining[cj] - 1:
                word.append(generator(ci, cj))
                sign *= s * t
                remaining[ci] -= 1
                remaining[cj] -= 1
                break
        else:
            raise PreconditionError('chords cross; not a horizontal diagram')
    return tuple(word), sign
