"""Gauss codes of knots and the Gauss-diagram formula for v2.

A Gauss code lists the crossings met while walking along the knot, each as
a token like "O1+" (over, crossing 1, positive) or "U3-".  Tokens are given
as a list or as one string separated by commas or whitespace.
"""

import re
from collections import namedtuple

from kontsevich_check.core.tangle import SliceKind
from kontsevich_check.errors import MalformedTangleError, PreconditionError

Passage = namedtuple('Passage', 'over label sign')

_TOKEN = re.compile(r'^([OU])(\w+?)([+-])$')


def parse_gauss_code(code):
    if isinstance(code, str):
        code = [t for t in re.split(r'[,\s]+', code) if t]
    passages = []
    for token in code:
        if isinstance(token, Passage):
            passages.append(token)
            continue
        m = _TOKEN.match(token.strip())
        if m is None:
            raise PreconditionError("bad Gauss code token '{}'".format(token))
        passages.append(Passage(m.group(1) == 'O', m.group(2),
                                1 if m.group(3) == '+' else -1))
    seen = {}
    for p in passages:
        seen.setdefault(p.label, []).append(p)
    for label, ps in seen.items():
        if (len(ps) != 2 or ps[0].over == ps[1].over
                or ps[0].sign != ps[1].sign):
            raise PreconditionError(
                'crossing {} must appear once over and once under with one '
                'sign'.format(label))
    return passages


def format_gauss_code(passages):
    return ','.join('{}{}{}'.format('O' if p.over else 'U', p.label,
                                    '+' if p.sign > 0 else '-')
                    for p in passages)


def v2_from_gauss_code(code):
    """Casson invariant: the signed count of pairs of crossings met in the
    order over(1), under(2), under(1), over(2) from the base point."""
    passages = parse_gauss_code(code)
    where = {}
    for pos, p in enumerate(passages):
        where.setdefault(p.label, {})['O' if p.over else 'U'] = pos
    sign = dict((p.label, p.sign) for p in passages)
    total = 0
    for a in where:
        for b in where:
            if a == b:
                continue
            if (where[a]['O'] < where[b]['U'] < where[a]['U']
                    < where[b]['O']):
                total += sign[a] * sign[b]
    return total


def gauss_code_from_word(word):
    """Gauss code of a closed one-component tangle word.

    Crossing X+ at points i, i+1 puts the strand from the lower left point
    over the one from the lower right point; X- the other way round."""
    slots = [[] for _ in word.bottom]
    points = [(i, o) for i, o in enumerate(word.bottom)]

    def record(point, passage):
        slot, orientation = point
        if orientation > 0:
            slots[slot].append(passage)
        else:
            slots[slot].insert(0, passage)

    label = 0
    for s in word.slices:
        i = s.position
        if s.kind == SliceKind.CROSSING:
            label += 1
            (_, oa), (_, ob) = points[i], points[i + 1]
            sign = s.sign * oa * ob
            record(points[i], Passage(s.sign > 0, str(label), sign))
            record(points[i + 1], Passage(s.sign < 0, str(label), sign))
            points[i], points[i + 1] = points[i + 1], points[i]
        elif s.kind == SliceKind.CUP:
            slots.append([])
            slot = len(slots) - 1
            points[i:i] = [(slot, -s.sign), (slot, s.sign)]
        elif s.kind == SliceKind.CAP:
            (a, oa), (b, ob) = points[i], points[i + 1]
            up, down = (a, b) if oa > 0 else (b, a)
            del points[i:i + 2]
            if up == down:
                continue
            keep, drop = min(up, down), max(up, down)
            slots[keep] = slots[up] + slots[down]
            slots[drop] = None
            points = [(keep if p == drop else p, o) for p, o in points]
    live = [seq for seq in slots if seq is not None]
    if points or len(live) != 1:
        raise MalformedTangleError('Gauss codes need a closed knot, got {} '
                                   'components'.format(len(live)))
    return live[0]
