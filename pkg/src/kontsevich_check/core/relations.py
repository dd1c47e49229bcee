"""AS, IHX and STU relations between Jacobi diagrams.

A relation is a dict mapping canonical diagrams to Fractions whose sum is
zero in A(M).  AS is absorbed by canonicalization: a raw diagram enters a
combination with the sign of its canonical form, and a class that is
reversed by one of its own automorphisms enters as a relation by itself.
"""

import logging
from fractions import Fraction

from kontsevich_check.core.diagram import (Diagram, canonicalize,
                                           check_degree, enumerate_diagrams)
from kontsevich_check.util.statistics import Statistics


def _fresh_ids(d, count):
    used = [0]
    for seq in d.univalent:
        used.extend(v for v, _ in seq)
    for v, hs in d.trivalent:
        used.append(v)
        used.extend(hs)
    start = max(used) + 1
    return list(range(start, start + count))


def _rotate_to(hs, h):
    i = hs.index(h)
    return hs[i:] + hs[:i]


def is_simple(d):
    """True if no half-edges of one vertex are joined to each other and no
    two vertices share more than one edge."""
    owner = d.owners()
    pairs = set()
    for h, k in d.edges:
        a, b = owner[h][0], owner[k][0]
        if a == b:
            return False
        pair = (a, b) if a < b else (b, a)
        if pair in pairs:
            return False
        pairs.add(pair)
    return True


def combine(terms):
    """Canonicalize a list of (raw diagram, coefficient) pairs into a sparse
    combination of canonical diagrams."""
    out = {}
    for d, coeff in terms:
        c = canonicalize(d, check=False)
        s = c.coefficient_sign()
        if s == 0:
            continue
        key = c.diagram
        out[key] = out.get(key, 0) + Fraction(coeff) * s
        if out[key] == 0:
            del out[key]
    return out


def stu_expansion(d, u):
    """Resolve the trivalent vertex attached to univalent vertex `u`.

    Returns [(D1, c1), (D2, c2)] with d = c1*D1 + c2*D2 in A(M).  The two
    new univalent vertices replace u on its component, adjacent to each
    other and with u's local orientation."""
    partner = d.partners()
    owner = d.owners()
    hw = partner[u]
    w, is_tri = owner[hw]
    assert is_tri, 'vertex {} is not attached to a trivalent vertex'.format(u)
    cyclic = dict(d.trivalent)[w]
    _, hx, hy = _rotate_to(cyclic, hw)
    px, py = partner[hx], partner[hy]
    ux, uy = _fresh_ids(d, 2)
    dropped = set((u, hw, hx, hy))
    edges = [e for e in d.edges if e[0] not in dropped and e[1] not in dropped]
    edges.extend([(ux, px), (uy, py)])
    trivalent = [(v, hs) for v, hs in d.trivalent if v != w]

    def build(first, second):
        univalent = []
        for seq in d.univalent:
            new = []
            for v, s in seq:
                if v == u:
                    new.extend([(first, s), (second, s)])
                else:
                    new.append((v, s))
            univalent.append(new)
        return Diagram(d.skeleton, univalent, trivalent, edges)

    sigma = d.univalent_positions()[u][2]
    yx, xy = build(uy, ux), build(ux, uy)
    if sigma == 1:
        return [(yx, 1), (xy, -1)]
    return [(xy, 1), (yx, -1)]


def stu_relation(d, u):
    terms = [(d, 1)] + [(t, -c) for t, c in stu_expansion(d, u)]
    return combine(terms)


def ihx_terms(d, e):
    """The three diagrams of the IHX relation around internal edge `e`;
    their sum vanishes.  Returns None if one of them is not simple."""
    partner = d.partners()
    owner = d.owners()
    e1, e2 = e
    w1, w2 = owner[e1][0], owner[e2][0]
    cyc = dict(d.trivalent)
    _, a1, b1 = _rotate_to(cyc[w1], e1)
    _, c2, d2 = _rotate_to(cyc[w2], e2)
    a, b, c, dd = partner[a1], partner[b1], partner[c2], partner[d2]
    dropped = set(cyc[w1]) | set(cyc[w2])
    base_edges = [x for x in d.edges
                  if x[0] not in dropped and x[1] not in dropped]
    others = [(v, hs) for v, hs in d.trivalent if v not in (w1, w2)]
    n1, n2, f1, g1, k1, f2, g2, k2 = _fresh_ids(d, 8)
    trivalent = others + [(n1, (f1, g1, k1)), (n2, (f2, g2, k2))]
    result = []
    # Jacobi form: (ab)(cd) + (bc)(ad) + (ca)(bd) = 0
    for p, q, r, s in ((a, b, c, dd), (b, c, a, dd), (c, a, b, dd)):
        edges = base_edges + [(f1, f2), (g1, p), (k1, q), (g2, r), (k2, s)]
        t = Diagram(d.skeleton, d.univalent, trivalent, edges)
        if not is_simple(t):
            return None
        result.append(t)
    return result


def ihx_relation(d, e):
    terms = ihx_terms(d, e)
    if terms is None:
        return None
    return combine([(t, 1) for t in terms])


def normalize(relation):
    """Scale so the first coefficient in diagram order is 1."""
    keys = sorted(relation, key=lambda k: k.sort_key())
    lead = relation[keys[0]]
    return dict((k, relation[k] / lead) for k in keys)


def relation_key(relation):
    return tuple(sorted(((k.sort_key(), v) for k, v in relation.items()),
                        key=lambda kv: kv[0]))


def relations_of(d):
    """Every relation generated at one (canonical, simple) diagram."""
    c = canonicalize(d, check=False)
    if c.zero:
        return [{c.diagram: Fraction(1)}]
    out = []
    owner = d.owners()
    for h, k in d.edges:
        ho, ko = owner[h], owner[k]
        if ho[1] and ko[1]:
            rel = ihx_relation(d, (h, k))
            if rel is not None:
                out.append(rel)
        elif ho[1] != ko[1]:
            u = k if ho[1] else h
            out.append(stu_relation(d, u))
    return [r for r in out if r]


def generate_relations(skeleton, n):
    """All AS/IHX/STU relations among simple degree-n diagrams, normalized
    and without duplicates."""
    check_degree(n)
    seen = set()
    relations = []
    for c in enumerate_diagrams(skeleton, n):
        for rel in relations_of(c.diagram):
            rel = normalize(rel)
            key = relation_key(rel)
            if key in seen:
                continue
            seen.add(key)
            relations.append(rel)
    Statistics().num_relations.inc(len(relations))
    logging.debug('%d relations in degree %d on %s'
                  % (len(relations), n, skeleton))
    return relations
