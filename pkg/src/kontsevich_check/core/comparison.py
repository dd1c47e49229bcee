"""Side-by-side checks of the combinatorial and the numeric invariant.

Both sides are taken at framing 0 and compared as they are.  Dividing by
the value of the unknot on every component is a connected sum in
A(circles); it is used to read off v2 and reported next to the raw rows.
"""

import math
from collections import OrderedDict, namedtuple
from fractions import Fraction

from kontsevich_check.core.algebra import AlgebraElement, coordinates, reduce
from kontsevich_check.core.curve import Curve
from kontsevich_check.core.diagram import Diagram
from kontsevich_check.core.hopf import inverse, multiply
from kontsevich_check.core.integrator import (NumericElement,
                                              _add_image_variances,
                                              propagate_errors)
from kontsevich_check.core.tangle import TangleWord

SIGMAS = 3.0
RELATIVE = 0.05
ABSOLUTE = 1e-9

UNKNOT_WORD = 'CUP 1 +\nCAP 1\n'


def unknot_word():
    return TangleWord.parse(UNKNOT_WORD)


def round_circle():
    return Curve.from_json([{'cos': [[0, 0, 0], [1, 0, 0]],
                             'sin': [[0, 1, 0]]}])


def on_component(x, skeleton, i):
    """An element of A(circle) placed on component i of `skeleton`."""
    out = AlgebraElement(skeleton, x.truncation)
    for d, c in x.items():
        univalent = [()] * len(skeleton)
        univalent[i] = d.univalent[0]
        out.add_diagram(Diagram(skeleton, univalent, d.trivalent, d.edges), c)
    return out


def unknot_divisor(unknot, skeleton):
    """Inverse of the unknot value on every component."""
    inv = inverse(unknot)
    out = AlgebraElement.one(skeleton, unknot.truncation)
    for i in range(len(skeleton)):
        out = multiply(out, on_component(inv, skeleton, i))
    return out


def normalize_exact(x, unknot):
    return reduce(multiply(x, unknot_divisor(unknot, x.skeleton)))


def normalize_numeric(z, unknot):
    """z divided by the numeric unknot value on each component, with both
    error sources propagated to first order."""
    divisor = unknot_divisor(unknot.to_algebra(), z.skeleton)
    result = reduce(multiply(z.to_algebra(), divisor))
    variances = propagate_errors(z, divisor)
    # d(z u^-1) = -z u^-2 du on each component
    n = z.truncation
    inv = inverse(unknot.to_algebra())
    for i in range(len(z.skeleton)):
        slope = multiply(result, on_component(inv, z.skeleton, i))
        for basis, errors in zip(unknot.bases(), unknot.errors):
            for d, e in zip(basis.elements, errors):
                if e:
                    image = reduce(multiply(on_component(
                        AlgebraElement.from_diagram(d, n), z.skeleton, i),
                        slope))
                    _add_image_variances(variances, image, e)
    errors = [[math.sqrt(v) for v in row] for row in variances]
    return NumericElement.from_algebra(result, errors)


def _is_crossed_pair(d):
    if d.degree() != 2 or not d.is_chord_diagram() or len(d.skeleton) != 1:
        return False
    seq = [v for v, _ in d.univalent[0]]
    partner = d.partners()
    a, b = seq[0], partner[seq[0]]
    inside = seq[seq.index(a) + 1:seq.index(b)]
    return len(inside) == 1


def v2_weight(values, basis):
    """Casson weight system (1 on crossed chords, 0 on parallel ones) on a
    degree-2 coordinate vector of a knot."""
    return sum(v for d, v in zip(basis.elements, values)
               if _is_crossed_pair(d))


Row = namedtuple('Row', 'degree index diagram exact numeric stderr passed')


def tolerance(exact, stderr):
    return max(SIGMAS * stderr, RELATIVE * abs(exact), ABSOLUTE)


def compare(exact, numeric):
    """Per basis coordinate: exact value, estimate, stderr and verdict."""
    rows = []
    for k, (basis, values, errors) in enumerate(zip(numeric.bases(),
                                                    numeric.values,
                                                    numeric.errors)):
        exact_values = coordinates(exact, k)
        for idx, d in enumerate(basis.elements):
            e = float(exact_values[idx])
            v, s = values[idx], errors[idx]
            rows.append(Row(k, idx, d, e, v, s,
                            abs(v - e) <= tolerance(e, s)))
    return rows


def rows_to_json(rows):
    return [OrderedDict([
        ('degree', r.degree), ('index', r.index),
        ('diagram', r.diagram.to_json()), ('exact', r.exact),
        ('numeric', r.numeric), ('stderr', r.stderr),
        ('delta_sigmas', (r.numeric - r.exact) / r.stderr
         if r.stderr else None),
        ('passed', r.passed)]) for r in rows]


def exact_json(x):
    """Basis coordinates of an exact element as strings, degree by
    degree."""
    return [[str(Fraction(c)) for c in coordinates(x, k)]
            for k in range(x.truncation + 1)]