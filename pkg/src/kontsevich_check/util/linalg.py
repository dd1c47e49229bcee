"""Exact linear algebra over the rationals.

RowReducer keeps an incremental reduced row echelon form of sparse
Fraction rows keyed by arbitrary hashable column labels; the column order
comes from a caller-supplied sort key.  Small dense systems (associator
coefficients) go through sympy.
"""

import logging
from fractions import Fraction

import sympy

from kontsevich_check.errors import InconsistentSystemError
from kontsevich_check.util.statistics import Statistics


def add_scaled(target, source, scale):
    """target += scale * source, dropping zeros.  Modifies target."""
    for col, value in source.items():
        new = target.get(col, 0) + scale * value
        if new == 0:
            target.pop(col, None)
        else:
            target[col] = new
    return target


class RowReducer(object):
    """Incremental sparse Gauss-Jordan elimination.

    The pivot of a row is its smallest column under `order_key`; pivot rows
    are kept normalized and free of every other pivot column, so the pivot
    set is the same as for a batch elimination of all rows added so far.
    """

    def __init__(self, order_key):
        self.order_key = order_key
        self.pivots = {}
        # column -> set of pivot columns whose rows mention it
        self.users = {}

    def __len__(self):
        return len(self.pivots)

    def is_pivot(self, col):
        return col in self.pivots

    def reduce(self, vector):
        """Reduce a sparse vector modulo the current row space."""
        out = dict((k, Fraction(v)) for k, v in vector.items() if v != 0)
        for col in [c for c in out if c in self.pivots]:
            value = out.get(col, 0)
            if value != 0:
                add_scaled(out, self.pivots[col], -value)
        return out

    def add_row(self, vector):
        """Add a row; return the new pivot column or None if dependent."""
        row = self.reduce(vector)
        if not row:
            return None
        lead = min(row, key=self.order_key)
        scale = row[lead]
        row = dict((k, v / scale) for k, v in row.items())
        for other in list(self.users.get(lead, ())):
            other_row = self.pivots[other]
            value = other_row.get(lead, 0)
            if value == 0:
                continue
            for col in row:
                self.users.setdefault(col, set()).add(other)
            add_scaled(other_row, row, -value)
        self.users.pop(lead, None)
        self.pivots[lead] = row
        for col in row:
            if col != lead:
                self.users.setdefault(col, set()).add(lead)
        Statistics().num_eliminated_rows.inc()
        return lead

    def expression(self, col):
        """Express a column in terms of non-pivot columns."""
        if col not in self.pivots:
            return {col: Fraction(1)}
        return dict((k, -v) for k, v in self.pivots[col].items() if k != col)


def _rational(value):
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def solve_least_norm(rows, rhs, num_unknowns):
    """Solve A x = b over the rationals, returning the solution orthogonal
    to the nullspace of A.

    rows: list of dicts unknown index -> coefficient."""
    if num_unknowns == 0 or not rows:
        if any(v != 0 for v in rhs):
            raise InconsistentSystemError('nonzero residual with no unknowns')
        return [Fraction(0)] * num_unknowns
    a = sympy.zeros(len(rows), num_unknowns)
    for i, row in enumerate(rows):
        for j, value in row.items():
            a[i, j] = _rational(value)
    b = sympy.Matrix([_rational(v) for v in rhs])
    x = (a.pinv() * b).applyfunc(sympy.nsimplify)
    if a * x != b:
        logging.debug('residual %s' % list(a * x - b))
        raise InconsistentSystemError(
            'linear system with {} equations in {} unknowns has no solution'
            ''.format(len(rows), num_unknowns))
    return [Fraction(int(v.p), int(v.q)) for v in x]


def nullity(rows, num_unknowns):
    if not rows or not num_unknowns:
        return num_unknowns
    a = sympy.zeros(len(rows), num_unknowns)
    for i, row in enumerate(rows):
        for j, value in row.items():
            a[i, j] = _rational(value)
    return num_unknowns - a.rank()
