from fractions import Fraction

import pytest

from kontsevich_check.core.algebra import (AlgebraElement, compute_basis,
                                           reduce)
from kontsevich_check.core.associator import solve_associator
from kontsevich_check.core.diagram import (Diagram, Skeleton, canonicalize,
                                           theta)
from kontsevich_check.core.hopf import (StrandMap, StrandMapKind,
                                        apply_strand_map, bracket,
                                        chord_element, coproduct,
                                        delete_strand, duplicate, embed,
                                        exp_trunc, inverse, is_grouplike,
                                        log_trunc, multiply, permute_strands,
                                        power, reduce_tensor, reduced_equal,
                                        tensor, tensor_multiply)
from kontsevich_check.errors import (PreconditionError, SkeletonMismatchError,
                                     TruncationError)


def circle_theta(n, coeff=1):
    return AlgebraElement.from_diagram(theta(Skeleton.circle()), n, coeff)


def tripod(n):
    d = Diagram(Skeleton.circle(), [[(0, 1), (1, 1), (2, 1)]],
                [(3, (4, 5, 6))], [(0, 4), (1, 5), (2, 6)])
    return AlgebraElement.from_diagram(d, n)


class CheckProduct:
    def check_theta_squared(self):
        x = multiply(circle_theta(2), circle_theta(2))
        par = Diagram.from_chords(Skeleton.circle(), [['a', 'a', 'b', 'b']])
        assert x == AlgebraElement.from_diagram(par, 2)

    def check_unit(self):
        x = circle_theta(3) + tripod(3)
        one = AlgebraElement.one(Skeleton.circle(), 3)
        assert multiply(one, x) == x
        assert multiply(x, one) == x

    def check_truncated_product(self):
        x = power(circle_theta(2), 3)
        assert x.is_zero()

    def check_circle_is_commutative(self):
        assert bracket(circle_theta(3), tripod(3)).is_zero()

    def check_strands_associative(self):
        a = chord_element(3, 0, 1, 3)
        b = chord_element(3, 1, 2, 3)
        c = chord_element(3, 0, 2, 3)
        assert reduced_equal(multiply(multiply(a, b), c),
                             multiply(a, multiply(b, c)))

    def check_strands_not_commutative(self):
        a = chord_element(3, 0, 1, 2)
        b = chord_element(3, 1, 2, 2)
        assert not bracket(a, b).is_zero()

    def check_mismatches(self):
        with pytest.raises(TruncationError):
            multiply(circle_theta(2), circle_theta(3))
        with pytest.raises(SkeletonMismatchError):
            multiply(circle_theta(2), chord_element(1, 0, 0, 2))


class CheckExpLog:
    def check_exp_of_theta(self):
        x = exp_trunc(circle_theta(3, Fraction(1, 2)))
        par = Diagram.from_chords(Skeleton.circle(), [['a', 'a', 'b', 'b']])
        assert x.constant_term() == 1
        assert x.parts[1] == circle_theta(3, Fraction(1, 2)).parts[1]
        assert x.parts[2] == {canonicalize(par).diagram: Fraction(1, 8)}

    def check_log_inverts_exp(self):
        x = circle_theta(3, Fraction(1, 2)) + tripod(3)
        assert reduced_equal(log_trunc(exp_trunc(x)), x)

    def check_inverse(self):
        y = exp_trunc(chord_element(2, 0, 1, 3, Fraction(1, 2)))
        y = y + multiply(chord_element(2, 0, 0, 3), chord_element(2, 1, 1, 3))
        one = AlgebraElement.one(Skeleton.strands(2), 3)
        assert reduced_equal(multiply(inverse(y), y), one)
        assert reduced_equal(multiply(y, inverse(y)), one)

    def check_preconditions(self):
        one = AlgebraElement.one(Skeleton.circle(), 2)
        with pytest.raises(PreconditionError):
            exp_trunc(one)
        with pytest.raises(PreconditionError):
            log_trunc(circle_theta(2))
        with pytest.raises(PreconditionError):
            inverse(circle_theta(2))
        with pytest.raises(TruncationError):
            exp_trunc(circle_theta(2), 3)


class CheckCoproduct:
    def check_connected_is_primitive(self):
        x = tripod(3)
        one = AlgebraElement.one(Skeleton.circle(), 3)
        assert coproduct(x) == tensor(x, one) + tensor(one, x)

    def check_exp_of_primitive_is_grouplike(self):
        x = circle_theta(3, Fraction(1, 2)) + tripod(3)
        assert is_grouplike(exp_trunc(x))

    def check_non_grouplike(self):
        x = AlgebraElement.one(Skeleton.circle(), 2) + circle_theta(2)
        x = x + multiply(circle_theta(2), circle_theta(2))
        assert not is_grouplike(x)

    def check_cocommutative(self):
        x = exp_trunc(circle_theta(3, Fraction(1, 2)))
        assert coproduct(x).flip() == coproduct(x)


class CheckStrandMaps:
    def check_duplicate_isolated_chord(self):
        t = chord_element(1, 0, 0, 2)
        doubled = duplicate(t, StrandMap.duplication(1, 0))
        expected = (chord_element(2, 0, 0, 2) + chord_element(2, 1, 1, 2)
                    + chord_element(2, 0, 1, 2, 2))
        assert reduced_equal(doubled, expected)

    def check_duplicate_is_multiplicative(self):
        x = chord_element(2, 0, 1, 2)
        y = chord_element(2, 1, 1, 2)
        smap = StrandMap.from_blocks((1, 2))
        assert reduced_equal(duplicate(multiply(x, y), smap),
                             multiply(duplicate(x, smap),
                                      duplicate(y, smap)))

    def check_from_blocks(self):
        smap = StrandMap.from_blocks((1, 1, 2))
        assert smap.source == 3
        assert smap.target == 4
        assert smap.lifts == ((0,), (1,), (2, 3))

    def check_embed(self):
        assert embed(chord_element(2, 0, 1, 2), 1, 3) == \
            chord_element(3, 1, 2, 2)

    def check_delete(self):
        x = chord_element(2, 0, 1, 2) + chord_element(2, 0, 0, 2)
        assert delete_strand(x, 1) == chord_element(1, 0, 0, 2)
        assert delete_strand(x, 0).is_zero()

    def check_permute(self):
        x = chord_element(3, 0, 1, 2)
        assert permute_strands(x, [2, 0, 1]) == chord_element(3, 0, 2, 2)
        smap = StrandMap(StrandMapKind.PERMUTE, 3, 3, [(2,), (0,), (1,)])
        assert apply_strand_map(x, smap) == permute_strands(x, [2, 0, 1])

    def check_bad_maps(self):
        with pytest.raises(PreconditionError):
            StrandMap.permutation([0, 0])
        with pytest.raises(PreconditionError):
            StrandMap(StrandMapKind.DUPLICATE, 2, 2, [(0, 1), (1,)])
        with pytest.raises(PreconditionError):
            StrandMap.deletion(2, 2)
        with pytest.raises(SkeletonMismatchError):
            duplicate(circle_theta(1), StrandMap.duplication(1, 0))

    def check_reduce_after_duplicate(self):
        x = duplicate(chord_element(2, 0, 1, 2), StrandMap.from_blocks((2, 1)))
        assert reduce(x) == (chord_element(3, 0, 2, 2)
                             + chord_element(3, 1, 2, 2))


def reduced_triples(t, split_left):
    """(Delta (x) id) t or (id (x) Delta) t with every factor reduced, as a
    dict from basis triples to coefficients."""
    out = {}

    def factor(d):
        return compute_basis(t.skeleton, d.degree()).reduce_diagram(d)

    for (left, right), c in t.terms.items():
        inner = left if split_left else right
        split = coproduct(AlgebraElement.from_diagram(inner, t.truncation))
        for (a, b), c2 in split.terms.items():
            triple = (a, b, right) if split_left else (left, a, b)
            for ra, ca in factor(triple[0]).items():
                for rb, cb in factor(triple[1]).items():
                    for rc, cc in factor(triple[2]).items():
                        key = (ra, rb, rc)
                        out[key] = out.get(key, 0) + c * c2 * ca * cb * cc
    return dict((k, v) for k, v in out.items() if v != 0)


def strand_element(n):
    t01 = chord_element(2, 0, 1, n)
    t11 = chord_element(2, 1, 1, n)
    return t01 + multiply(t01, t11) + power(t01 + t11, 3)


class CheckHopfAxioms:
    def check_coassociative(self):
        x = strand_element(3)
        delta = coproduct(x)
        assert reduced_triples(delta, True) == reduced_triples(delta, False)

    def check_coassociative_on_circle(self):
        x = exp_trunc(circle_theta(3, Fraction(1, 2)) + tripod(3))
        delta = coproduct(x)
        assert reduced_triples(delta, True) == reduced_triples(delta, False)

    def check_coproduct_is_multiplicative(self):
        x = strand_element(3)
        y = chord_element(2, 0, 0, 3) + power(chord_element(2, 0, 1, 3), 2)
        lhs = coproduct(multiply(x, y))
        rhs = tensor_multiply(coproduct(x), coproduct(y))
        assert reduce_tensor(lhs - rhs).is_zero()

    def check_duplicate_commutes_with_chord(self):
        x = chord_element(1, 0, 0, 3) + power(chord_element(1, 0, 0, 3), 2)
        doubled = duplicate(x, StrandMap.from_blocks((2,)))
        assert reduce(bracket(chord_element(2, 0, 1, 3), doubled)).is_zero()

    @pytest.mark.parametrize('n', [2, 3])
    def check_duplicate_commutes_with_phi(self, n):
        phi = solve_associator(n).phi.truncated(n).to_algebra()
        x = chord_element(1, 0, 0, n)
        tripled = duplicate(x, StrandMap.from_blocks((3,)))
        assert reduce(bracket(phi, tripled)).is_zero()
        if n == 3:
            # [t12, [t12, t23]] survives, so the bracket above is not empty.
            assert not reduce(bracket(phi,
                                      chord_element(3, 0, 1, n))).is_zero()

    @pytest.mark.slow
    def check_duplicate_is_multiplicative_degree_three(self):
        x = strand_element(3)
        y = chord_element(2, 0, 0, 3) + chord_element(2, 0, 1, 3)
        smap = StrandMap.from_blocks((1, 2))
        assert reduced_equal(duplicate(multiply(x, y), smap),
                             multiply(duplicate(x, smap),
                                      duplicate(y, smap)))
