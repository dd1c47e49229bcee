import json
import os
from fractions import Fraction

import pytest

from kontsevich_check.core.algebra import AlgebraElement
from kontsevich_check.core.associator import (COUNIT, HEXAGON, INVERSION,
                                              PENTAGON, AssociatorData,
                                              cache_path, lyndon_words,
                                              r_from_anomaly,
                                              solve_associator, standard_r,
                                              theta_anomaly,
                                              verify_associator_axioms,
                                              verify_horizontal)
from kontsevich_check.core.diagram import Skeleton, theta
from kontsevich_check.core.hopf import chord_element, exp_trunc, reduced_equal
from kontsevich_check.errors import PreconditionError


class CheckLyndon:
    @pytest.mark.parametrize('n, count', [(1, 2), (2, 1), (3, 2), (4, 3),
                                          (5, 6)])
    def check_counts(self, n, count):
        assert len(lyndon_words(n)) == count

    def check_degree_two(self):
        assert lyndon_words(2) == [(0, 1)]


class CheckSolveAssociator:
    @pytest.mark.parametrize('n', [2, 3])
    def check_axioms(self, n):
        data = solve_associator(n)
        assert verify_horizontal(data).passed()
        report = verify_associator_axioms(data)
        for axiom in [PENTAGON, HEXAGON, INVERSION, COUNIT]:
            assert report.passed(axiom), report.to_json()

    @pytest.mark.slow
    def check_axioms_degree_four(self):
        data = solve_associator(4)
        assert verify_horizontal(data).passed()
        assert verify_associator_axioms(data).passed()

    def check_degree_two_coefficient(self):
        data = solve_associator(3)
        assert abs(data.coefficients[(0, 1)]) == Fraction(1, 24)
        # The solution stays even.
        assert all(c == 0 for w, c in data.coefficients.items()
                   if len(w) == 3)

    def check_phi_is_grouplike_exp(self):
        data = solve_associator(2)
        assert data.phi.constant_term() == 1
        assert data.phi == data.lie_part().exp()

    def check_trivial_fails_hexagon(self):
        report = verify_horizontal(AssociatorData.trivial(2))
        assert report.passed(PENTAGON)
        assert report.passed(INVERSION)
        assert not report.passed(HEXAGON)
        assert (HEXAGON, 2) in report.failures()

    def check_truncated(self):
        data = solve_associator(3)
        low = data.truncated(2)
        assert low.truncation == 2
        assert verify_horizontal(low).passed()
        with pytest.raises(PreconditionError):
            low.truncated(3)

    def check_json(self):
        data = solve_associator(2)
        again = AssociatorData.from_json(json.loads(json.dumps(
            data.to_json())))
        assert again.coefficients == data.coefficients
        assert again.phi == data.phi

    def check_cache(self, test_config, tmp_path):
        test_config.cache_dir = str(tmp_path)
        data = solve_associator(2)
        path = cache_path(2, test_config.gauge_version)
        assert os.path.exists(path)
        assert solve_associator(2).coefficients == data.coefficients

    def check_unreadable_cache_is_ignored(self, test_config, tmp_path):
        test_config.cache_dir = str(tmp_path)
        with open(cache_path(2, test_config.gauge_version), 'w') as f:
            f.write('{"truncation": 2}')
        assert verify_horizontal(solve_associator(2)).passed()


class CheckAnomaly:
    @pytest.mark.parametrize('n', [1, 2, 3])
    def check_r_from_theta(self, n):
        r = r_from_anomaly(theta_anomaly(n))
        expected = exp_trunc(chord_element(2, 0, 1, n, Fraction(1, 2)))
        assert reduced_equal(r, expected)
        assert reduced_equal(r, standard_r(n).to_algebra())

    def check_truncation_argument(self):
        r = r_from_anomaly(theta_anomaly(3), 2)
        assert r.truncation == 2

    def check_preconditions(self):
        with pytest.raises(PreconditionError):
            r_from_anomaly(AlgebraElement.from_diagram(
                theta(Skeleton.circle()), 2))
        with pytest.raises(PreconditionError):
            r_from_anomaly(AlgebraElement.one(Skeleton.strands(1), 2))
