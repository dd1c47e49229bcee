import math
from fractions import Fraction

import numpy as np
import pytest

from kontsevich_check.core.algebra import AlgebraElement, reduce
from kontsevich_check.core.comparison import round_circle
from kontsevich_check.core.curve import Curve
from kontsevich_check.core.diagram import (Diagram, Skeleton, canonicalize,
                                           chord, theta)
from kontsevich_check.core.hopf import exp_trunc
from kontsevich_check.core.integrator import (DiagramLayout, Estimate,
                                              McConfig, NumericElement,
                                              _tangent_frame,
                                              direction_density,
                                              frame_normalize, gauss_framing,
                                              integrate_diagram,
                                              linking_number,
                                              mean_polygon_writhe,
                                              polygon_linking,
                                              polygon_writhe, z_numeric)
from kontsevich_check.core.tangle import TangleWord
from kontsevich_check.errors import (DegreeCapError, InvalidCurveError,
                                     PreconditionError, SkeletonMismatchError,
                                     TruncationError)


def mc_config(samples=20000, seed=0, workers=1, rejection_eps=1e-9):
    return McConfig(samples, seed, 8.0, workers, rejection_eps, 0.01)


def rotation():
    a, b = 0.3, 0.7
    rz = np.array([[math.cos(a), -math.sin(a), 0.0],
                   [math.sin(a), math.cos(a), 0.0],
                   [0.0, 0.0, 1.0]])
    rx = np.array([[1.0, 0.0, 0.0],
                   [0.0, math.cos(b), -math.sin(b)],
                   [0.0, math.sin(b), math.cos(b)]])
    return rz @ rx


def agrees(estimate, expected, slack=0.02):
    return abs(estimate.value - expected) <= 4 * estimate.stderr + slack


@pytest.fixture
def hopf(sample_input):
    return Curve.from_file(sample_input('curves', 'hopf.json'))


@pytest.fixture
def trefoil(sample_input):
    return Curve.from_file(sample_input('curves', 'trefoil.json'))


class CheckCurve:
    def check_round_circle(self):
        curve = round_circle()
        assert len(curve) == 1
        assert curve.diameter() == pytest.approx(2.0)
        assert np.allclose(curve.centroid(), 0.0)
        assert curve.min_speed() == pytest.approx(1.0)
        assert curve.check() is curve

    def check_transforms(self, trefoil):
        t = np.linspace(0.0, 2 * np.pi, 7)
        p = trefoil.evaluate(0, t)
        assert np.allclose(trefoil.scale(2.0).evaluate(0, t), 2 * p)
        assert np.allclose(trefoil.translate([1, 2, 3]).evaluate(0, t),
                           p + [1, 2, 3])
        assert np.allclose(trefoil.mirror().evaluate(0, t),
                           p * [1, 1, -1])
        assert np.allclose(trefoil.rotate(rotation()).evaluate(0, t),
                           p @ rotation().T)

    def check_derivative(self, trefoil):
        t = np.linspace(0.1, 6.0, 11)
        h = 1e-6
        fd = (trefoil.evaluate(0, t + h) - trefoil.evaluate(0, t - h)) / (2 * h)
        assert np.allclose(trefoil.derivative(0, t), fd, atol=1e-6)

    def check_json(self, trefoil):
        again = Curve.from_json(trefoil.to_json())
        t = np.linspace(0.0, 2 * np.pi, 5)
        assert np.allclose(again.evaluate(0, t), trefoil.evaluate(0, t))

    @pytest.mark.parametrize('data', [
        [],
        {'cos': [[0, 0, 0]]},
        [{'cos': [[0, 0]]}],
        [['not', 'a', 'component']],
    ])
    def check_bad_json(self, data):
        with pytest.raises(InvalidCurveError):
            Curve.from_json(data)

    def check_not_embedded(self):
        figure_eight = Curve.from_json([{'sin': [[1, 0, 0], [0, 1, 0]]}])
        with pytest.raises(InvalidCurveError):
            figure_eight.check()

    def check_not_regular(self):
        point = Curve.from_json([{'cos': [[1, 2, 3]]}])
        with pytest.raises(InvalidCurveError):
            point.check()

    def check_morse(self, trefoil):
        assert trefoil.is_morse()
        assert not round_circle().is_morse()


class CheckDirectionDensity:
    def check_gauss_kernel(self):
        rng = np.random.default_rng(1)
        points = rng.standard_normal((50, 2, 3))
        derivatives = rng.standard_normal((50, 2, 3))
        density, rejected = direction_density(points, derivatives, [0, 1],
                                              [(0, 1)])
        x = points[:, 0] - points[:, 1]
        r = np.linalg.norm(x, axis=1)
        kernel = np.sum(x * np.cross(derivatives[:, 0], derivatives[:, 1]),
                        axis=1) / (4 * np.pi * r ** 3)
        assert not rejected.any()
        assert np.allclose(density, kernel)

    def check_trivalent_against_finite_differences(self, trefoil):
        times = np.array([0.4, 2.1, 4.4])
        w = np.array([0.3, -0.2, 0.5])
        edges = [(0, 3), (1, 3), (2, 3)]

        def directions(c):
            legs = [trefoil.evaluate(0, np.array([c[i]]))[0]
                    for i in range(3)]
            x = [c[3:] - leg for leg in legs]
            return [v / np.linalg.norm(v) for v in x]

        coords = np.concatenate([times, w])
        base = directions(coords)
        frames = [_tangent_frame(u[None, :]) for u in base]
        h = 1e-6
        jacobian = np.zeros((6, 6))
        for c in range(6):
            step = np.zeros(6)
            step[c] = h
            plus, minus = directions(coords + step), directions(coords - step)
            for e in range(3):
                du = (plus[e] - minus[e]) / (2 * h)
                jacobian[2 * e, c] = np.dot(frames[e][0][0], du)
                jacobian[2 * e + 1, c] = np.dot(frames[e][1][0], du)
        expected = np.linalg.det(jacobian) / (4 * np.pi) ** 3

        points = np.zeros((1, 4, 3))
        points[0, :3] = trefoil.evaluate(0, times)
        points[0, 3] = w
        derivatives = np.zeros((1, 6, 3))
        derivatives[0, :3] = trefoil.derivative(0, times)
        derivatives[0, 3:] = np.eye(3)
        density, _ = direction_density(points, derivatives,
                                       [0, 1, 2, 3, 3, 3], edges)
        assert density[0] == pytest.approx(expected, rel=1e-5)

    def check_rejection(self):
        points = np.zeros((3, 2, 3))
        points[:, 1, 0] = [1.0, 1e-12, 2.0]
        derivatives = np.ones((3, 2, 3))
        density, rejected = direction_density(points, derivatives, [0, 1],
                                              [(0, 1)], eps=1e-9)
        assert list(rejected) == [False, True, False]
        assert density[1] == 0.0

    def check_shape_mismatch(self):
        with pytest.raises(PreconditionError):
            direction_density(np.zeros((1, 2, 3)), np.zeros((1, 3, 3)),
                              [0, 1, 1], [(0, 1)])


class CheckLayout:
    def check_chord_volume(self):
        layout = DiagramLayout(theta(Skeleton.circle()))
        # Two points in cyclic order on one circle.
        assert layout.volume(1.0) == pytest.approx((2 * np.pi) ** 2)
        assert layout.orientation in (1, -1)

    def check_tripod_bookkeeping(self):
        d = canonicalize(Diagram(Skeleton.circle(),
                                 [[(0, 1), (1, 1), (2, 1)]],
                                 [(3, (4, 5, 6))],
                                 [(0, 4), (1, 5), (2, 6)])).diagram
        layout = DiagramLayout(d)
        assert layout.num_univalent == 3
        assert layout.num_trivalent == 1
        assert layout.columns == [0, 1, 2, 3, 3, 3]
        assert sorted(layout.edges) == [(0, 3), (1, 3), (2, 3)]
        assert layout.volume(2.0) == pytest.approx(
            (2 * np.pi) ** 3 / 2 * 4.0 / 3.0 * np.pi * 8.0)


class CheckIntegrals:
    def check_hopf_linking(self, hopf):
        estimate = linking_number(hopf, 0, 1, mc_config())
        assert agrees(estimate, 1.0)
        assert estimate.samples == 20000
        assert not estimate.flagged()
        assert polygon_linking(hopf, 0, 1) == 1
        assert linking_number(hopf, 1, 0, mc_config()) == estimate

    def check_round_circle_writhe(self):
        estimate = gauss_framing(round_circle(), 0, mc_config())
        assert abs(estimate.value) < 1e-9
        assert polygon_writhe(round_circle(), 0) == 0

    def check_mirror_negates(self, trefoil):
        a = gauss_framing(trefoil, 0, mc_config(5000))
        b = gauss_framing(trefoil.mirror(), 0, mc_config(5000))
        assert b.value == pytest.approx(-a.value, rel=1e-9, abs=1e-12)
        assert polygon_writhe(trefoil.mirror(), 0) == \
            -polygon_writhe(trefoil, 0)

    def check_similarity_invariance(self, trefoil):
        a = gauss_framing(trefoil, 0, mc_config(5000))
        moved = trefoil.rotate(rotation()).scale(3.0).translate([1, -2, 5])
        b = gauss_framing(moved, 0, mc_config(5000))
        assert b.value == pytest.approx(a.value, rel=1e-7)

    def check_seed_determinism(self, hopf):
        a = linking_number(hopf, 0, 1, mc_config(3000, seed=7))
        b = linking_number(hopf, 0, 1, mc_config(3000, seed=7))
        c = linking_number(hopf, 0, 1, mc_config(3000, seed=8))
        assert a == b
        assert a.value != c.value
        assert a.seed == 7

    def check_workers(self, hopf):
        a = linking_number(hopf, 0, 1, mc_config(4000, seed=3, workers=2))
        b = linking_number(hopf, 0, 1, mc_config(4000, seed=3, workers=2))
        assert a == b
        assert a.samples == 4000
        assert agrees(a, 1.0, 0.05)

    def check_rejections_flagged(self, hopf):
        estimate = linking_number(hopf, 0, 1, mc_config(1000,
                                                        rejection_eps=10.0))
        assert estimate.rejections == 1000
        assert estimate.flagged()
        assert estimate.value == 0.0

    def check_degree_zero_is_exact(self):
        estimate = integrate_diagram(round_circle(),
                                     Diagram.empty(Skeleton.circle()),
                                     mc_config())
        assert estimate.value == 1.0
        assert estimate.stderr == 0.0

    def check_errors(self, hopf):
        crossed = Diagram.from_chords(Skeleton.circle(),
                                      [['a', 'b', 'c', 'a', 'b', 'c']])
        with pytest.raises(DegreeCapError):
            integrate_diagram(round_circle(), crossed, mc_config())
        with pytest.raises(SkeletonMismatchError):
            integrate_diagram(hopf, theta(Skeleton.circle()), mc_config())
        with pytest.raises(PreconditionError):
            linking_number(hopf, 1, 1, mc_config())
        with pytest.raises(PreconditionError):
            McConfig(0, 0, 8.0, 1, 1e-9, 0.01).check()

    def check_config_defaults(self, test_config, hopf):
        test_config.samples = 1000
        test_config.seed = 5
        estimate = linking_number(hopf, 0, 1)
        assert estimate.samples == 1000
        assert estimate.seed == 5

    def check_trefoil_matches_word_chirality(self, trefoil, sample_input):
        word = TangleWord.from_file(sample_input('tangles', 'trefoil.tangle'))
        assert polygon_writhe(trefoil, 0) == word.writhe(0) == 3
        assert gauss_framing(trefoil, 0, mc_config(5000)).value > 0

    def check_planar_writhe_with_workers(self):
        estimate = gauss_framing(round_circle(), 0,
                                 mc_config(100000, workers=2))
        assert abs(estimate.value) <= 0.01

    @pytest.mark.slow
    def check_million_samples(self, hopf):
        planar = gauss_framing(round_circle(), 0,
                               mc_config(1000000, workers=4))
        assert abs(planar.value) <= 0.01
        link = linking_number(hopf, 0, 1, mc_config(1000000, workers=4))
        assert link.stderr <= 0.02
        assert abs(link.value - 1.0) <= 3 * link.stderr
        assert link.samples == 1000000

    @pytest.mark.slow
    def check_writhe_oracle(self, trefoil):
        estimate = gauss_framing(trefoil, 0, mc_config(200000))
        assert agrees(estimate, mean_polygon_writhe(trefoil, 0), 0.5)


class CheckNumericElement:
    def check_z_numeric_round_circle(self):
        z = z_numeric(round_circle(), 2, mc_config(4000))
        assert z.values[0] == [1.0]
        assert abs(z.values[1][0]) < 1e-9
        assert len(z.values[2]) == 2
        assert not z.flagged

    def check_z_numeric_hopf_degree_one(self, hopf):
        z = z_numeric(hopf, 1, mc_config())
        key = canonicalize(chord(Skeleton.circles(2), 0, 1)).diagram
        idx = z.bases()[1].index[key]
        assert abs(z.values[1][idx] - 1.0) <= 4 * z.errors[1][idx] + 0.02
        again = z_numeric(hopf, 1, mc_config())
        assert again.values == z.values

    def check_z_numeric_cap(self):
        with pytest.raises(DegreeCapError):
            z_numeric(round_circle(), 3, mc_config())

    def check_algebra_round_trip(self):
        x = exp_trunc(AlgebraElement.from_diagram(
            theta(Skeleton.circle()), 2, Fraction(3, 2)))
        z = NumericElement.from_algebra(x, [[0.0], [0.0], [0.0, 0.0]])
        assert z.values[1] == [1.5]
        assert reduce(z.to_algebra()) == reduce(x)
        data = z.to_json()
        assert data['skeleton'] == 'circle'
        assert [len(d) for d in data['degrees']] == [1, 1, 2]

    def check_frame_normalize(self):
        x = exp_trunc(AlgebraElement.from_diagram(
            theta(Skeleton.circle()), 2, Fraction(3, 2)))
        z = NumericElement.from_algebra(x, [[0.0], [0.0], [0.0, 0.0]])
        plain = frame_normalize(z, {0: 3})
        assert plain.values == [[1.0], [0.0], [0.0, 0.0]]
        framing = Estimate(3.0, 0.1, 1000, 0, 0, 0.01)
        framed = frame_normalize(z, {0: framing})
        assert framed.values == plain.values
        assert framed.errors[1][0] == pytest.approx(0.05)
        assert framed.errors[2] == [0.0, 0.0]

    def check_frame_normalize_errors(self):
        z = NumericElement.from_algebra(
            AlgebraElement.one(Skeleton.circle(), 1), [[0.0], [0.0]])
        with pytest.raises(TruncationError):
            frame_normalize(z, {1: 0})
        z.values[0] = [2.0]
        with pytest.raises(PreconditionError):
            frame_normalize(z, {0: 0})
