"""Monte Carlo evaluation of configuration space integrals.

For a diagram with edges E, the integrand is the pullback of the product of
unit-area sphere forms under the map sending a configuration to its edge
directions.  The configuration space is oriented by its half-edges: a
univalent vertex contributes its curve parameter for its one half-edge, a
trivalent vertex contributes (x, y, z) for its three half-edges in cyclic
order, and the sign is that of the permutation from the edge order
(tail, head, tail, head, ...) to this vertex order.
"""

import concurrent.futures
import logging
import math
from collections import OrderedDict, namedtuple
from fractions import Fraction

import numpy as np

from kontsevich_check.config import Config
from kontsevich_check.core.algebra import (AlgebraElement, compute_basis,
                                           coordinates, reduce)
from kontsevich_check.core.diagram import (CanonicalDiagram, Skeleton, chord,
                                           enumerate_diagrams, theta)
from kontsevich_check.core.hopf import exp_trunc, multiply
from kontsevich_check.errors import (DegreeCapError, PreconditionError,
                                     SkeletonMismatchError, TruncationError)
from kontsevich_check.util.statistics import Statistics

NUMERIC_DEGREE_CAP = 2

BATCH = 4096


class McConfig(namedtuple('McConfig', 'samples seed radius workers '
                                      'rejection_eps rejection_limit')):

    @classmethod
    def from_config(cls):
        config = Config()
        mc = cls(config.get_samples(), config.get_seed(), config.get_radius(),
                 config.get_workers(), config.get_rejection_eps(),
                 config.get_rejection_limit())
        mc.check()
        return mc

    def check(self):
        if self.samples <= 0 or self.workers <= 0 or self.radius <= 0:
            raise PreconditionError('samples, workers and radius must be '
                                    'positive: {}'.format(self))
        return self


class Estimate(namedtuple('Estimate', 'value stderr samples seed rejections '
                                      'limit')):
    """Sample mean scaled to the integration volume, with its standard
    error."""

    def flagged(self):
        return self.samples > 0 and self.rejections > self.limit * self.samples

    def to_json(self):
        return OrderedDict([('value', self.value), ('stderr', self.stderr),
                            ('samples', self.samples), ('seed', self.seed),
                            ('rejections', self.rejections),
                            ('flagged', self.flagged())])


def exact(value):
    return Estimate(float(value), 0.0, 0, None, 0, 0.0)


def _tangent_frame(u):
    """Orthonormal p, q with p x q = u, for unit vectors u of shape (B, 3)."""
    helper = np.zeros_like(u)
    use_x = np.abs(u[:, 0]) < 0.9
    helper[use_x, 0] = 1.0
    helper[~use_x, 1] = 1.0
    p = helper - np.sum(helper * u, axis=1)[:, None] * u
    p /= np.linalg.norm(p, axis=1)[:, None]
    q = np.cross(u, p)
    return p, q


def direction_density(points, derivatives, columns, edges, eps=0.0):
    """Density of the pulled-back sphere forms against the coordinates.

    points: (B, V, 3) vertex positions; derivatives: (B, C, 3), the
    derivative of the position of vertex columns[c] along coordinate c;
    edges: (tail, head) vertex indices with 2 * len(edges) == C.
    Returns (density, rejected), both of shape (B,); rejected samples have
    an edge shorter than eps and density 0."""
    batch = points.shape[0]
    num_edges = len(edges)
    if derivatives.shape[1] != 2 * num_edges:
        raise PreconditionError('{} coordinates for {} edges'.format(
            derivatives.shape[1], num_edges))
    jacobian = np.zeros((batch, 2 * num_edges, 2 * num_edges))
    rejected = np.zeros(batch, dtype=bool)
    for e, (tail, head) in enumerate(edges):
        x = points[:, head] - points[:, tail]
        r = np.linalg.norm(x, axis=1)
        short = r <= eps
        rejected |= short
        r = np.where(short, 1.0, r)
        p, q = _tangent_frame(np.where(short[:, None], [[0.0, 0.0, 1.0]],
                                       x / r[:, None]))
        for c, v in enumerate(columns):
            if v == head:
                d = derivatives[:, c]
            elif v == tail:
                d = -derivatives[:, c]
            else:
                continue
            jacobian[:, 2 * e, c] = np.sum(p * d, axis=1) / r
            jacobian[:, 2 * e + 1, c] = np.sum(q * d, axis=1) / r
    density = np.linalg.det(jacobian) / (4 * np.pi) ** num_edges
    density[rejected] = 0.0
    return density, rejected


def _permutation_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class DiagramLayout(object):
    """Vertex, coordinate and edge bookkeeping for sampling one diagram."""

    def __init__(self, d):
        self.diagram = d
        self.legs = [[(v, s) for v, s in seq] for seq in d.univalent]
        univalent = [v for seq in d.univalent for v, _ in seq]
        trivalent = [v for v, _ in d.trivalent]
        self.vertices = univalent + trivalent
        index = dict((v, i) for i, v in enumerate(self.vertices))
        self.num_univalent = len(univalent)
        self.num_trivalent = len(trivalent)
        self.columns = [index[v] for v in univalent]
        grouped = list(univalent)
        for v, hs in d.trivalent:
            self.columns.extend([index[v]] * 3)
            grouped.extend(hs)
        owner = d.owners()
        self.edges = [(index[owner[h][0]], index[owner[k][0]])
                      for h, k in d.edges]
        half_edges = [h for edge in d.edges for h in edge]
        where = dict((h, i) for i, h in enumerate(grouped))
        self.orientation = _permutation_sign([where[h] for h in half_edges])

    def volume(self, radius):
        vol = 1.0
        for seq in self.legs:
            m = len(seq)
            if m:
                vol *= (2 * np.pi) ** m * m / math.factorial(m)
        return vol * (4.0 / 3.0 * np.pi * radius ** 3) ** self.num_trivalent

    def sample(self, curve, rng, batch, center, radius):
        """Positions (B, V, 3) and coordinate derivatives (B, C, 3)."""
        points = np.zeros((batch, len(self.vertices), 3))
        derivatives = np.zeros((batch, 2 * len(self.edges), 3))
        offset = 0
        for ci, seq in enumerate(self.legs):
            m = len(seq)
            if not m:
                continue
            # Uniform in the cell of configurations with this cyclic order.
            t = np.sort(rng.uniform(0.0, 2 * np.pi, size=(batch, m)), axis=1)
            shift = rng.integers(0, m, size=batch)
            t = t[np.arange(batch)[:, None],
                  (np.arange(m)[None, :] + shift[:, None]) % m]
            for k, (_, sign) in enumerate(seq):
                points[:, offset + k] = curve.evaluate(ci, t[:, k])
                derivatives[:, offset + k] = sign * curve.derivative(ci,
                                                                     t[:, k])
            offset += m
        for j in range(self.num_trivalent):
            direction = rng.standard_normal((batch, 3))
            direction /= np.linalg.norm(direction, axis=1)[:, None]
            r = radius * rng.uniform(0.0, 1.0, size=batch) ** (1.0 / 3.0)
            points[:, offset + j] = center + direction * r[:, None]
            col = self.num_univalent + 3 * j
            derivatives[:, col:col + 3] = np.eye(3)
        return points, derivatives


def _sample_worker(curve, d, count, stream, center, radius, eps):
    """(sum, sum of squares, count, rejections) of the integrand over
    `count` samples drawn from `stream`."""
    layout = DiagramLayout(d)
    rng = np.random.default_rng(stream)
    sums, squares, rejections = [], [], 0
    done = 0
    while done < count:
        batch = min(BATCH, count - done)
        points, derivatives = layout.sample(curve, rng, batch, center, radius)
        density, rejected = direction_density(points, derivatives,
                                              layout.columns, layout.edges,
                                              eps)
        values = layout.orientation * density
        sums.append(math.fsum(values))
        squares.append(math.fsum(values * values))
        rejections += int(rejected.sum())
        done += batch
    return math.fsum(sums), math.fsum(squares), count, rejections


def _check_numeric_degree(n):
    if n > NUMERIC_DEGREE_CAP:
        raise DegreeCapError(n, NUMERIC_DEGREE_CAP)


def _curve_skeleton(curve):
    return Skeleton.circles(len(curve))


def integrate_diagram(curve, d, mc=None, stream=None):
    """Estimate of the configuration space integral of one diagram."""
    if isinstance(d, CanonicalDiagram):
        d = d.diagram
    mc = mc or McConfig.from_config()
    _check_numeric_degree(d.degree())
    if d.skeleton != _curve_skeleton(curve):
        raise SkeletonMismatchError('diagram on {} for a curve with {} '
                                    'components'.format(d.skeleton,
                                                        len(curve)))
    if d.degree() == 0:
        return exact(1)
    stream = stream or np.random.SeedSequence(mc.seed)
    children = stream.spawn(mc.workers)
    counts = [mc.samples // mc.workers + (1 if w < mc.samples % mc.workers
                                          else 0)
              for w in range(mc.workers)]
    layout = DiagramLayout(d)
    radius = mc.radius * curve.diameter()
    center = curve.centroid()
    jobs = [(curve, d, counts[w], children[w], center, radius,
             mc.rejection_eps) for w in range(mc.workers)]
    with Statistics().sampling_time:
        if mc.workers == 1:
            parts = [_sample_worker(*jobs[0])]
        else:
            with concurrent.futures.ProcessPoolExecutor(mc.workers) as pool:
                futures = [pool.submit(_sample_worker, *job) for job in jobs]
                parts = [f.result() for f in futures]
    total = math.fsum(p[0] for p in parts)
    total_sq = math.fsum(p[1] for p in parts)
    count = sum(p[2] for p in parts)
    rejections = sum(p[3] for p in parts)
    Statistics().num_samples.inc(count)
    Statistics().num_rejections.inc(rejections)
    mean = total / count
    variance = max(total_sq / count - mean * mean, 0.0)
    volume = layout.volume(radius)
    estimate = Estimate(volume * mean,
                        volume * math.sqrt(variance / max(count - 1, 1)),
                        count, mc.seed, rejections, mc.rejection_limit)
    if estimate.flagged():
        logging.warning('%d of %d samples rejected for %r'
                        % (rejections, count, d))
    if layout.num_trivalent:
        logging.debug('trivalent vertices cut off at radius %.3g; the '
                      'integrand decays like distance^-4 outside' % radius)
    return estimate


def gauss_framing(curve, i, mc=None):
    """Gauss writhe integral of component i."""
    return integrate_diagram(curve, theta(_curve_skeleton(curve), i), mc)


def linking_number(curve, i, j, mc=None):
    if i == j:
        raise PreconditionError('linking number of a component with itself')
    a, b = sorted((i, j))
    return integrate_diagram(curve, chord(_curve_skeleton(curve), a, b), mc)


class NumericElement(object):
    """Float basis coordinates with standard errors, degree by degree."""

    def __init__(self, skeleton, truncation, values, errors):
        self.skeleton = skeleton
        self.truncation = truncation
        self.values = values
        self.errors = errors
        # Some integral behind these values rejected too many samples.
        self.flagged = False

    def bases(self):
        return [compute_basis(self.skeleton, k)
                for k in range(self.truncation + 1)]

    def to_algebra(self):
        out = AlgebraElement(self.skeleton, self.truncation)
        for basis, values in zip(self.bases(), self.values):
            for d, v in zip(basis.elements, values):
                out.add_diagram(d, Fraction(v))
        return out

    @classmethod
    def from_algebra(cls, x, errors):
        values = [[float(c) for c in coordinates(x, k)]
                  for k in range(x.truncation + 1)]
        return cls(x.skeleton, x.truncation, values, errors)

    def to_json(self):
        out = OrderedDict([('skeleton', repr(self.skeleton)),
                           ('truncation', self.truncation)])
        out['degrees'] = []
        for basis, values, errors in zip(self.bases(), self.values,
                                         self.errors):
            out['degrees'].append([OrderedDict([
                ('diagram', d.to_json()), ('value', v), ('stderr', e)])
                for d, v, e in zip(basis.elements, values, errors)])
        return out


def z_numeric(curve, n, mc=None):
    """Sum of I(D) / |Aut D| [D] over diagrams of degree <= n, in basis
    coordinates."""
    _check_numeric_degree(n)
    mc = mc or McConfig.from_config()
    curve.check()
    skeleton = _curve_skeleton(curve)
    diagrams = [c for k in range(1, n + 1)
                for c in enumerate_diagrams(skeleton, k, exclude_zero=True)]
    streams = np.random.SeedSequence(mc.seed).spawn(max(len(diagrams), 1))
    values = [[1.0]]
    variances = [[0.0]]
    for k in range(1, n + 1):
        dim = compute_basis(skeleton, k).dimension()
        values.append([0.0] * dim)
        variances.append([0.0] * dim)
    flagged = False
    for c, stream in zip(diagrams, streams):
        d = c.diagram
        estimate = integrate_diagram(curve, d, mc, stream)
        flagged = flagged or estimate.flagged()
        k = d.degree()
        coords = compute_basis(skeleton, k).coordinates({d: Fraction(1)})
        for idx, coeff in enumerate(coords):
            if coeff:
                scale = float(coeff) / c.aut_count
                values[k][idx] += scale * estimate.value
                variances[k][idx] += (scale * estimate.stderr) ** 2
        logging.debug('%r: %.5f +- %.5f (|Aut| = %d)'
                      % (d, estimate.value, estimate.stderr, c.aut_count))
    errors = [[math.sqrt(v) for v in row] for row in variances]
    z = NumericElement(skeleton, n, values, errors)
    z.flagged = flagged
    return z


def _add_image_variances(variances, x, scale):
    """Accumulate (scale * coordinates of x)^2 into variances."""
    for k in range(x.truncation + 1):
        if not x.parts[k]:
            continue
        for idx, c in enumerate(coordinates(x, k)):
            variances[k][idx] += (float(c) * scale) ** 2


def propagate_errors(z, factor, variances=None):
    """Variances of z * factor when only z carries errors."""
    n = z.truncation
    if variances is None:
        variances = [[0.0] * len(row) for row in z.values]
    for basis, errors in zip(z.bases(), z.errors):
        for d, e in zip(basis.elements, errors):
            if e:
                image = reduce(multiply(AlgebraElement.from_diagram(d, n),
                                        factor))
                _add_image_variances(variances, image, e)
    return variances


def frame_normalize(z, framings):
    """z * exp(-sum_i f_i / 2 theta_i); framings maps a component to an
    Estimate or a number."""
    if not z.values or z.values[0] != [1.0]:
        raise PreconditionError('degree-0 part of z must be 1')
    n = z.truncation
    skeleton = z.skeleton
    correction = AlgebraElement(skeleton, n)
    framing_errors = {}
    for i, f in sorted(framings.items()):
        if i >= len(skeleton):
            raise TruncationError('framing for component {} of a {} '
                                  'component link'.format(i + 1,
                                                          len(skeleton)))
        if isinstance(f, Estimate):
            framing_errors[i] = f.stderr
            f = f.value
        correction.add_diagram(theta(skeleton, i), -Fraction(f) / 2)
    factor = exp_trunc(correction)
    result = reduce(multiply(z.to_algebra(), factor))
    variances = propagate_errors(z, factor)
    for i, se in framing_errors.items():
        slope = reduce(multiply(
            AlgebraElement.from_diagram(theta(skeleton, i), n,
                                        Fraction(-1, 2)), result))
        _add_image_variances(variances, slope, se)
    errors = [[math.sqrt(v) for v in row] for row in variances]
    return NumericElement.from_algebra(result, errors)


# Polygonal oracles.

def _projection_matrix(direction):
    """Rotation taking `direction` to the z axis."""
    w = np.asarray(direction, dtype=float)
    w = w / np.linalg.norm(w)
    p, q = _tangent_frame(w[None, :])
    return np.array([p[0], q[0], w])


def _segments(curve, i, size, rotation):
    t = np.linspace(0.0, 2 * np.pi, size, endpoint=False)
    points = curve.evaluate(i, t) @ rotation.T
    return points, np.roll(points, -1, axis=0) - points


def _crossing_signs(a, da, b, db, same):
    """Signs of the crossings between the xy-projections of two polygons."""
    cross = da[:, None, 0] * db[None, :, 1] - da[:, None, 1] * db[None, :, 0]
    diff = b[None, :, :2] - a[:, None, :2]
    with np.errstate(divide='ignore', invalid='ignore'):
        s = (diff[..., 0] * db[None, :, 1]
             - diff[..., 1] * db[None, :, 0]) / cross
        t = (diff[..., 0] * da[:, None, 1]
             - diff[..., 1] * da[:, None, 0]) / cross
    hit = (cross != 0) & (s >= 0) & (s < 1) & (t >= 0) & (t < 1)
    if same:
        n = len(a)
        idx = np.arange(n)
        gap = np.abs(idx[:, None] - idx[None, :])
        hit &= (gap > 1) & (gap < n - 1) & (idx[:, None] < idx[None, :])
    za = a[:, None, 2] + s * da[:, None, 2]
    zb = b[None, :, 2] + t * db[None, :, 2]
    # (over x under)_z; swapping over and under flips the 2d cross product.
    signs = np.where(za > zb, np.sign(cross), -np.sign(cross))
    return int(np.sum(signs[hit]))


def polygon_writhe(curve, i, size=None, direction=(0.0, 0.0, 1.0)):
    """Signed crossing count of a polygonal projection of component i."""
    size = size or Config().get_grid()
    rotation = _projection_matrix(direction)
    a, da = _segments(curve, i, size, rotation)
    return _crossing_signs(a, da, a, da, True)


def mean_polygon_writhe(curve, i, directions=64, seed=0, size=None):
    """Average of projection writhes over random directions; converges to
    the Gauss writhe integral."""
    rng = np.random.default_rng(seed)
    vectors = rng.standard_normal((directions, 3))
    return float(np.mean([polygon_writhe(curve, i, size, v)
                          for v in vectors]))


def polygon_linking(curve, i, j, size=None):
    size = size or Config().get_grid()
    rotation = np.eye(3)
    a, da = _segments(curve, i, size, rotation)
    b, db = _segments(curve, j, size, rotation)
    return Fraction(_crossing_signs(a, da, b, db, False), 2)
