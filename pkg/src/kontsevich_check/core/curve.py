"""Closed curves in R^3 given by finite Fourier series.

A curve file is a JSON list with one entry per link component:

    {"cos": [[ax, ay, az], ...], "sin": [[bx, by, bz], ...]}

cos[k] multiplies cos(k t) (cos[0] is the constant term) and sin[k]
multiplies sin((k + 1) t), for t in [0, 2 pi).
"""

import json
import logging

import numpy as np

from kontsevich_check.config import Config
from kontsevich_check.errors import InvalidCurveError


class FourierComponent(object):

    def __init__(self, cos, sin):
        self.cos = np.array(cos, dtype=float).reshape(-1, 3)
        self.sin = np.array(sin, dtype=float).reshape(-1, 3)
        self.cos_freq = np.arange(len(self.cos))
        self.sin_freq = np.arange(1, len(self.sin) + 1)

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)[..., None]
        return (np.cos(t * self.cos_freq) @ self.cos
                + np.sin(t * self.sin_freq) @ self.sin)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)[..., None]
        return (-np.sin(t * self.cos_freq) * self.cos_freq) @ self.cos \
            + (np.cos(t * self.sin_freq) * self.sin_freq) @ self.sin

    def second_derivative(self, t):
        t = np.asarray(t, dtype=float)[..., None]
        return (-np.cos(t * self.cos_freq) * self.cos_freq ** 2) @ self.cos \
            - (np.sin(t * self.sin_freq) * self.sin_freq ** 2) @ self.sin

    def linear(self, matrix, offset=None):
        cos = self.cos @ np.asarray(matrix, dtype=float).T
        sin = self.sin @ np.asarray(matrix, dtype=float).T
        if offset is not None:
            if not len(cos):
                cos = np.zeros((1, 3))
            cos[0] = cos[0] + np.asarray(offset, dtype=float)
        return FourierComponent(cos, sin)

    def to_json(self):
        return {'cos': self.cos.tolist(), 'sin': self.sin.tolist()}


class Curve(object):
    """A parametrized link: one FourierComponent per component."""

    def __init__(self, components):
        self.components = list(components)

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, list) or not data:
            raise InvalidCurveError('a curve is a non-empty list of components')
        components = []
        for i, comp in enumerate(data):
            try:
                components.append(FourierComponent(comp.get('cos', []),
                                                   comp.get('sin', [])))
            except (AttributeError, TypeError, ValueError) as e:
                raise InvalidCurveError('component {}: {}'.format(i + 1, e))
        return cls(components)

    @classmethod
    def from_file(cls, path):
        with open(path) as f:
            try:
                data = json.load(f)
            except ValueError as e:
                raise InvalidCurveError('{}: {}'.format(path, e))
        return cls.from_json(data)

    def to_json(self):
        return [c.to_json() for c in self.components]

    def __len__(self):
        return len(self.components)

    def evaluate(self, i, t):
        return self.components[i].evaluate(t)

    def derivative(self, i, t):
        return self.components[i].derivative(t)

    # Rigid motions and friends.

    def rotate(self, matrix):
        return Curve(c.linear(matrix) for c in self.components)

    def translate(self, offset):
        return Curve(c.linear(np.eye(3), offset) for c in self.components)

    def scale(self, factor):
        return Curve(c.linear(factor * np.eye(3)) for c in self.components)

    def mirror(self):
        """Reflection z -> -z."""
        return Curve(c.linear(np.diag([1.0, 1.0, -1.0]))
                     for c in self.components)

    # Sample-grid geometry.

    def grid(self, size=None):
        size = size or Config().get_grid()
        t = np.linspace(0.0, 2 * np.pi, size, endpoint=False)
        return t, [c.evaluate(t) for c in self.components]

    def centroid(self):
        _, points = self.grid()
        return np.concatenate(points).mean(axis=0)

    def diameter(self):
        _, points = self.grid()
        p = np.concatenate(points)
        return float(np.max(np.linalg.norm(p[:, None, :] - p[None, :, :],
                                           axis=2)))

    def min_distance(self):
        """Smallest distance between samples at different parameters."""
        _, points = self.grid()
        best = np.inf
        for i, p in enumerate(points):
            for j in range(i, len(points)):
                dist = np.linalg.norm(p[:, None, :] - points[j][None, :, :],
                                      axis=2)
                if i == j:
                    np.fill_diagonal(dist, np.inf)
                best = min(best, float(dist.min()))
        return best

    def min_speed(self):
        t, _ = self.grid()
        return min(float(np.linalg.norm(c.derivative(t), axis=1).min())
                   for c in self.components)

    def is_morse(self, eps=None):
        """Nondegenerate critical points of the height z on the grid."""
        eps = Config().get_embed_eps() if eps is None else eps
        t, _ = self.grid()
        for c in self.components:
            dz = c.derivative(t)[:, 2]
            flips = np.nonzero(np.sign(dz) != np.sign(np.roll(dz, -1)))[0]
            if not len(flips):
                return False
            ddz = c.second_derivative(t[flips])[:, 2]
            if np.any(np.abs(ddz) <= eps):
                return False
        return True

    def check(self):
        eps = Config().get_embed_eps()
        speed = self.min_speed()
        if speed <= eps:
            raise InvalidCurveError('speed {:.3g} is not bounded away from 0'
                                    ''.format(speed))
        distance = self.min_distance()
        if distance <= eps:
            raise InvalidCurveError('curve is not embedded: two samples at '
                                    'distance {:.3g}'.format(distance))
        if not self.is_morse():
            logging.warning('height function of the curve is not Morse on the '
                            'sample grid')
        return self
