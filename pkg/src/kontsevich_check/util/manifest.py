import json
import platform
import sys
from collections import OrderedDict

import numpy
import sympy

import kontsevich_check
from kontsevich_check.config import Config
from kontsevich_check.util.statistics import Statistics


class RunManifest(object):
    """What was run, with which configuration and seeds, and how long it
    took.  Every command emits one next to its result."""

    def __init__(self, command, argv=None):
        self.command = command
        self.argv = list(sys.argv[1:] if argv is None else argv)
        self.seeds = []
        self.inputs = OrderedDict()

    def add_seed(self, seed):
        if seed not in self.seeds:
            self.seeds.append(seed)

    def add_input(self, name, value):
        self.inputs[name] = value

    @staticmethod
    def versions():
        return OrderedDict([
            ('kontsevich_check', kontsevich_check.__version__),
            ('python', platform.python_version()),
            ('numpy', numpy.__version__),
            ('sympy', sympy.__version__),
        ])

    def to_json(self, include_timing=True):
        out = OrderedDict([
            ('command', self.command),
            ('argv', self.argv),
            ('config', _jsonable(Config().as_dict())),
            ('seeds', self.seeds),
            ('inputs', self.inputs),
            ('versions', self.versions()),
        ])
        if include_timing:
            out['timing'] = Statistics().timing()
        return out

    def write(self, path):
        with open(path, 'w') as f:
            json.dump(self.to_json(), f, indent=2)
            f.write('\n')


def _jsonable(value):
    if isinstance(value, dict):
        return OrderedDict((str(k), _jsonable(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    return str(value)
