import os


def parse_framings(items):
    """Turn a list of 'component:framing' strings (1-based components)
    into a dict from 0-based component to framing."""
    framings = {}
    for item in items or []:
        comp, _, value = item.partition(':')
        if not value:
            raise ValueError(
                "framing '{}' is not of the form component:framing".format(
                    item))
        if int(comp) < 1:
            raise ValueError("framing '{}' names component {}; components "
                             "start at 1".format(item, comp))
        framings[int(comp) - 1] = int(value)
    return framings


class Config:
    __shared_state = {}

    def __init__(self):
        self.__dict__ = self.__shared_state
        if 'degree_cap' not in self.__dict__:
            self.set_defaults()

    def set_defaults(self):
        self.debug = False
        self.silent = False
        self.degree_cap = 4
        self.degree = 2
        self.seed = 0
        self.samples = 100000
        self.workers = 1
        # Trivalent vertices are sampled in a ball of radius
        # radius * (curve diameter) around the curve centroid.
        self.radius = 8.0
        self.rejection_eps = 1e-9
        self.rejection_limit = 0.01
        self.embed_eps = 1e-3
        self.grid = 512
        self.skeleton = 'circle'
        self.framings = {}
        self.oracle_file = None
        self.cache_dir = os.path.join(
            os.path.expanduser('~'), '.cache', 'kontsevich_check')
        self.full_relations = False
        self.gauge_version = 'least-norm-even-1'
        self.record_statistics = False
        self.render_diagrams = False

    def load_args(self, args):
        self.set_defaults()
        self.debug = args.debug
        self.silent = args.silent
        self.record_statistics = args.record_statistics
        for name in ['degree', 'degree_cap', 'seed', 'samples', 'workers',
                     'radius', 'skeleton', 'oracle_file', 'full_relations',
                     'render_diagrams']:
            value = getattr(args, name, None)
            if value is not None:
                setattr(self, name, value)
        if getattr(args, 'no_cache', False):
            self.cache_dir = None
        elif getattr(args, 'cache_dir', None) is not None:
            self.cache_dir = args.cache_dir
        self.framings = parse_framings(getattr(args, 'framing', None))

    def get_debug(self):
        return self.debug

    def get_silent(self):
        return self.silent

    def get_degree_cap(self):
        return self.degree_cap

    def get_degree(self):
        return self.degree

    def get_seed(self):
        return self.seed

    def get_samples(self):
        return self.samples

    def get_workers(self):
        return self.workers

    def get_radius(self):
        return self.radius

    def get_rejection_eps(self):
        return self.rejection_eps

    def get_rejection_limit(self):
        return self.rejection_limit

    def get_embed_eps(self):
        return self.embed_eps

    def get_grid(self):
        return self.grid

    def get_skeleton(self):
        return self.skeleton

    def get_framings(self):
        return self.framings

    def get_oracle_file(self):
        return self.oracle_file

    def get_cache_dir(self):
        return self.cache_dir

    def get_full_relations(self):
        return self.full_relations

    def get_gauge_version(self):
        return self.gauge_version

    def get_record_statistics(self):
        return self.record_statistics

    def get_render_diagrams(self):
        return self.render_diagrams

    def as_dict(self):
        """Configuration echo for the run manifest."""
        return dict(sorted(
            (k, v) for k, v in self.__dict__.items()
            if not k.startswith('_')))
