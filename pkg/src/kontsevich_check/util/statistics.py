import logging
import time

from kontsevich_check.config import Config


class Statistic(object):
    def __init__(self, name):
        self.name = name


class Counter(Statistic):
    def __init__(self, name):
        super(Counter, self).__init__(name)
        self.counter = 0

    def inc(self, amount=1):
        self.counter += amount

    def __repr__(self):
        return '{}: {}'.format(self.name, self.counter)


class Timer(Statistic):
    def __init__(self, name):
        super(Timer, self).__init__(name)
        self.start_time = None
        self.time = 0
        self.depth = 0

    def start(self):
        # Timers nest when a basis is built while solving an associator.
        if self.start_time is None:
            self.start_time = time.time()
        self.depth += 1

    def stop(self):
        self.depth -= 1
        if self.depth == 0:
            self.time += time.time() - self.start_time
            self.start_time = None

    def __enter__(self):
        self.start()
        return self

    def __exit__(self, *exc):
        self.stop()
        return False

    def get_time(self):
        return self.time

    def __repr__(self):
        return '{}: {:.3f}s'.format(self.name, self.get_time())


class Average(Statistic):
    def __init__(self, name):
        super(Average, self).__init__(name)
        self.sum = 0.0
        self.counter = 0

    def record(self, val):
        self.sum += val
        self.counter += 1

    def get_avg(self):
        if self.counter == 0:
            return None
        else:
            return self.sum / self.counter

    def __repr__(self):
        return '{}: {}'.format(self.name, self.get_avg())


class Statistics:
    __shared_state = {}

    def __init__(self):
        self.__dict__ = self.__shared_state
        if 'start_time' not in self.__dict__:
            self.init()

    def init(self):
        self.start_time = time.time()
        self.num_canonicalizations = Counter('canonicalizations')
        self.num_relations = Counter('relations')
        self.num_eliminated_rows = Counter('eliminated_rows')
        self.num_samples = Counter('samples')
        self.num_rejections = Counter('rejections')
        self.avg_basis_dimension = Average('basis_dimension')
        self.basis_time = Timer('basis_time')
        self.associator_time = Timer('associator_time')
        self.tangle_time = Timer('tangle_time')
        self.sampling_time = Timer('sampling_time')

    def counters(self):
        return [self.num_canonicalizations, self.num_relations,
                self.num_eliminated_rows, self.num_samples,
                self.num_rejections]

    def timers(self):
        return [self.basis_time, self.associator_time, self.tangle_time,
                self.sampling_time]

    def timing(self):
        timing = dict((t.name, round(t.get_time(), 6)) for t in self.timers())
        timing['wall_time'] = round(time.time() - self.start_time, 6)
        return timing

    def dump(self):
        if not Config().get_record_statistics():
            return
        for c in self.counters():
            logging.info('%s', c)
        logging.info('%s', self.avg_basis_dimension)
        for t in self.timers():
            logging.info('%s', t)
