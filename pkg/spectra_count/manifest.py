import time
from contextlib import contextmanager

from .helpers import canonical_json


class RunManifest:
    """
    Everything needed to repeat a run: resolved configuration, where the
    matrix came from, tool version and wall-clock timings per phase.
    """

    def __init__(self, config, provenance, version, timings=None):
        self.config = config
        self.provenance = dict(provenance)
        self.version = version
        self.timings = dict(timings or {})

    @contextmanager
    def timed(self, phase):
        started = time.perf_counter()
        try:
            yield
        finally:
            self.timings[phase] = self.timings.get(phase, 0.0) + time.perf_counter() - started

    def to_dict(self):
        config = self.config.to_dict() if hasattr(self.config, "to_dict") else dict(self.config)
        return {
            "config": config,
            "provenance": self.provenance,
            "version": self.version,
            "timings": self.timings,
        }

    def to_json(self):
        return canonical_json(self.to_dict())
