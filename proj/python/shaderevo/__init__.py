"""Python access to the shaderevo core: genomes, codegen, genetics and sessions."""

import json

from . import _core
from ._core import Error

__all__ = [
    "Error",
    "Session",
    "catalog",
    "compile",
    "crossover",
    "interpret",
    "minimal_genome",
    "mutate",
    "normalize",
    "random_genome",
    "validate",
]

# Genomes are passed around as their canonical JSON text.
minimal_genome = _core.minimal_genome
normalize = _core.normalize
random_genome = _core.random_genome
mutate = _core.mutate
crossover = _core.crossover
validate = _core.validate


def catalog():
    return json.loads(_core.catalog())


def compile(genome):
    return json.loads(_core.compile(genome))


def interpret(genome, context=None):
    return json.loads(_core.interpret(genome, json.dumps(context or {})))


class Session:
    def __init__(self, config=None, *, _inner=None):
        self._inner = _inner or _core.Session(json.dumps(config) if config else "")

    @classmethod
    def replay(cls, lines):
        return cls(_inner=_core.Session.replay(list(lines)))

    def start(self, seed):
        self._inner.start(seed)

    def score(self, individual_id, value):
        self._inner.score(individual_id, value)

    def breed(self, parents=None):
        return self._inner.breed(tuple(parents) if parents else None)

    def save(self, individual_id):
        return self._inner.save(individual_id)

    def population(self):
        return json.loads(self._inner.population())

    def config(self):
        return json.loads(self._inner.config())

    def log(self):
        return list(self._inner.log())
