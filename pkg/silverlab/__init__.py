"""Silver conditions, density and coalition experiments
"""

__version__ = "0.1.0"
import inspect
from typing import Dict, List, Type

from silverlab import experiments


def all_subclasses(cls):
    return set(cls.__subclasses__()).union(
        [s for c in cls.__subclasses__() for s in all_subclasses(c)]
    )


def non_abc_subclasses(cls):
    return list(x for x in all_subclasses(cls) if not inspect.isabstract(x))


ALL_EXPERIMENTS: List[Type[experiments.ExperimentBase]] = sorted(
    non_abc_subclasses(experiments.ExperimentBase), key=lambda c: c.name
)
EXPERIMENTS_BY_NAME: Dict[str, Type[experiments.ExperimentBase]] = {
    c.name: c for c in ALL_EXPERIMENTS
}
