"""Ordered parallel map used by bias sweeps, temperature sweeps and fit restarts."""

import logging
from collections.abc import Callable, Iterable
from typing import TypeVar

from joblib import Parallel, delayed

from junctionlab import env
from junctionlab.prometheus.metrics import SWEEP_POINTS

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(func: Callable[[T], R], items: Iterable[T], *, kind: str = "sweep") -> list[R]:
    """Apply func to every item, in parallel when JUNCTIONLAB_THREADS allows it.

    Results always come back in input order, so the output does not depend on scheduling.
    The function and items must be picklable when more than one worker is used.
    """
    items = list(items)
    n_jobs = min(env.get_threads(), max(len(items), 1))
    SWEEP_POINTS.labels(kind=kind).inc(len(items))
    if n_jobs == 1:
        return [func(item) for item in items]
    logger.debug("Running %d %s points on %d workers.", len(items), kind, n_jobs)
    return Parallel(n_jobs=n_jobs)(delayed(func)(item) for item in items)
