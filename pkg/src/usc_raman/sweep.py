"""Deterministic parallel evaluation of independent grid points.

Every point runs with BLAS limited to one thread, in the parent process for
``workers == 1`` and in a process pool otherwise, so results do not depend on
the worker count. Results come back in input order; the first failing point
cancels the remaining work and is re-raised as :class:`GridPointError`.
"""

import os
from concurrent.futures import ProcessPoolExecutor

from threadpoolctl import threadpool_limits

from .errors import GridPointError

WORKERS_ENV = "USC_RAMAN_WORKERS"


def default_workers():
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _call(fn, index, point):
    with threadpool_limits(limits=1):
        try:
            return fn(point)
        except GridPointError:
            raise
        except Exception as exc:  # noqa: BLE001 - re-raised with the grid index
            raise GridPointError(index, _describe(point), f"{type(exc).__name__}: {exc}") from exc


def _describe(point):
    if hasattr(point, "omega_s") and hasattr(point, "omega_L"):
        return f"(omega_L={point.omega_L!r}, omega_s={point.omega_s!r})"
    return repr(point)


def map_points(fn, points, workers=1):
    """Evaluate ``fn`` on every point, preserving order."""
    points = list(points)
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(points) <= 1:
        return [_call(fn, i, pt) for i, pt in enumerate(points)]
    with ProcessPoolExecutor(max_workers=min(workers, len(points))) as pool:
        futures = [pool.submit(_call, fn, i, pt) for i, pt in enumerate(points)]
        try:
            return [f.result() for f in futures]
        except BaseException:
            for f in futures:
                f.cancel()
            raise
