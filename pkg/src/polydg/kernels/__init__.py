"""Backend dispatch for the hot predictor kernel.

POLYDG_BACKEND selects the implementation: "numba" (default) or "numpy".
If numba is not importable the numpy path is used automatically.
"""

import os

STATUS_OK = 0
STATUS_INADMISSIBLE = 1
STATUS_DIVERGED = 2


def backend_name():
    name = os.environ.get("POLYDG_BACKEND", "numba").lower()
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown POLYDG_BACKEND={name!r}")
    if name == "numba":
        try:
            import numba  # noqa: F401
        except ImportError:
            name = "numpy"
    return name


def get_backend(name=None):
    name = name or backend_name()
    if name == "numba":
        from . import numba_impl as mod
    else:
        from . import numpy_impl as mod
    return mod


def predictor_context(disc, name=None):
    """Cached backend context for a discretization."""
    name = name or backend_name()
    cache = getattr(disc, "_kernel_ctx", None)
    if cache is None:
        cache = {}
        disc._kernel_ctx = cache
    if name not in cache:
        cache[name] = get_backend(name).prepare(disc)
    return name, cache[name]
