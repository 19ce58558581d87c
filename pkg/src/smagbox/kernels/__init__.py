"""Per-grid-point kernels with a selectable backend.

Every kernel takes C-contiguous float64 arrays of shape
(ncomp, npoints): 3 rows for a vector sampled on the grid, 9 for a
row-major velocity gradient (component r, direction c at row 3*r + c),
6 for symmetric pair products. Reductions return python floats.

The backend is fixed once at import time from the environment:

* ``SMAGBOX_NUMBA=0`` (also ``off``, ``false``, ``numpy``) forces the
  pure numpy implementations.
* ``SMAGBOX_NUMBA=1`` (also ``on``, ``true``, ``numba``) requires the
  compiled backend and raises ImportError if numba is unavailable.
* unset or ``auto``: compiled backend when numba imports, numpy
  otherwise.

``SMAGBOX_THREADS=<k>`` caps the numba thread pool, which is the knob
to reach for when runs must be bitwise reproducible across machines
(set it to 1) or when sharing a node.
"""

import os

from . import numpy_impl

_EXPORTED = (
    "sum_sq",
    "dot_sum",
    "sum_magnitude_cubed",
    "max_magnitude",
    "strain_magnitude_cubed",
    "gradient_flux",
    "strain_flux",
    "convective",
    "outer_product_sym",
)

SYM_PAIRS = numpy_impl.SYM_PAIRS


def _want_numba():
    flag = os.environ.get("SMAGBOX_NUMBA", "auto").strip().lower()
    if flag in ("", "auto"):
        return None
    if flag in ("0", "off", "false", "no", "numpy"):
        return False
    if flag in ("1", "on", "true", "yes", "numba"):
        return True
    raise ValueError(f"SMAGBOX_NUMBA={flag!r} not understood; use 0, 1, or auto")


def _cap_threads():
    raw = os.environ.get("SMAGBOX_THREADS", "").strip()
    if not raw:
        return
    import numba

    want = max(1, int(raw))
    numba.set_num_threads(min(want, numba.config.NUMBA_NUM_THREADS))


def _select():
    want = _want_numba()
    if want is False:
        return numpy_impl, "numpy"
    try:
        from . import numba_impl
    except ImportError:
        if want is True:
            raise
        return numpy_impl, "numpy"
    _cap_threads()
    return numba_impl, "numba"


_impl, BACKEND = _select()

for _name in _EXPORTED:
    globals()[_name] = getattr(_impl, _name)


def get_backend(name):
    """Return a backend module by name ("numpy" or "numba") for side-by-side use."""
    if name == "numpy":
        return numpy_impl
    if name == "numba":
        from . import numba_impl

        return numba_impl
    raise ValueError(f"unknown kernel backend {name!r}")


__all__ = list(_EXPORTED) + ["BACKEND", "SYM_PAIRS", "get_backend"]
