"""Hot numeric kernels with a selectable backend.

``DEFINETTI_BACKEND=numpy`` forces the pure-numpy path; otherwise the numba
path is used when numba imports. Both modules expose the same functions, all
taking the shared log-factorial table as their last argument.
"""

import os

from . import _numpy

_requested = os.environ.get("DEFINETTI_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"DEFINETTI_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

impl = _numpy
if _requested == "numba":
    try:
        from . import _numba as impl
    except ImportError:  # numba missing; numpy path is a full replacement
        impl = _numpy

BACKEND = "numba" if impl is not _numpy else "numpy"


def get(name: str):
    """Return a kernel module by backend name (used by tests and benchmarks)."""
    if name == "numpy":
        return _numpy
    if name == "numba":
        from . import _numba
        return _numba
    raise ValueError(f"unknown backend {name!r}")


binary_entropy = impl.binary_entropy
log_marginal = impl.log_marginal
log_mixture = impl.log_mixture
divergence_tv = impl.divergence_tv
cmi = impl.cmi
cmi_table = impl.cmi_table
cond_div = impl.cond_div
cond_div_table = impl.cond_div_table
