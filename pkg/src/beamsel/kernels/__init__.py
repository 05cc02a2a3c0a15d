"""Backend dispatch for the numeric kernels.

The environment variable BEAMSEL_BACKEND picks the implementation:

* ``numba`` -- require the JIT-compiled kernels (ImportError if missing),
* ``numpy`` -- force the pure-numpy fallback,
* unset / ``auto`` -- numba when importable, numpy otherwise.

Both backends expose the same four functions with identical semantics;
``benchmarks/bench_kernels.py`` compares their throughput.
"""

import os

_choice = os.environ.get("BEAMSEL_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy"):
    raise ImportError(
        f"BEAMSEL_BACKEND must be 'numba', 'numpy' or unset, got {_choice!r}"
    )

if _choice == "numpy":
    from . import numpy_impl as _impl
elif _choice == "numba":
    from . import numba_impl as _impl
else:
    try:
        from . import numba_impl as _impl
    except ImportError:
        from . import numpy_impl as _impl

BACKEND = _impl.BACKEND
trace_inv_gram = _impl.trace_inv_gram
exhaustive_search = _impl.exhaustive_search
border_scores = _impl.border_scores
aco_sweep = _impl.aco_sweep

__all__ = [
    "BACKEND",
    "trace_inv_gram",
    "exhaustive_search",
    "border_scores",
    "aco_sweep",
]
