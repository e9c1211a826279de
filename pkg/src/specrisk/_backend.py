"""Backend selection: compiled step-function kernels with a numpy fallback.

The compiled module is built from ``_kernels_c.pyx`` at install time. When it
is missing (e.g. running straight from a source tree), the pure-numpy
implementation in ``_kernels_py`` takes over with identical semantics.
"""

from __future__ import annotations

try:
    from . import _kernels_c as _impl

    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on the install
    from . import _kernels_py as _impl

    BACKEND = "python"

sort_merge = _impl.sort_merge
prefix_integrals = _impl.prefix_integrals
integral_upto = _impl.integral_upto
spectral_sum = _impl.spectral_sum
rank_weights = _impl.rank_weights
sup_scaled_average = _impl.sup_scaled_average
sup_two_sided = _impl.sup_two_sided


def get_backend(name):
    """Return a kernel module by name ("compiled" | "python"); for benchmarks."""
    if name == "python":
        from . import _kernels_py

        return _kernels_py
    if name == "compiled":
        from . import _kernels_c

        return _kernels_c
    raise ValueError(f"unknown backend {name!r}")
