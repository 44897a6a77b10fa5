"""Exact-arithmetic period-index machinery for genus one curves."""

__version__ = "0.1.0"

from .kernels import BACKEND as KERNEL_BACKEND  # noqa: F401
