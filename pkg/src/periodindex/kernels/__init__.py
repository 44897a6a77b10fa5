"""Kernel backend selection.

The compiled extension is preferred when it was built; otherwise the
pure-Python twins are used.  ``BACKEND`` records the choice so tests and the
benchmark can report it, and PERIODINDEX_PURE=1 forces the fallback.
"""

import os

from . import pure

if os.environ.get("PERIODINDEX_PURE"):
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _fastcore as _impl

        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = pure
        BACKEND = "pure"

count_points_fp = _impl.count_points_fp
torsion_count_fp = _impl.torsion_count_fp
conic_solvable_odd = _impl.conic_solvable_odd
conic_solvable_two = _impl.conic_solvable_two

# F_{p^2} paths and the witness helper are shared (cold paths).
count_points_fp2 = pure.count_points_fp2
torsion_count_fp2 = pure.torsion_count_fp2
conic_witness = pure.conic_witness
f2_mul = pure.f2_mul
f2_inv = pure.f2_inv
f2_pow = pure.f2_pow
