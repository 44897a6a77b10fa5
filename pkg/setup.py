"""Build script: compiles the fast kernel extension when Cython and a C
compiler are available, and falls back to the pure-Python kernels otherwise.

    python setup.py build_ext --inplace     # compile periodindex.kernels._fastcore
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/periodindex/kernels/_fastcore.pyx"],
        language_level=3,
        compiler_directives={"boundscheck": False, "wraparound": False, "cdivision": True},
    )
    for ext in ext_modules:
        ext.extra_compile_args = ["-O2"]
except ImportError:
    # No Cython: install pure-Python only; periodindex.kernels selects the
    # fallback at import time.
    pass

setup(ext_modules=ext_modules)
