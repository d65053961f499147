import os

from setuptools import setup

ext_modules = []
if os.environ.get("PAIRTEL_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/pairtel/_kernels.pyx"],
            language_level=3,
            compiler_directives={"boundscheck": False, "wraparound": False},
        )
    except ImportError:
        # No Cython available: install anyway, the package falls back to the
        # pure-python kernels at import time.
        pass

setup(ext_modules=ext_modules)
