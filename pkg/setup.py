"""Build hook for the compiled Monte-Carlo kernel.

The extension is marked optional: if no compiler (or Cython) is
available the package still installs and falls back to the pure-NumPy
kernel at import time.
"""

import os

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:  # pure-python install
    ext_modules = []
else:
    # the scalar generator entry points live in numpy's static npyrandom lib
    npyrandom_dir = os.path.join(os.path.dirname(numpy.__file__), "random", "lib")
    ext = Extension(
        "vmmdse.oracle._kernel",
        ["src/vmmdse/oracle/_kernel.pyx"],
        include_dirs=[numpy.get_include()],
        library_dirs=[npyrandom_dir],
        libraries=["npyrandom"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        optional=True,
    )
    ext_modules = cythonize([ext], language_level=3)

setup(ext_modules=ext_modules)
