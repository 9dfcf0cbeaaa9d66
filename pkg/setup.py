import os

from setuptools import setup

# The compiled kernel is optional: the package falls back to the numpy
# implementation in _pykernel when the extension is absent.
ext_modules = []
if os.environ.get("MATROIDKIT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/matroidkit/_fastkernel.pyx"],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
