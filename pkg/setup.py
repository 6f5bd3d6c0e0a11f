"""Builds the optional compiled matrix kernel.

The extension is marked optional: if Cython or a C compiler is missing the
install still succeeds and the package falls back to the pure-NumPy kernel
at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "bandgap_delay._core_cy",
                ["src/bandgap_delay/_core_cy.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
