"""Build script: compiles the optional scan-kernel extension.

The package works without the extension (a pure-Python kernel is selected at
import time), so the build is tolerant: if Cython or a C compiler is missing,
installation proceeds without `ordept._scan_cy`.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext = Extension(
        "ordept._scan_cy",
        ["src/ordept/_scan_cy.pyx"],
        extra_compile_args=["-O3"],
        optional=True,
    )
    ext_modules = cythonize([ext], language_level=3)
except ImportError:
    pass

setup(ext_modules=ext_modules)
