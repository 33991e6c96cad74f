"""Build script: compiles the optional fast kernels when Cython + a C compiler exist.

The package is fully functional without the extension; `excessgrowth._kernels`
falls back to the numpy reference implementation at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "excessgrowth._kernels._fast",
                ["src/excessgrowth/_kernels/_fast.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
