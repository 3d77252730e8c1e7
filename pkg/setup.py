"""Build script: compiles the optional kernel extension when Cython is present.

The package works without the extension; `peersplit._kernels` falls back to
the pure-Python mirror at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "peersplit._kernels._core",
                ["src/peersplit/_kernels/_core.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
