"""Builds the optional compiled kernel; the package works without it."""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure fallback only
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "quatdens._ckernels",
                ["src/quatdens/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
