import os

from setuptools import Extension, setup

# The compiled kernels are optional: TERRAPOSE_NO_EXT=1 skips the build and the
# package falls back to the pure-numpy implementations at import time.
extensions = []
if os.environ.get("TERRAPOSE_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize

        extensions = cythonize(
            [
                Extension(
                    "terrapose.kernels._native",
                    ["src/terrapose/kernels/_native.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        extensions = []

setup(ext_modules=extensions)
