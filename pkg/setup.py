import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # the package still works on the pure-Python kernels
    cythonize = None

extensions = []
if cythonize is not None and not os.environ.get("ALLOWANCE_AUCTIONS_NO_EXT"):
    extensions = cythonize(
        [
            Extension(
                "allowance_auctions._kernels._core",
                ["src/allowance_auctions/_kernels/_core.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)
