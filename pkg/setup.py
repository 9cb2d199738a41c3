"""Build script for the optional compiled kernels.

The package works without the extension: secgraph.kernels falls back to a
pure-Python implementation at import time.  Building with Cython just makes
the hot loops (cell clipping, pairwise degree counts, neutralization
filtering) roughly two orders of magnitude faster.
"""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "secgraph.kernels._core",
                ["src/secgraph/kernels/_core.pyx"],
                include_dirs=[np.get_include()],
                # -ffp-contract=off: the fallback backend promises bitwise
                # equality, which fused multiply-adds would break
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=extensions)
