"""Build script for the compiled kernel extensions.

The package works without them (numpy fallback, see epiopt._kernels); the
extensions just make the hot loops fast.  -ffp-contract=off keeps the C
arithmetic free of FMA contraction so both backends evaluate the same
floating-point expressions.
"""

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

COMPILE_ARGS = ["-O3", "-ffp-contract=off"]

extensions = [
    Extension(
        "epiopt._kernels._mc_cy",
        ["src/epiopt/_kernels/_mc_cy.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=COMPILE_ARGS,
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    ),
    Extension(
        "epiopt._kernels._pde_cy",
        ["src/epiopt/_kernels/_pde_cy.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=COMPILE_ARGS,
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    ),
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
)
