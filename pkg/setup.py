import os

import numpy
from setuptools import Extension, setup
from Cython.Build import cythonize

# The compiled backend draws from numpy's bit-generator C API, which lives in
# the static npyrandom library shipped inside numpy.
numpy_random_lib = os.path.join(os.path.dirname(numpy.__file__), "random", "lib")

extensions = [
    Extension(
        "hawkes_risk._backend._core",
        ["src/hawkes_risk/_backend/_core.pyx"],
        include_dirs=[numpy.get_include()],
        library_dirs=[numpy_random_lib],
        libraries=["npyrandom"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        # -ffp-contract=off: no FMA contraction, so float arithmetic rounds
        # exactly like the pure-Python fallback and outputs stay bit-identical.
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
