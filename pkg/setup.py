import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "promise_cc._core",
        ["src/promise_cc/_core.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

# The compiled core is optional: without Cython the package falls back to the
# pure-Python kernels selected at import time.
setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": 3})
    if cythonize
    else [],
)
