"""Build script.

Compiles the optional Cython kernel module when Cython, numpy and a C
compiler are available.  The package is fully functional without it: the
pure-numpy kernels in ``blockpursuit._pykernels`` are selected at import
time whenever the compiled module is missing.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "blockpursuit._ckernels",
                ["src/blockpursuit/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
