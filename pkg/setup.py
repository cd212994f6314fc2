import os

from setuptools import Extension, setup

# Set PHASEDAMP_PURE_PYTHON=1 to skip the compiled kernel; the package then
# falls back to the numpy implementation at import time.
ext_modules = []
if not os.environ.get("PHASEDAMP_PURE_PYTHON"):
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "phasedamp._native",
                ["src/phasedamp/_native.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
