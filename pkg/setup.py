"""Optional compiled kernels; the package falls back to numpy when the build is skipped."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("MAGWEYL_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("magweyl._kernels", ["src/magweyl/_kernels.pyx"],
                       include_dirs=[numpy.get_include()], extra_compile_args=["-O3"])],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
