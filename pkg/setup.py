"""Build the optional Cython kernels; the package works without them."""
import os

import numpy as np
from setuptools import setup

ext_modules = []
if os.environ.get("RANDCHAN_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("randchan._ckernels", ["src/randchan/_ckernels.pyx"],
                       include_dirs=[np.get_include()],
                       extra_compile_args=["-O3"],
                       define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        print("Cython not available; installing the pure-Python kernels only")

setup(ext_modules=ext_modules)
