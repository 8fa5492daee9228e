import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("LLZETA_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "llzeta._ckernels",
                    ["src/llzeta/_ckernels.pyx"],
                    extra_compile_args=["-O3", "-fcx-limited-range"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
