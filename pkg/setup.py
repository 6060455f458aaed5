import os

from setuptools import setup

ext_modules = []
if not os.environ.get("NCS4_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("ncs4._ckernel", ["src/ncs4/_ckernel.pyx"], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
