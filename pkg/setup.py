"""Build hook for the optional compiled kernels.

Without Cython (or a C compiler) the package installs as pure Python and
``cactus_split.kernels`` falls back to ``_kernels_py``.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "cactus_split._kernels",
                ["src/cactus_split/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
