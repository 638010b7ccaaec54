"""Build script for the optional compiled counting kernel.

The package is fully functional without the extension; kernels/__init__.py
falls back to the numpy implementation when the import fails.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "acisim.kernels._fast",
                sources=["src/acisim/kernels/_fast.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
