"""Build script for the optional compiled kernel extension.

The extension is a performance mirror of pogorelov._kernels_py; the package
works without it. Build failures degrade to the pure numpy backend, they do
not fail the install.
"""
import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, otherwise continue without it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: compiled kernels skipped ({exc}); "
                  "falling back to the pure numpy backend")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "falling back to the pure numpy backend")


def extensions():
    if os.environ.get("POGORELOV_NO_EXT"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    ext = Extension(
        "pogorelov._kernels",
        sources=["src/pogorelov/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        # -ffp-contract=off: no FMA contraction, so compiled results match the
        # numpy backend bit for bit (same operation order in both).
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
