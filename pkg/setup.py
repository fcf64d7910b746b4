# Builds the optional compiled kernel module seqpp._native.
# The package works without it (pure-Python fallback); a failed extension
# build therefore only warns instead of failing the install.

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"seqpp._native build skipped ({exc}); using pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"seqpp._native build skipped ({exc}); using pure-Python kernels")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not available; using pure-Python kernels")
        return []
    ext = Extension("seqpp._native", sources=["src/seqpp/_native.pyx"])
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
