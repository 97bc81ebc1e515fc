"""Build hook for the optional compiled kernels.

The Cython extension is skipped (with a warning) when Cython or a C compiler
is unavailable; the package then runs on its pure-Python kernels.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as e:  # compiler missing or failing
            print(f"warning: skipping compiled kernels ({e})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as e:
            print(f"warning: skipping {ext.name} ({e})", file=sys.stderr)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not found, using pure-Python kernels", file=sys.stderr)
        return []
    return cythonize(["src/presburger/_kernels.pyx"], language_level=3, quiet=True)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
