"""Build script: compiles the optional speedup extension.

The package works without the extension (pure-Python kernels are selected
at import time), so compilation failures are downgraded to a warning.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the C extension if possible, warn and continue otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"warning: building coversum._speedups failed ({exc}); "
            "falling back to pure-Python kernels",
            file=sys.stderr,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print(
            "warning: Cython not available; skipping compiled kernels",
            file=sys.stderr,
        )
        return []
    return cythonize(
        [
            Extension(
                "coversum.kernels._speedups",
                ["src/coversum/kernels/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
