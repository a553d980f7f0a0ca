"""Build script: compiles the optional extension core.

The package is fully functional without it (elkat.kernels falls back to the
pure-Python kernels), so a missing compiler or Cython only costs speed.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            print("warning: building elkat._speedups failed (%s); "
                  "using the pure-Python kernels" % exc, file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print("warning: building %s failed (%s); using the pure-Python "
                  "kernels" % (ext.name, exc), file=sys.stderr)


ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("elkat._speedups", ["src/elkat/_speedups.pyx"])],
        language_level="3")
except ImportError:
    print("warning: Cython not available; building without the compiled "
          "kernels", file=sys.stderr)

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
