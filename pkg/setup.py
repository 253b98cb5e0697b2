"""Build script: compiles the fast simulation kernel when a toolchain is available.

The compiled extension is optional.  If Cython or a C compiler is missing the
package installs anyway and falls back to the pure-Python kernel at import
time (see maxentgames.kernels).  Set MAXENTGAMES_NO_EXT=1 to skip the build
explicitly.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


class optional_build_ext(build_ext):
    """Swallow compiler failures so the pure-Python install still succeeds."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any toolchain failure
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"WARNING: building the compiled kernel failed ({exc}); "
              "installing with the pure-Python kernel only.")


ext_modules = []
if cythonize is not None and not os.environ.get("MAXENTGAMES_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "maxentgames._fastcore",
                ["src/maxentgames/_fastcore.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
