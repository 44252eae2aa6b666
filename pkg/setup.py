"""Build script for the optional compiled evolution kernel.

The extension is optional: if Cython or a C compiler is unavailable the
package installs without it and falls back to the numpy implementation.
"""
import os

import numpy as np
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"WARNING: compiled kernel not built ({exc}); using numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"WARNING: failed to build {ext.name} ({exc}); using numpy fallback")


ext_modules = []
if not os.environ.get("QWSTAT_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover
        cythonize = None
    if cythonize is not None:
        try:
            ext_modules = cythonize(
                [
                    Extension(
                        "qwstat._ckernel",
                        ["src/qwstat/_ckernel.pyx"],
                        include_dirs=[np.get_include()],
                        extra_compile_args=["-O3", "-ffp-contract=off"],
                    )
                ],
                compiler_directives={"language_level": "3"},
            )
        except Exception as exc:  # pragma: no cover
            print(f"WARNING: cythonize failed ({exc}); using numpy fallback")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
