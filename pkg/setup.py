"""Build script: compiles the optional Cython envelope kernel.

The package is fully functional without the extension; ``netpp.kernels``
falls back to a numpy implementation when the compiled module is missing.
Build failures are therefore tolerated rather than fatal.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Skip the extension (with a warning) if no compiler toolchain works."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: skipping compiled kernel build ({exc}); "
                  "netpp will use the pure-python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: failed to build {ext.name} ({exc}); "
                  "netpp will use the pure-python fallback")


def extensions():
    if os.environ.get("NETPP_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    import numpy

    ext = Extension(
        "netpp.kernels._envelope",
        ["src/netpp/kernels/_envelope.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
