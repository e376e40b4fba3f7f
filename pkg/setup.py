"""Build script: compiles the optional accelerator extension when possible.

The package is fully functional without the extension (``zetakms._backend``
falls back to the pure-Python kernels); any failure here is therefore
non-fatal and simply produces a pure-Python install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/zetakms/_kernels.pyx",
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
    for ext in ext_modules:
        ext.include_dirs.append(numpy.get_include())
        # Contraction off so the compiled accumulation loops perform the
        # exact IEEE operation sequence of the pure-Python fallback.
        ext.extra_compile_args = ["-O3", "-ffp-contract=off"]
except Exception as exc:  # pragma: no cover - depends on toolchain
    print(f"zetakms: skipping compiled kernels ({exc}); "
          "installing pure-Python fallback", file=sys.stderr)
    ext_modules = []

setup(ext_modules=ext_modules)
