"""Build script: compiles the optional Z_q arithmetic kernel.

The package works without it (the pure-Python twin is selected at import
time), so a missing compiler only costs speed.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        [Extension("isolab._speedups._zqcore",
                   ["src/isolab/_speedups/_zqcore.pyx"])],
        compiler_directives={"language_level": 3},
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    print("isolab: building without compiled kernel (%s)" % exc)

setup(ext_modules=ext_modules)
