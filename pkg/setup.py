"""Build the optional compiled kernel.

The package works without it: ``sccmu.games`` falls back to the pure-Python
kernel when ``sccmu._zielonka`` cannot be imported.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # no Cython: pure-Python install
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("sccmu._zielonka", ["src/sccmu/_zielonka.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
