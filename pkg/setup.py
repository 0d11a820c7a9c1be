"""Builds the optional compiled Fock kernels; the package works without them."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
except ImportError:
    pass
else:
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("cosetva._fockc", ["src/cosetva/_fockc.pyx"], optional=True)],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
