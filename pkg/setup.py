import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SHARDCAST_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("shardcast._kernel_c", ["src/shardcast/_kernel_c.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # No Cython available: install the pure-Python backend only.
        ext_modules = []

setup(ext_modules=ext_modules)
