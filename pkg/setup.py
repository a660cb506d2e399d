"""Build the optional compiled kernels.

Without Cython or a C compiler the package installs pure Python and
``affcell.kernels`` falls back to ``affcell._kernels_py``.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("AFFCELL_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("affcell._ckernels", ["src/affcell/_ckernels.pyx"], extra_compile_args=["-O2"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
