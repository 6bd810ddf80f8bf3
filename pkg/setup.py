from setuptools import Extension, setup

# The compiled step-recurrence kernels are optional: the package falls back to
# the NumPy implementations in bfx._kernels.py_kernels when the extension is
# missing (or when BFX_FORCE_PY=1).
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("bfx._kernels._cykernels", ["src/bfx/_kernels/_cykernels.pyx"])],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
