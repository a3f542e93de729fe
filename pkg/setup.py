import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffp-contract=off keeps the compiled kernel's rounding identical to the
# pure-numpy fallback (no fused multiply-add), so both backends produce
# bitwise-identical simplex tableaus.
setup(
    ext_modules=cythonize(
        [
            Extension(
                "silab._simplex_cy",
                ["src/silab/_simplex_cy.pyx"],
                extra_compile_args=["-O2", "-ffp-contract=off"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )
)
