"""Calculus for Thorin (extended generalized gamma convolution) Levy processes.

Models are defined by Thorin triplets; the package derives characteristic and
Laplace exponents, Levy-side views (canonical function, Levy density, tails),
distributional properties, Brownian and negative-binomial subordination
transforms, densities via Fourier inversion, and deterministic Monte Carlo.
"""

from .errors import (DivergenceError, DomainError, ModelFormatError,
                     NumericalError, PreconditionError, ThorinError)

__all__ = [
    "ThorinError", "DomainError", "DivergenceError", "PreconditionError",
    "NumericalError", "ModelFormatError",
]

__version__ = "0.1.0"
