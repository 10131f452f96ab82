"""Lagrangian surfaces in C^2 generated by a pair of planar curves.

The surface ``alpha * omega`` pairs the product ``alpha(t) omega(s)`` in the
second complex slot with integrated Hermitian products of position and
tangent in the first.  Subpackages:

* :mod:`lagstar.geomcore` -- C and C^2 algebra
* :mod:`lagstar.specfun` -- elliptic functions and cumulative quadrature
* :mod:`lagstar.curves` -- planar curve catalog and ODE generators
* :mod:`lagstar.star` -- the surface construction and its pointwise geometry
* :mod:`lagstar.classify` -- residual checks for the special families
* :mod:`lagstar.meshio` -- grid sampling and OBJ/PLY/CSV export
* :mod:`lagstar.cli` -- command line front end
"""
from lagstar.errors import (
    DomainError,
    IntegrationError,
    LagstarError,
    MeshIOError,
    MissingPeriodError,
    QuadratureError,
    SingularPointError,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "IntegrationError",
    "LagstarError",
    "MeshIOError",
    "MissingPeriodError",
    "QuadratureError",
    "SingularPointError",
]
