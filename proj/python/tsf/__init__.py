"""Fourier-Galerkin Stokes and Navier-Stokes solvers on the periodic box.

Fields are complex coefficient arrays: a scalar field on the lattice |xi_j| <= m is an
n-dimensional cube of side 2m+1 indexed by xi + m, a vector field adds a leading component axis.
Viscosity tensors are float arrays of shape (n, n, n, n) indexed [k, j, alpha, beta].
"""

from ._tsf import *  # noqa: F401,F403
from ._tsf import __doc__  # noqa: F401
