"""robinlab: a laboratory for two-sided Robin domain decomposition.

The Poisson problem on the unit square is split into two strips meeting
at a mesh line.  The package assembles the P1 systems on uniform criss
meshes, runs the damped Robin-Robin and Dirichlet-Neumann sweeps, and
carries the closed-form mode analysis and the trace-operator analysis
that explain the observed grid-independent contraction rates.
"""

from .dd_solvers import (DDParams, DDReport, assemble_global_solution,
                         dirichlet_neumann_solve, error_norms,
                         measured_reduction_rate, robin_robin_solve)
from .experiments import ExperimentConfig, TableResult, manufactured_solution, run
from .grid_fem import (GridSpec, SubdomainSystem, Tridiagonal,
                       apply_restriction, assemble_a0, assemble_interface_mass,
                       assemble_interface_stiffness, assemble_load,
                       assemble_subdomain_stiffness, build_grid,
                       build_subdomain_system, restriction_adjoint)
from .operator_analysis import (DtNOperator, EquivalenceBounds,
                                build_iteration_operator, dtn_schur,
                                equivalence_bounds, iteration_spectral_radius,
                                recommend_params, symmetrized_T)
from .sparse_linalg import (ConvergenceError, SingularMatrixError, SparseMatrix,
                            cg_solve, dense_lu_solve, jacobi_symmetric_eigen,
                            power_spectral_radius, spmv)
from .spectral import (BoundMargins, ModeCoefficients, bound_margins,
                       cj_eigenvalue, corollary_rate, fd_eigenvalue,
                       mode_coefficients, omega, omega_max, reduction_spectrum,
                       sine_basis_vector, theta_star, tilde_lambda,
                       von_neumann_advisor, von_neumann_rho)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
