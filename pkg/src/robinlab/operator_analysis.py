"""Trace-operator view of the two-sided Robin sweep.

The interface response of each strip is condensed into its
Dirichlet-to-Neumann map, realized as the Schur complement of the strip
stiffness on the interface block.  By default the map is expressed in
coordinates where the interface mass matrix is the identity (congruence
by its Cholesky factor), so adjointness with respect to the trace inner
product becomes plain matrix symmetry.  In those coordinates one damped
double sweep is

    R = theta I - (1 - theta) T,
    T = (S2 - g1)(g2 + S2)^-1 (g2 - S1)(g1 + S1)^-1,

and T is similar to a symmetric positive matrix whenever the weights
bracket both spectra (g1 at or below the smallest eigenvalue, g2 at or
above three times the largest).  That similarity transform bounds the
spectral radius of R by (2t - 1)/(2t + 1) with t the upper spectral
equivalence constant of the two maps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .dd_solvers import DDParams
from .grid_fem import GridSpec, SubdomainSystem
from .sparse_linalg import (ConvergenceError, jacobi_symmetric_eigen,
                            power_spectral_radius, symmetric_matrix_function)


@dataclass
class DtNOperator:
    """Dense interface response map with its spectral extremes.

    coords records whether the matrix lives in interface-mass-orthonormal
    coordinates ("mass") or raw nodal ones ("euclidean").
    """

    matrix: np.ndarray
    min_eig: float
    max_eig: float
    coords: str = "mass"


@dataclass
class EquivalenceBounds:
    """Extremes s <= t of the generalized spectrum of (S2, S1).

    Genuine trace maps of complementary strips give s <= 1 <= t; the raw
    extremes are reported unconditionally so artificial inputs are not
    masked."""

    s: float
    t: float


def dtn_schur(system: SubdomainSystem, coords="mass") -> DtNOperator:
    """Interface Schur complement of one strip, as a DtNOperator.

    Eliminates the strip interior from the free-interface stiffness:
    S = A_GG - A_GI A_II^-1 A_IG, then (for coords="mass") congruence by
    the inverse Cholesky factor of the interface mass matrix.
    """
    if coords not in ("mass", "euclidean"):
        raise ValueError(f"coords must be 'mass' or 'euclidean', got {coords!r}")
    m = system.grid.n_interface
    size = system.n_cols * m
    base = size - m
    A = system.stiffness.to_scipy_csc().tocsr()
    A_GG = A[base:, base:].toarray()
    if base > 0:
        A_II = A[:base, :base].tocsc()
        A_IG = A[:base, base:].toarray()
        lu = scipy.sparse.linalg.splu(A_II)
        S = A_GG - A[base:, :base].toarray() @ lu.solve(A_IG)
    else:
        S = A_GG
    if coords == "mass":
        L = scipy.linalg.cholesky(system.interface_mass.to_dense(), lower=True)
        S = scipy.linalg.solve_triangular(L, S, lower=True)
        S = scipy.linalg.solve_triangular(L, S.T, lower=True).T
    S = 0.5 * (S + S.T)
    w, _ = jacobi_symmetric_eigen(S)
    if w[0] <= 0:
        raise ValueError(f"interface response map is not positive definite (min eigenvalue {w[0]:.3e})")
    return DtNOperator(matrix=S, min_eig=float(w[0]), max_eig=float(w[-1]), coords=coords)


def offcenter_columns(grid: GridSpec, fraction=1.0 / 3.0):
    """Column counts (left, right) for a split at the grid line nearest to
    x = fraction."""
    k = int(round(2 * grid.n * fraction))
    k = min(max(k, 1), 2 * grid.n - 1)
    return k, 2 * grid.n - k


def equivalence_bounds(S1: DtNOperator, S2: DtNOperator) -> EquivalenceBounds:
    """Spectral equivalence constants via S1^(-1/2) S2 S1^(-1/2)."""
    _check_pair(S1, S2)
    P = symmetric_matrix_function(S1.matrix, lambda x: 1.0 / np.sqrt(x))
    G = P @ S2.matrix @ P
    w, _ = jacobi_symmetric_eigen(0.5 * (G + G.T))
    return EquivalenceBounds(s=float(w[0]), t=float(w[-1]))


def _check_pair(S1, S2):
    if S1.matrix.shape != S2.matrix.shape:
        raise ValueError("trace maps have different sizes")
    if S1.coords != S2.coords:
        raise ValueError("trace maps use different coordinate conventions")


def build_iteration_operator(S1: DtNOperator, S2: DtNOperator, params: DDParams) -> np.ndarray:
    """Dense one-sweep error operator R = theta I - (1 - theta) T on the
    transformed transmission datum."""
    _check_pair(S1, S2)
    g1, g2 = params.gamma1, params.gamma2
    T = (symmetric_matrix_function(S2.matrix, lambda x: (x - g1) / (g2 + x))
         @ symmetric_matrix_function(S1.matrix, lambda x: (g2 - x) / (g1 + x)))
    dim = T.shape[0]
    return params.theta * np.eye(dim) - (1.0 - params.theta) * T


def symmetrized_T(S1: DtNOperator, S2: DtNOperator, params: DDParams) -> np.ndarray:
    """Symmetric matrix similar to the undamped double-sweep operator T:

        (g1+S1)^(-1/2) (g2-S1)^(1/2) (S2-g1)(g2+S2)^(-1) (g2-S1)^(1/2) (g1+S1)^(-1/2)

    Requires the weights to bracket both spectra; the failing inequality
    is named if they do not.
    """
    _check_pair(S1, S2)
    g1, g2 = params.gamma1, params.gamma2
    lo = min(S1.min_eig, S2.min_eig)
    hi = max(S1.max_eig, S2.max_eig)
    slack = 1e-12 * max(1.0, hi)
    if g1 > lo + slack:
        raise ValueError(
            f"weight bracket violated: gamma1 = {g1:.6g} exceeds the smallest "
            f"trace eigenvalue min(lam1, lam2) = {lo:.6g}")
    if g2 < 3.0 * hi - slack:
        raise ValueError(
            f"weight bracket violated: gamma2 = {g2:.6g} is below three times "
            f"the largest trace eigenvalue, 3 max(lam1, lam2) = {3.0 * hi:.6g}")
    P = symmetric_matrix_function(S1.matrix, lambda x: 1.0 / np.sqrt(g1 + x))
    Q = symmetric_matrix_function(S1.matrix, lambda x: np.sqrt(np.maximum(g2 - x, 0.0)))
    mid = symmetric_matrix_function(S2.matrix, lambda x: (x - g1) / (g2 + x))
    out = P @ Q @ mid @ Q @ P
    return 0.5 * (out + out.T)


def recommend_params(S1: DtNOperator, S2: DtNOperator, stop_tol=1e-11,
                     max_iter=2000) -> DDParams:
    """Weights and damping from the spectral extremes: g1 at the smallest
    eigenvalue, g2 at three times the largest, theta = (2t-1)/(2t+1)."""
    bounds = equivalence_bounds(S1, S2)
    theta = (2.0 * bounds.t - 1.0) / (2.0 * bounds.t + 1.0)
    return DDParams(
        gamma1=min(S1.min_eig, S2.min_eig),
        gamma2=3.0 * max(S1.max_eig, S2.max_eig),
        theta=theta,
        stop_tol=stop_tol,
        max_iter=max_iter,
    )


def iteration_spectral_radius(R: np.ndarray, similar_symmetric=None) -> float:
    """Spectral radius of the sweep operator by power iteration, falling
    back to a full symmetric eigensolve of a similar symmetric matrix
    (when provided) if the iteration stagnates."""
    R = np.asarray(R, dtype=float)
    dim = R.shape[0]
    try:
        return power_spectral_radius(lambda x: R @ x, dim)
    except ConvergenceError:
        if similar_symmetric is None:
            raise
        w, _ = jacobi_symmetric_eigen(similar_symmetric)
        return float(np.abs(w).max())
