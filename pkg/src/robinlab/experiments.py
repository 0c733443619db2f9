"""Reproduction drivers for the convergence study on the unit square.

Each run_* function sweeps a mesh family and returns a TableResult that
the CLI renders as CSV or markdown.  The canonical weights throughout are
gamma1 = 1 and gamma2 = 64/h, for which the damped double sweep contracts
at a grid-independent rate (at theta = 3/7 the rate stays below 1/7).

Everything here is deterministic: no randomness, fixed summation orders,
so repeated runs produce byte-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import operator_analysis, spectral
from .dd_solvers import (DDParams, assemble_global_solution,
                         dirichlet_neumann_solve, error_norms,
                         robin_robin_solve)
from .grid_fem import build_grid, build_subdomain_system

TABLES = ("table1", "table2", "table3", "spectrum", "von_neumann", "operator")

DEFAULT_N_LIST = (2, 6, 10, 14, 18, 22, 26)
DEEP_N_LIST = (36, 144, 576)
SEVENTHS = tuple(k / 7.0 for k in range(7))
DN_THETAS = (0.0, 0.25, 0.35, 0.4, 0.45, 0.5, 0.55, 0.75)


def manufactured_solution():
    """Polynomial test pair: u = 64 (x^3 - x^4)(y - y^2) vanishing on the
    boundary with u(1/2, 1/2) = 1, and f = -Laplacian u."""

    def u(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return 64.0 * (x ** 3 - x ** 4) * (y - y * y)

    def f(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return 64.0 * ((12.0 * x * x - 6.0 * x) * (y - y * y)
                       + 2.0 * (x ** 3 - x ** 4))

    return u, f


@dataclass
class ExperimentConfig:
    """Sweep description shared by all drivers.

    gamma2_rule is either "constant" (gamma2 = gamma2_coefficient) or
    "scale_inv_h" (gamma2 = gamma2_coefficient / h).  theta_list defaults
    depend on the table; n_list entries are strip widths n with h = 1/(2n).
    For the von_neumann driver the n_list entries are read as band limits K.
    """

    table: str
    n_list: tuple = DEFAULT_N_LIST
    gamma1: float = 1.0
    gamma2_rule: str = "scale_inv_h"
    gamma2_coefficient: float = 64.0
    theta_list: Optional[tuple] = None
    stop_tol: float = 1e-11
    max_iter: int = 2000
    output_format: str = "csv"
    deep: bool = False
    quadrature: str = "degree6"

    def __post_init__(self):
        if self.table not in TABLES:
            raise ValueError(f"table must be one of {TABLES}, got {self.table!r}")
        self.n_list = tuple(int(n) for n in self.n_list)
        if not self.n_list or any(n < 1 for n in self.n_list):
            raise ValueError("n_list must be a nonempty list of positive integers")
        if self.gamma1 <= 0 or self.gamma2_coefficient <= 0:
            raise ValueError("gamma1 and gamma2_coefficient must be positive")
        if self.gamma2_rule not in ("constant", "scale_inv_h"):
            raise ValueError(f"unknown gamma2_rule {self.gamma2_rule!r}")
        if self.theta_list is None:
            self.theta_list = {"table2": SEVENTHS, "table3": DN_THETAS}.get(
                self.table, (3.0 / 7.0,))
        self.theta_list = tuple(float(t) for t in self.theta_list)
        if any(not 0.0 <= t < 1.0 for t in self.theta_list):
            raise ValueError("theta values must lie in [0, 1)")
        if self.stop_tol <= 0:
            raise ValueError("stop_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.output_format not in ("csv", "markdown"):
            raise ValueError(f"output_format must be csv or markdown, got {self.output_format!r}")

    def gamma2(self, n: int) -> float:
        if self.gamma2_rule == "constant":
            return self.gamma2_coefficient
        return self.gamma2_coefficient * 2.0 * n  # coefficient / h

    def params(self, n: int, theta: float) -> DDParams:
        return DDParams(gamma1=self.gamma1, gamma2=self.gamma2(n), theta=theta,
                        stop_tol=self.stop_tol, max_iter=self.max_iter)

    def grids(self):
        ns = self.n_list + (DEEP_N_LIST if self.deep else ())
        return tuple(dict.fromkeys(ns))


@dataclass
class TableResult:
    """Formatted-table payload: header names, raw-value rows, printf-style
    pretty formats per column (None means str), and free-form notes."""

    columns: list
    rows: list
    pretty: list
    notes: dict = field(default_factory=dict)


def _fmt(value, spec):
    if value is None:
        return ""
    if isinstance(value, str) or spec is None:
        return str(value)
    return spec % value


def format_csv(result: TableResult) -> str:
    lines = [",".join(result.columns)]
    for row in result.rows:
        cells = []
        for v in row:
            if isinstance(v, float):
                cells.append("%.10g" % v)
            elif v is None:
                cells.append("")
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def format_markdown(result: TableResult) -> str:
    header = "| " + " | ".join(result.columns) + " |"
    rule = "|" + "|".join(["---"] * len(result.columns)) + "|"
    lines = [header, rule]
    for row in result.rows:
        cells = [_fmt(v, s) for v, s in zip(row, result.pretty)]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def render(result: TableResult, output_format: str) -> str:
    if output_format == "markdown":
        return format_markdown(result)
    return format_csv(result)


def _solve_pair(config, n, theta):
    grid = build_grid(n)
    _, f = manufactured_solution()
    left = build_subdomain_system(grid, f, "left", rule=config.quadrature)
    right = build_subdomain_system(grid, f, "right", rule=config.quadrature)
    report = robin_robin_solve(left, right, config.params(n, theta))
    return grid, report


def run_table1(config: ExperimentConfig) -> TableResult:
    """Discretization errors against the nodal interpolant, their observed
    orders from consecutive mesh pairs, and the sweep counts."""
    u, _ = manufactured_solution()
    theta = config.theta_list[0]
    rows = []
    all_converged = True
    prev = None
    for n in config.grids():
        grid, report = _solve_pair(config, n, theta)
        u_h = assemble_global_solution(grid, report.solution_u, report.solution_w)
        l2, h1 = error_norms(grid, u_h, u)
        order_l2 = order_h1 = None
        if prev is not None:
            h_ratio = math.log(prev[0] / grid.h)
            order_l2 = math.log(prev[1] / l2) / h_ratio
            order_h1 = math.log(prev[2] / h1) / h_ratio
        prev = (grid.h, l2, h1)
        count = str(report.iterations) if report.converged else f"{report.iterations}*"
        all_converged &= report.converged
        rows.append([f"1/{2 * n}", l2, order_l2, h1, order_h1, count])
    return TableResult(
        columns=["h", "||u_I-u_h||_L2", "h^n", "|u_I-u_h|_H1", "h^n", "#DD"],
        rows=rows,
        pretty=[None, "%.7f", "%.2f", "%.6f", "%.2f", None],
        notes={"all_converged": all_converged, "theta": theta},
    )


def run_table2(config: ExperimentConfig) -> TableResult:
    """Measured contraction factors over a theta grid, one row per mesh,
    with the grid-independent envelope as the last row.

    Rates are measured on homogeneous runs (f = 0, exact limit 0) started
    from the slowest interface sine mode, picked per (n, theta) from the
    closed-form one-sweep spectrum.  Driving the iteration with the worst
    mode makes every trace ratio reflect the contraction factor itself;
    forcing-driven runs underread it when the history is short, because
    the slow mode takes a while to dominate whatever mixture the load
    excites.
    """

    def zero_load(x, y):
        return np.zeros_like(np.asarray(x, dtype=float))

    thetas = config.theta_list
    rows = []
    all_converged = True
    for n in config.grids():
        grid = build_grid(n)
        left = build_subdomain_system(grid, zero_load, "left",
                                      rule=config.quadrature)
        right = build_subdomain_system(grid, zero_load, "right",
                                       rule=config.quadrature)
        cells = [f"1/{2 * n}"]
        for theta in thetas:
            params = config.params(n, theta)
            vals, _ = spectral.reduction_spectrum(n, params)
            j_star = int(np.argmax(np.abs(vals))) + 1
            seed = spectral.sine_basis_vector(j_star, grid.n_interface)
            report = robin_robin_solve(left, right, params, g1_init=seed)
            all_converged &= report.converged
            rate = report.reduction_rate
            if rate is None:
                cells.append("n/a")
            else:
                cells.append(rate if report.converged else f"{rate:.3f}*")
        rows.append(cells)
    rows.append(["rate bound"] + [spectral.corollary_rate(t) for t in thetas])
    return TableResult(
        columns=["h"] + [f"theta={t:.4g}" for t in thetas],
        rows=rows,
        pretty=[None] + ["%.3f"] * len(thetas),
        notes={"all_converged": all_converged},
    )


def run_table3(config: ExperimentConfig) -> TableResult:
    """Sweep counts of the damped Dirichlet-Neumann baseline over a theta
    grid.  Runs that hit max_iter are capped and marked with a star."""
    _, f = manufactured_solution()
    rows = []
    all_converged = True
    for n in config.grids():
        grid = build_grid(n)
        left = build_subdomain_system(grid, f, "left", rule=config.quadrature)
        right = build_subdomain_system(grid, f, "right", rule=config.quadrature)
        cells = [f"1/{2 * n}"]
        for theta in config.theta_list:
            report = dirichlet_neumann_solve(left, right, config.params(n, theta))
            all_converged &= report.converged
            cells.append(str(report.iterations) if report.converged
                         else f"{report.iterations}*")
        rows.append(cells)
    return TableResult(
        columns=["h"] + [f"theta={t:.4g}" for t in config.theta_list],
        rows=rows,
        pretty=[None] + [None] * len(config.theta_list),
        notes={"all_converged": all_converged},
    )


def run_spectrum(config: ExperimentConfig) -> TableResult:
    """Per-mode coefficients and damped eigenvalues of the double sweep.

    Each (mesh, theta) pair contributes one block of per-mode rows; the
    radius summaries in the notes are keyed by (n, theta)."""
    rows = []
    radii = {}
    for n in config.grids():
        lam, tlam, a, b = spectral.mode_arrays(n)
        for theta in config.theta_list:
            params = config.params(n, theta)
            g1, g2 = params.gamma1, params.gamma2
            c = ((g1 * a - b) / (g1 * a + b)) * ((g2 * a - b) / (g2 * a + b))
            damped = theta + (1.0 - theta) * c
            for j in range(1, 2 * n):
                rows.append([n, j, a[j - 1], b[j - 1], c[j - 1], damped[j - 1]])
            radius = float(np.abs(damped).max())
            radii[(n, theta)] = {"radius": radius,
                                 "within_bound": radius <= 1.0 / 7.0 + 1e-12}
    return TableResult(
        columns=["n", "j", "a_j", "b_j", "c_j", "damped"],
        rows=rows,
        pretty=["%d", "%d", "%.12g", "%.12g", "%.12g", "%.12g"],
        notes={"radii": radii, "all_converged": True},
    )


def run_von_neumann(config: ExperimentConfig) -> TableResult:
    """Half-plane advisor check: for each band limit K (taken from n_list)
    pick (gamma2, theta), then verify the damped factor over the band."""
    rows = []
    for K in config.grids():
        gamma2, theta, bound = spectral.von_neumann_advisor(K, config.gamma1)
        k = np.arange(1, K + 1)
        worst = float(np.abs(spectral.von_neumann_rho(k, config.gamma1, gamma2, theta)).max())
        rows.append([K, config.gamma1, gamma2, theta, bound, worst,
                     "yes" if worst <= bound + 1e-12 else "no"])
    return TableResult(
        columns=["K", "gamma1", "gamma2", "theta", "bound", "max|rho|", "within_bound"],
        rows=rows,
        pretty=["%d", "%.6g", "%.6g", "%.6g", "%.6g", "%.6g", None],
        notes={"all_converged": True},
    )


def run_operator(config: ExperimentConfig) -> TableResult:
    """Trace-map study on the symmetric split and an off-center one:
    equivalence constants, recommended weights, and the sweep radius
    against its (2t-1)/(2t+1) cap."""
    _, f = manufactured_solution()
    rows = []
    ok = True
    for n in config.grids():
        grid = build_grid(n)
        for label, (ncl, ncr) in (
            ("half", (n, n)),
            ("third", operator_analysis.offcenter_columns(grid)),
        ):
            left = build_subdomain_system(grid, f, "left", n_cols=ncl)
            right = build_subdomain_system(grid, f, "right", n_cols=ncr)
            S1 = operator_analysis.dtn_schur(left)
            S2 = operator_analysis.dtn_schur(right)
            bounds = operator_analysis.equivalence_bounds(S1, S2)
            params = operator_analysis.recommend_params(S1, S2)
            R = operator_analysis.build_iteration_operator(S1, S2, params)
            Tsym = operator_analysis.symmetrized_T(S1, S2, params)
            similar = params.theta * np.eye(R.shape[0]) - (1.0 - params.theta) * Tsym
            radius = operator_analysis.iteration_spectral_radius(R, similar)
            bound = params.theta
            good = radius <= bound + 1e-9
            ok &= good
            rows.append([n, label, bounds.s, bounds.t, params.gamma1, params.gamma2,
                         params.theta, radius, bound, "yes" if good else "no"])
    return TableResult(
        columns=["n", "split", "s", "t", "gamma1", "gamma2", "theta",
                 "radius", "bound", "within_bound"],
        rows=rows,
        pretty=["%d", None, "%.6g", "%.6g", "%.6g", "%.6g", "%.6g",
                "%.6g", "%.6g", None],
        notes={"all_converged": ok},
    )


RUNNERS = {
    "table1": run_table1,
    "table2": run_table2,
    "table3": run_table3,
    "spectrum": run_spectrum,
    "von_neumann": run_von_neumann,
    "operator": run_operator,
}


def run(config: ExperimentConfig) -> TableResult:
    return RUNNERS[config.table](config)
