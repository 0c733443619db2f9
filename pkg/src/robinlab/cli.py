"""Command line front end for the reproduction drivers.

Subcommands mirror the experiment tables: table1, table2, table3,
spectrum, von-neumann, operator.  Exit codes: 0 on success, 2 on a
configuration or usage error, 3 when a requested run failed to converge
(the table is still written, with the offending cells marked).
"""

from __future__ import annotations

import argparse
import os
import sys

from . import experiments, grid_fem
from .experiments import ExperimentConfig


def _parse_floats(text):
    return tuple(float(t) for t in text.split(",") if t.strip())


def _parse_ints(text):
    return tuple(int(t) for t in text.split(",") if t.strip())


def build_parser():
    parser = argparse.ArgumentParser(
        prog="robinlab",
        description="Two-sided Robin domain decomposition laboratory on the unit square",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("table1", "discretization errors, observed orders, and sweep counts"),
        ("table2", "measured contraction factors over a damping grid"),
        ("table3", "Dirichlet-Neumann baseline sweep counts"),
        ("spectrum", "per-mode coefficients and damped eigenvalues"),
        ("von-neumann", "half-plane advisor and band check (--n gives band limits K)"),
        ("operator", "trace-map equivalence constants and radius bounds"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--n", type=_parse_ints, default=None, metavar="N1,N2,...",
                       help="strip widths n (mesh h = 1/(2n)); default 2,6,10,14,18,22,26")
        p.add_argument("--gamma1", type=float, default=1.0)
        p.add_argument("--gamma2-coeff", type=float, default=64.0,
                       help="gamma2 = coeff/h (or the constant itself with --gamma2-rule constant)")
        p.add_argument("--gamma2-rule", choices=("constant", "scale_inv_h"),
                       default="scale_inv_h")
        p.add_argument("--theta", type=_parse_floats, default=None, metavar="T1,T2,...",
                       help="damping values; default depends on the subcommand")
        p.add_argument("--tol", type=float, default=1e-11,
                       help="sup-norm stopping tolerance of the sweeps")
        p.add_argument("--max-iter", type=int, default=2000)
        p.add_argument("--format", choices=("csv", "markdown", "md"),
                       default="csv")
        p.add_argument("--out", default=None, metavar="FILE",
                       help="write the table to FILE instead of stdout")
        p.add_argument("--deep", action="store_true",
                       help="append the large meshes n = 36, 144, 576")
        p.add_argument("--dump-matrices", default=None, metavar="DIR",
                       help="also write the assembled matrices in MatrixMarket format")
    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = ExperimentConfig(
            table=args.command.replace("-", "_"),
            n_list=args.n if args.n else experiments.DEFAULT_N_LIST,
            gamma1=args.gamma1,
            gamma2_rule=args.gamma2_rule,
            gamma2_coefficient=args.gamma2_coeff,
            theta_list=args.theta,
            stop_tol=args.tol,
            max_iter=args.max_iter,
            output_format="markdown" if args.format == "md" else args.format,
            deep=args.deep,
        )
    except (ValueError, TypeError) as exc:
        print(f"robinlab: {exc}", file=sys.stderr)
        return 2
    if args.dump_matrices:
        _dump_matrices(config, args.dump_matrices)
    result = experiments.run(config)
    text = experiments.render(result, config.output_format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not result.notes.get("all_converged", True):
        print("robinlab: some runs did not converge (marked with *)", file=sys.stderr)
        return 3
    return 0


def _dump_matrices(config, directory):
    os.makedirs(directory, exist_ok=True)
    for n in config.grids():
        grid = grid_fem.build_grid(n)
        tag = f"n{n}"
        grid_fem.write_matrix_market(
            os.path.join(directory, f"a0_{tag}.mtx"),
            grid_fem.assemble_a0(grid), comment=f"clamped strip five-point matrix, n={n}")
        grid_fem.write_matrix_market(
            os.path.join(directory, f"stiffness_{tag}.mtx"),
            grid_fem.assemble_subdomain_stiffness(grid), comment=f"free-interface strip stiffness, n={n}")
        grid_fem.write_matrix_market(
            os.path.join(directory, f"interface_mass_{tag}.mtx"),
            grid_fem.assemble_interface_mass(grid), comment=f"interface mass, n={n}")
        grid_fem.write_matrix_market(
            os.path.join(directory, f"interface_stiffness_{tag}.mtx"),
            grid_fem.assemble_interface_stiffness(grid), comment=f"interface coupling, n={n}")


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
