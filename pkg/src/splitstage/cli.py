"""Command-line interface.

Subcommands: classify, solve, ngm, table1, monotone, compare. Outputs are a
single JSON object or CSV (header plus data rows), chosen with --format.
Numeric CSV fields use 17 significant digits so re-parsing reproduces the
reported values exactly; JSON numbers round-trip by construction.

Exit codes (disjoint, 0 on full success):
  2  input file or flag could not be parsed
  3  matrices do not form the claimed splitting / operands mismatch
  4  singular U in a splitting
  5  singular transition matrix
  6  an iteration did not converge within its budget
  7  a theorem hypothesis required by the run is violated
"""

from __future__ import annotations

import dataclasses
import json
import sys

import click
import numpy as np

from . import __version__
from .cones import SimplicialCone, orthant
from .epidemic import build_infection, build_transition, expand_age, ngm, AgeStructure
from .errors import (
    HypothesisFailedError,
    InvalidParamsError,
    InvalidSplittingError,
    MaxIterationsError,
    MismatchedMatrixError,
    NoConvergenceError,
    NotMonotoneError,
    SingularMatrixError,
)
from .fileio import ParseError, format_float, parse_float_list, read_matrix, read_params
from .linalg import condition_number_2, spectral_radius
from .splittings import (
    Splitting,
    classify,
    compare_splittings,
    gauss_seidel_splitting,
    is_convergent,
    jacobi_splitting,
    sor_splitting,
    trivial_splitting,
)
from .twostage import (
    TwoStageConfig,
    bracketing_initials,
    monotone_bracket,
    run_stationary,
    two_stage_operator,
)

EXIT_PARSE = 2
EXIT_SPLITTING_MISMATCH = 3
EXIT_SINGULAR_U = 4
EXIT_SINGULAR_TRANSITION = 5
EXIT_NO_CONVERGENCE = 6
EXIT_HYPOTHESIS = 7


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _emit_object(obj: dict, fmt: str):
    if fmt == "json":
        click.echo(json.dumps(obj))
    else:
        click.echo("key,value")
        for key, value in obj.items():
            if isinstance(value, float):
                value = format_float(value)
            elif isinstance(value, (list, tuple)):
                value = ";".join(
                    format_float(v) if isinstance(v, float) else str(v)
                    for v in value)
            click.echo(f"{key},{value}")


def _emit_rows(rows: list[dict], fmt: str):
    if fmt == "json":
        click.echo(json.dumps({"rows": rows}))
        return
    if not rows:
        return
    header = list(rows[0])
    click.echo(",".join(header))
    for row in rows:
        cells = []
        for key in header:
            value = row[key]
            if value is None:
                cells.append("")
            elif isinstance(value, float):
                cells.append(format_float(value))
            else:
                cells.append(str(value))
        click.echo(",".join(cells))


def _load_cone(spec: str, dim: int) -> SimplicialCone:
    if spec == "orthant":
        return orthant(dim)
    try:
        return SimplicialCone(read_matrix(spec))
    except ParseError as exc:
        _fail(EXIT_PARSE, str(exc))
    except SingularMatrixError as exc:
        _fail(EXIT_PARSE, f"cone generators are singular: {exc}")


OUTER_BUILDERS = {
    "jacobi": lambda a, omega: jacobi_splitting(a),
    "gauss-seidel": lambda a, omega: gauss_seidel_splitting(a),
    "sor": lambda a, omega: sor_splitting(a, omega),
    "trivial": lambda a, omega: trivial_splitting(a),
}


@click.group()
@click.version_option(version=__version__, prog_name="splitstage")
def main():
    """Matrix-splitting solvers over cones and the pandemic-model application."""


@main.command("classify")
@click.argument("a_file", type=click.Path(exists=True))
@click.argument("u_file", type=click.Path(exists=True))
@click.argument("v_file", type=click.Path(exists=True))
@click.option("--cone", "cone_spec", default="orthant", show_default=True,
              help="'orthant' or a generator-matrix CSV file.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
              default="json", show_default=True)
def cmd_classify(a_file, u_file, v_file, cone_spec, fmt):
    """Classify the splitting A = U - V with respect to a cone."""
    try:
        a = read_matrix(a_file)
        u = read_matrix(u_file)
        v = read_matrix(v_file)
    except ParseError as exc:
        _fail(EXIT_PARSE, str(exc))
    cone = _load_cone(cone_spec, a.shape[0])
    try:
        splitting = Splitting(a, u, v)
    except (InvalidSplittingError, MismatchedMatrixError) as exc:
        _fail(EXIT_SPLITTING_MISMATCH, str(exc))
    except SingularMatrixError as exc:
        _fail(EXIT_SINGULAR_U, str(exc))
    try:
        flags = classify(splitting, cone)
        convergence = is_convergent(splitting)
    except NoConvergenceError as exc:
        _fail(EXIT_NO_CONVERGENCE, str(exc))
    _emit_object({
        "regular": flags.regular,
        "weak_type1": flags.weak_type1,
        "weak_type2": flags.weak_type2,
        "rho": convergence.spectral_radius,
        "convergent": convergence.convergent,
    }, fmt)


@main.command("solve")
@click.argument("a_file", type=click.Path(exists=True))
@click.argument("b_file", type=click.Path(exists=True))
@click.option("--outer", type=click.Choice(sorted(OUTER_BUILDERS)),
              default="jacobi", show_default=True)
@click.option("--outer-omega", type=float, default=1.0, show_default=True,
              help="Relaxation for --outer=sor.")
@click.option("--omega", type=float, default=1.0, show_default=True,
              help="Relaxation of the inner splitting (SOR of U).")
@click.option("--s", "sweeps", type=int, default=2, show_default=True,
              help="Inner sweeps per outer step.")
@click.option("--eps", type=float, default=1e-8, show_default=True)
@click.option("--max-outer", type=int, default=100_000, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
              default="json", show_default=True)
def cmd_solve(a_file, b_file, outer, outer_omega, omega, sweeps, eps,
              max_outer, fmt):
    """Solve A X = B with the stationary two-stage scheme."""
    try:
        a = read_matrix(a_file)
        b = read_matrix(b_file)
    except ParseError as exc:
        _fail(EXIT_PARSE, str(exc))
    try:
        outer_split = OUTER_BUILDERS[outer](a, outer_omega)
        cfg = TwoStageConfig(schedule=sweeps, omega=omega, eps=eps,
                             max_outer=max_outer)
        x, report = run_stationary(a, b, outer_split, cfg)
    except SingularMatrixError as exc:
        _fail(EXIT_SINGULAR_U, str(exc))
    except (InvalidParamsError, ValueError) as exc:
        _fail(EXIT_PARSE, str(exc))
    if fmt == "csv":
        for row in np.atleast_2d(x):
            click.echo(",".join(format_float(v) for v in row))
    else:
        _emit_object({
            "converged": report.converged,
            "outer_iterations": report.outer_iterations,
            "final_update_norm": report.final_update_norm,
            "final_residual": report.final_residual,
            "solution": [[float(v) for v in row] for row in np.atleast_2d(x)],
        }, fmt)
    if not report.converged:
        sys.exit(EXIT_NO_CONVERGENCE)


@main.command("ngm")
@click.argument("params_file", type=click.Path(exists=True))
@click.option("--contact", "contact_file", type=click.Path(exists=True),
              default=None, help="M x M contact-matrix CSV (age-structured run).")
@click.option("--populations", default=None,
              help="Comma-separated group populations (defaults to ones).")
@click.option("--method", type=click.Choice(["direct", "twostage"]),
              default="direct", show_default=True)
@click.option("--omega", type=float, default=1.0, show_default=True)
@click.option("--s", "sweeps", type=int, default=2, show_default=True)
@click.option("--eps", type=float, default=1e-8, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
              default="json", show_default=True)
def cmd_ngm(params_file, contact_file, populations, method, omega, sweeps,
            eps, fmt):
    """Next-generation matrix and basic reproduction number."""
    try:
        params = read_params(params_file)
        age = None
        if contact_file is not None:
            contact = read_matrix(contact_file)
            if populations is not None:
                pops = parse_float_list(populations)
            else:
                pops = [1.0] * contact.shape[0]
            age = AgeStructure(populations=pops, contact=contact)
        elif populations is not None:
            _fail(EXIT_PARSE, "--populations requires --contact")
    except (ParseError, InvalidParamsError) as exc:
        _fail(EXIT_PARSE, str(exc))
    try:
        cfg = TwoStageConfig(schedule=sweeps, omega=omega, eps=eps)
        result = ngm(params, age=age, method=method, config=cfg)
    except SingularMatrixError as exc:
        _fail(EXIT_SINGULAR_TRANSITION, str(exc))
    except (MaxIterationsError, NoConvergenceError) as exc:
        _fail(EXIT_NO_CONVERGENCE, str(exc))
    _emit_object({
        "r0": result.r0,
        "ngm_first_row": [float(v) for v in result.ngm[0]],
        "a_inverse_checksum": float(np.sum(result.transition_inverse)),
        "method": result.method,
    }, fmt)


@dataclasses.dataclass(frozen=True)
class SweepRow:
    """One row of the comparison sweep: iteration counts per scheme plus the
    conditioning (plain runs) or operator radius (block runs)."""
    size: int
    phi: float
    one_stage_iters: int
    two_stage_w1_iters: int
    two_stage_w17_iters: int
    kappa2: float | None
    rho_T: float | None
    converged: bool


def _table_configs(a):
    """Scheme columns of the comparison sweep.

    one-stage: classical Jacobi. two-stage(omega): outer SOR(omega), inner
    Jacobi sweeps on its U.
    """
    jac = jacobi_splitting(a)
    one = (jac, trivial_splitting(jac.u), 1)
    cols = {"one_stage": one}
    for omega, name in ((1.0, "two_stage_w1"), (1.7, "two_stage_w17")):
        outer = sor_splitting(a, omega)
        cols[name] = (outer, jacobi_splitting(outer.u), None)
    return cols


@main.command("table1")
@click.argument("params_file", type=click.Path(exists=True))
@click.option("--phis", default="0.07,0.08,0.09,0.10", show_default=True)
@click.option("--sizes", default="4,64", show_default=True)
@click.option("--eps", type=float, default=1e-8, show_default=True)
@click.option("--s", "sweeps", type=int, default=2, show_default=True)
@click.option("--max-outer", type=int, default=200_000, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
def cmd_table1(params_file, phis, sizes, eps, sweeps, max_outer, fmt):
    """Iteration-count sweep over the return-rate parameter phi.

    Compares the classical one-stage scheme against the two-stage scheme at
    relaxation 1.0 and 1.7, for the plain 4x4 system and its age-structured
    block extension. 4x4 rows carry the 2-norm condition number; block rows
    carry the spectral radius of the relaxation-1 two-stage operator.
    """
    try:
        params = read_params(params_file)
        phi_values = parse_float_list(phis)
        size_values = [int(s) for s in parse_float_list(sizes)]
    except (ParseError, ValueError, InvalidParamsError) as exc:
        _fail(EXIT_PARSE, str(exc))
    if any(size < 4 or size % 4 for size in size_values):
        _fail(EXIT_PARSE, "sizes must be positive multiples of 4")

    rows = []
    all_converged = True
    for size in sorted(size_values):
        for phi in phi_values:
            p = dataclasses.replace(params, phi=phi)
            a4 = build_transition(p)
            b4 = build_infection(p)
            if size == 4:
                a, b = a4, b4
            else:
                groups = size // 4
                age = AgeStructure(populations=np.ones(groups),
                                   contact=np.eye(groups))
                a, b = expand_age(a4, b4, age)
            counts = {}
            converged = True
            rho_t = None
            try:
                for name, (outer, inner, s_fixed) in _table_configs(a).items():
                    cfg = TwoStageConfig(
                        schedule=s_fixed if s_fixed is not None else sweeps,
                        eps=eps, max_outer=max_outer)
                    _, report = run_stationary(a, b, outer, cfg, inner=inner)
                    counts[name] = report.outer_iterations
                    converged = converged and report.converged
                    if name == "two_stage_w1" and size != 4:
                        rho_t = spectral_radius(
                            two_stage_operator(outer, inner, sweeps))
            except SingularMatrixError as exc:
                _fail(EXIT_SINGULAR_TRANSITION, str(exc))
            except NoConvergenceError as exc:
                _fail(EXIT_NO_CONVERGENCE, str(exc))
            row = SweepRow(
                size=size, phi=phi,
                one_stage_iters=counts["one_stage"],
                two_stage_w1_iters=counts["two_stage_w1"],
                two_stage_w17_iters=counts["two_stage_w17"],
                kappa2=condition_number_2(a4) if size == 4 else None,
                rho_T=rho_t, converged=converged,
            )
            all_converged = all_converged and converged
            rows.append(dataclasses.asdict(row))
    _emit_rows(rows, fmt)
    if not all_converged:
        sys.exit(EXIT_NO_CONVERGENCE)


@main.command("monotone")
@click.argument("params_file", type=click.Path(exists=True))
@click.option("--x0", default=None,
              help="Comma-separated start below the solution (default: derived).")
@click.option("--y0", default=None,
              help="Comma-separated start above the solution (default: derived).")
@click.option("--omega", type=float, default=1.0, show_default=True)
@click.option("--s", "sweeps", type=int, default=2, show_default=True)
@click.option("--eps", type=float, default=1e-8, show_default=True)
@click.option("--max-outer", type=int, default=100_000, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
def cmd_monotone(params_file, x0, y0, omega, sweeps, eps, max_outer, fmt):
    """Bracketing iteration on the first new-infection column.

    Emits one row per outer step with the lower and upper iterates; the
    lower columns are nondecreasing and the upper ones nonincreasing, and
    both converge to the same solution.
    """
    try:
        params = read_params(params_file)
        lower = np.array(parse_float_list(x0)) if x0 is not None else None
        upper = np.array(parse_float_list(y0)) if y0 is not None else None
    except (ParseError, InvalidParamsError) as exc:
        _fail(EXIT_PARSE, str(exc))
    a = build_transition(params)
    b = build_infection(params)[:, 0]
    try:
        outer = trivial_splitting(a)
        inner = sor_splitting(a, omega)
        if lower is None or upper is None:
            auto_lower, auto_upper = bracketing_initials(outer, inner, sweeps, b)
            lower = lower if lower is not None else auto_lower
            upper = upper if upper is not None else auto_upper
        cfg = TwoStageConfig(schedule=sweeps, omega=omega, eps=eps,
                             max_outer=max_outer)
        cone = orthant(a.shape[0], tol=1e-10)
        xs, ys, report = monotone_bracket(a, b, lower, upper, outer, cfg,
                                          cone, inner=inner)
    except SingularMatrixError as exc:
        _fail(EXIT_SINGULAR_TRANSITION, str(exc))
    except HypothesisFailedError as exc:
        _fail(EXIT_HYPOTHESIS, f"hypothesis failed: {exc.hypothesis}")
    except (MaxIterationsError, NoConvergenceError) as exc:
        _fail(EXIT_NO_CONVERGENCE, str(exc))
    n = a.shape[0]
    rows = []
    for k, (xk, yk) in enumerate(zip(xs, ys)):
        row = {"k": k}
        row.update({f"x{i + 1}": float(xk[i]) for i in range(n)})
        row.update({f"y{i + 1}": float(yk[i]) for i in range(n)})
        rows.append(row)
    _emit_rows(rows, fmt)


@main.command("compare")
@click.argument("a_file", type=click.Path(exists=True))
@click.argument("u1_file", type=click.Path(exists=True))
@click.argument("v1_file", type=click.Path(exists=True))
@click.argument("u2_file", type=click.Path(exists=True))
@click.argument("v2_file", type=click.Path(exists=True))
@click.option("--cone", "cone_spec", default="orthant", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
              default="json", show_default=True)
def cmd_compare(a_file, u1_file, v1_file, u2_file, v2_file, cone_spec, fmt):
    """Hypothesis-checked comparison of two splittings of one matrix."""
    try:
        a = read_matrix(a_file)
        mats = [read_matrix(f) for f in (u1_file, v1_file, u2_file, v2_file)]
    except ParseError as exc:
        _fail(EXIT_PARSE, str(exc))
    cone = _load_cone(cone_spec, a.shape[0])
    try:
        s1 = Splitting(a, mats[0], mats[1])
        s2 = Splitting(a, mats[2], mats[3])
    except (InvalidSplittingError, MismatchedMatrixError) as exc:
        _fail(EXIT_SPLITTING_MISMATCH, str(exc))
    except SingularMatrixError as exc:
        _fail(EXIT_SINGULAR_U, str(exc))
    try:
        report = compare_splittings(s1, s2, cone)
    except NotMonotoneError as exc:
        _fail(EXIT_HYPOTHESIS, str(exc))
    except NoConvergenceError as exc:
        _fail(EXIT_NO_CONVERGENCE, str(exc))
    _emit_object({
        "rho1": report.rho1,
        "rho2": report.rho2,
        "splitting1": {"regular": report.class1.regular,
                       "weak_type1": report.class1.weak_type1,
                       "weak_type2": report.class1.weak_type2},
        "splitting2": {"regular": report.class2.regular,
                       "weak_type1": report.class2.weak_type1,
                       "weak_type2": report.class2.weak_type2},
        "v2_ge_v1": report.v2_ge_v1,
        "u1inv_ge_u2inv": report.u1inv_ge_u2inv,
        "u2_ge_u1": report.u2_ge_u1,
        "u1_nonneg": report.u1_nonneg,
        "satisfied_rules": list(report.satisfied_rules),
        "predicts_ordering": report.predicts_ordering,
    }, fmt)


if __name__ == "__main__":
    main()
