//! Command-line front end: fractional derivatives and integrals of
//! polynomial literals, benchmark-problem solves, reference-table
//! regressions, error-curve data files, and the verification suite.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gfd::expr::GeneralizedPolynomial;
use gfd::fracops::{caputo_series_derivative, fractional_integral, gfd_monomial, OperatorParams};
use gfd::odesolve::{
    riccati1_closed, riccati2_closed, series_solution_ex1, series_solution_ex2, solve_numeric,
    GfdProblem, EXAMPLE1_DEFAULT_TERMS, EXAMPLE2_DEFAULT_TERMS,
};
use gfd::report::verify::{run_verification_suite, SuiteConfig};
use gfd::report::{emit_error_curves, figure_spec, reproduce_table_with, TableId};
use gfd::specfun::{FracOrder, ShapeParam};

#[derive(Parser)]
#[command(
    name = "gfd",
    about = "Generalized fractional derivative toolkit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    /// Explicit shape parameter (requires --beta).
    Fixed,
    /// Shape equal to the order (beta = alpha).
    Alpha,
    /// Shape equal to each term's exponent (Caputo-matching).
    Exponent,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemArg {
    Riccati1,
    Riccati2,
    Example1,
    Example2,
    Example3,
    Example4,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Series,
    Numeric,
}

#[derive(Subcommand)]
enum Command {
    /// Fractional derivative of a polynomial literal, e.g. "2*t^2 + t^1/2".
    Deriv {
        #[arg(long)]
        expr: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Shape parameter; required with --strategy fixed.
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<f64>,
        #[arg(long, value_enum, default_value = "fixed")]
        strategy: StrategyArg,
        /// Evaluation point.
        #[arg(long, allow_negative_numbers = true)]
        at: f64,
    },
    /// Fractional integral of a polynomial literal over (0, T].
    Integrate {
        #[arg(long)]
        expr: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        /// Upper integration endpoint.
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
    },
    /// Solve a benchmark problem on [0, 1] and write an x,y CSV.
    Solve {
        #[arg(long, value_enum)]
        problem: ProblemArg,
        /// Order for the Riccati problems; the example problems are fixed
        /// at 1/2.
        #[arg(long)]
        alpha: Option<f64>,
        /// Forcing rate for example1.
        #[arg(long, allow_negative_numbers = true)]
        k: Option<f64>,
        /// Mixing coefficient for example4.
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
        /// Number of output intervals on [0, 1].
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reproduce one embedded reference table and write the comparison CSV.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit the error-curve data behind one of the published figures.
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the verification suite; exit code 0 iff every check passes.
    Verify {
        /// Run only checks whose name contains this substring.
        #[arg(long)]
        filter: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<bool, String> {
    match command {
        Command::Deriv {
            expr,
            alpha,
            beta,
            strategy,
            at,
        } => cmd_deriv(&expr, alpha, beta, strategy, at),
        Command::Integrate {
            expr,
            alpha,
            beta,
            to,
        } => cmd_integrate(&expr, alpha, beta, to),
        Command::Solve {
            problem,
            alpha,
            k,
            lambda,
            grid,
            method,
            out,
        } => cmd_solve(problem, alpha, k, lambda, grid, method, &out),
        Command::Table { id, tolerance, out } => cmd_table(id, tolerance, &out),
        Command::Figure { id, out } => cmd_figure(id, &out),
        Command::Verify { filter } => cmd_verify(filter),
    }
}

fn parse_order(alpha: f64) -> Result<FracOrder, String> {
    FracOrder::new(alpha).map_err(|e| e.to_string())
}

fn parse_poly(expr: &str) -> Result<GeneralizedPolynomial, String> {
    expr.parse().map_err(|e: gfd::expr::ExprError| e.to_string())
}

fn operator_params(
    alpha: f64,
    beta: Option<f64>,
    strategy: StrategyArg,
) -> Result<OperatorParams, String> {
    let order = parse_order(alpha)?;
    match strategy {
        StrategyArg::Fixed => {
            let beta = beta.ok_or("--strategy fixed requires --beta")?;
            let shape = ShapeParam::new(beta).map_err(|e| e.to_string())?;
            Ok(OperatorParams::fixed(order, shape))
        }
        StrategyArg::Alpha => Ok(OperatorParams::beta_equals_alpha(order)),
        StrategyArg::Exponent => Ok(OperatorParams::beta_equals_exponent(order)),
    }
}

fn cmd_deriv(
    expr: &str,
    alpha: f64,
    beta: Option<f64>,
    strategy: StrategyArg,
    at: f64,
) -> Result<bool, String> {
    let poly = parse_poly(expr)?;
    let params = operator_params(alpha, beta, strategy)?;
    let derivative = match strategy {
        StrategyArg::Exponent => {
            caputo_series_derivative(&poly, params.order()).map_err(|e| e.to_string())?
        }
        _ => {
            let mut terms = Vec::with_capacity(poly.terms().len());
            for term in poly.terms() {
                let (c, e) = gfd_monomial(term.exponent, &params).map_err(|e| e.to_string())?;
                terms.push((term.coeff * c, e));
            }
            GeneralizedPolynomial::new(terms).map_err(|e| e.to_string())?
        }
    };
    let value = derivative.eval(at).map_err(|e| e.to_string())?;
    println!("D^{alpha}[{poly}] = {derivative}");
    println!("value at t = {at}: {value}");
    Ok(true)
}

fn cmd_integrate(expr: &str, alpha: f64, beta: f64, to: f64) -> Result<bool, String> {
    let poly = parse_poly(expr)?;
    let order = parse_order(alpha)?;
    let shape = ShapeParam::new(beta).map_err(|e| e.to_string())?;
    let params = OperatorParams::fixed(order, shape);
    let value = fractional_integral(
        |x| poly.eval(x).unwrap_or(f64::NAN),
        &params,
        to,
    )
    .map_err(|e| e.to_string())?;
    println!("I^{alpha}[{poly}] over (0, {to}] = {value}");
    Ok(true)
}

fn write_xy_csv(path: &Path, rows: &[(f64, f64)]) -> Result<(), String> {
    let mut out = String::from("x,y\n");
    for (x, y) in rows {
        let _ = writeln!(out, "{x:.12e},{y:.12e}");
    }
    std::fs::write(path, out).map_err(|e| format!("failed writing {}: {e}", path.display()))
}

fn cmd_solve(
    problem: ProblemArg,
    alpha: Option<f64>,
    k: Option<f64>,
    lambda: Option<f64>,
    grid: usize,
    method: MethodArg,
    out: &Path,
) -> Result<bool, String> {
    if grid < 2 {
        return Err("--grid must be at least 2".into());
    }
    let is_example = !matches!(problem, ProblemArg::Riccati1 | ProblemArg::Riccati2);
    if is_example {
        if let Some(a) = alpha {
            if (a - 0.5).abs() > 1e-12 {
                return Err("the example problems have order 1/2; omit --alpha or pass 0.5".into());
            }
        }
    }
    if k.is_some() && !matches!(problem, ProblemArg::Example1) {
        return Err("--k applies only to example1".into());
    }
    if lambda.is_some() && !matches!(problem, ProblemArg::Example4) {
        return Err("--lambda applies only to example4".into());
    }
    let riccati_order = || -> Result<FracOrder, String> {
        parse_order(alpha.ok_or("--alpha is required for the Riccati problems")?)
    };
    let gfd_problem = match problem {
        ProblemArg::Riccati1 => GfdProblem::riccati1(riccati_order()?),
        ProblemArg::Riccati2 => GfdProblem::riccati2(riccati_order()?),
        ProblemArg::Example1 => GfdProblem::example1(k.unwrap_or(1.0)),
        ProblemArg::Example2 => GfdProblem::example2(),
        ProblemArg::Example3 => GfdProblem::example3(),
        ProblemArg::Example4 => GfdProblem::example4(lambda.unwrap_or(1.0)),
    };
    let xs: Vec<f64> = (0..=grid).map(|i| i as f64 / grid as f64).collect();
    let rows: Vec<(f64, f64)> = match method {
        MethodArg::Closed => {
            let order = gfd_problem.order();
            let shape = gfd_problem.shape();
            let closed: fn(f64, FracOrder, ShapeParam) -> f64 = match problem {
                ProblemArg::Riccati1 => riccati1_closed,
                ProblemArg::Riccati2 => riccati2_closed,
                _ => return Err("closed-form output is available only for the Riccati problems".into()),
            };
            xs.iter().map(|&x| (x, closed(x, order, shape))).collect()
        }
        MethodArg::Series => match problem {
            ProblemArg::Example1 => xs
                .iter()
                .map(|&x| {
                    series_solution_ex1(k.unwrap_or(1.0), x, EXAMPLE1_DEFAULT_TERMS)
                        .map(|s| (x, s.value))
                        .map_err(|e| e.to_string())
                })
                .collect::<Result<_, _>>()?,
            ProblemArg::Example2 => xs
                .iter()
                .map(|&x| {
                    series_solution_ex2(x, EXAMPLE2_DEFAULT_TERMS)
                        .map(|s| (x, s.value))
                        .map_err(|e| e.to_string())
                })
                .collect::<Result<_, _>>()?,
            _ => return Err("series output is available only for example1 and example2".into()),
        },
        MethodArg::Numeric => {
            let per = 4096usize.div_ceil(grid);
            let n_steps = per * grid;
            let curve = solve_numeric(&gfd_problem, 1.0, n_steps).map_err(|e| e.to_string())?;
            curve
                .samples()
                .iter()
                .step_by(per)
                .copied()
                .collect()
        }
    };
    write_xy_csv(out, &rows)?;
    println!("wrote {} rows to {}", rows.len(), out.display());
    Ok(true)
}

fn cmd_table(id: u8, tolerance: Option<f64>, out: &Path) -> Result<bool, String> {
    let table_id = TableId::from_number(id).ok_or("table id must be 1, 2, or 3")?;
    let report = reproduce_table_with(
        table_id,
        tolerance,
        gfd::odesolve::OperatorFamily::Generalized,
    );
    std::fs::write(out, report.to_csv())
        .map_err(|e| format!("failed writing {}: {e}", out.display()))?;
    print!("{}", report.render_text());
    println!("wrote comparison CSV to {}", out.display());
    Ok(report.pass)
}

fn cmd_figure(id: u8, out: &Path) -> Result<bool, String> {
    let (kind, order) = figure_spec(id).ok_or("figure id must be 1, 2, or 3")?;
    let rows = emit_error_curves(kind, order, 100, out).map_err(|e| e.to_string())?;
    println!(
        "figure {id}: wrote {rows} rows (x, err_gfd, err_cd) to {}",
        out.display()
    );
    Ok(true)
}

fn cmd_verify(filter: Option<String>) -> Result<bool, String> {
    let cfg = SuiteConfig {
        filter,
        ..SuiteConfig::default()
    };
    let report = run_verification_suite(&cfg);
    if report.checks.is_empty() {
        return Err("no checks match the filter".into());
    }
    print!("{}", report.render());
    Ok(report.all_passed())
}
