//! Command-line front end.
//!
//! Exit codes: 0 success, 2 malformed arguments or expressions, 3 numeric
//! failure, 4 violated precondition.

mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use report::{format_float, Field, Format, Report, Table};

use crate::error::{Error, ErrorClass};
use crate::expr::{parse, Ast};
use crate::ivp::{
    eoc_study, residual_check, solve_abm, uniqueness_experiment, Candidate, ExactSolution,
    IvpProblem, ObservedOrder,
};
use crate::mvt::{self, SearchConfig, Witness};
use crate::nagumo::{counterexample_rhs, nagumo_scan, Rhs2D};
use crate::operators::{
    caputo_definition, caputo_smooth, fundamental_residual, rl_integral, taylor_poly,
    taylor_remainder_residual, FracOrder, Mesh, SampledFunction,
};

pub const DEFAULT_N: usize = 1025;
pub const DEFAULT_TOL: f64 = 1e-8;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;

/// Name accepted wherever a right-hand side `f(x, y)` is expected.
pub const COUNTEREXAMPLE: &str = "counterexample";
/// Name accepted by `ivp eoc --exact` for `y0 E_α(λ x^α)`.
pub const MITTAG_LEFFLER: &str = "mittag-leffler";

#[derive(Debug, Parser)]
#[command(
    name = "fracmvt",
    version,
    about = "Fractional integrals and Caputo derivatives, fractional mean value witnesses, \
             Nagumo-condition scans and fractional initial value problems"
)]
struct Cli {
    #[command(subcommand)]
    group: Group,
}

#[derive(Debug, Subcommand)]
enum Group {
    /// Riemann-Liouville integrals and Caputo derivatives on a uniform mesh
    #[command(subcommand)]
    Op(OpCommand),
    /// Numerical checks of the fractional fundamental theorem and Taylor formula
    #[command(subcommand)]
    Check(CheckCommand),
    /// Interior witnesses for the fractional mean value theorems
    #[command(subcommand)]
    Mvt(MvtCommand),
    /// The fractional Nagumo condition and its discontinuous counterexample
    #[command(subcommand)]
    Nagumo(NagumoCommand),
    /// Caputo initial value problems D^α y = f(x, y), y(0) = y0
    #[command(subcommand)]
    Ivp(IvpCommand),
}

#[derive(Debug, Subcommand)]
enum OpCommand {
    /// Riemann-Liouville integral J_a^β f(x) = 1/Γ(β) ∫_a^x (x-t)^(β-1) f(t) dt
    /// by product-trapezoidal quadrature (--alpha is β >= 0)
    RlInt(RlIntArgs),
    /// Caputo derivative D_{*a}^α f: `smooth` applies J^(⌈α⌉-α) to the symbolic
    /// ⌈α⌉-th derivative, `definition` differentiates J^(1-α)(f - f(a)) on the
    /// grid (α <= 1)
    Caputo(CaputoArgs),
}

#[derive(Debug, Subcommand)]
enum CheckCommand {
    /// Fractional fundamental theorem D_{*a}^α J_a^α f = f: prints the sup
    /// residual over interior nodes (α <= 1)
    Fundamental(IntervalArgs),
    /// Fractional Taylor formula f - T_{⌈α⌉-1}[f; a] = J_a^α D_{*a}^α f: prints
    /// the sup residual over all nodes
    TaylorRemainder(IntervalArgs),
}

#[derive(Debug, Subcommand)]
enum MvtCommand {
    /// Integral mean value theorem J_a^α f(b) = (b-a)^α f(ξ) / Γ(α+1) for
    /// continuous f: prints the leftmost witness ξ in (a, b)
    Integral(MvtArgs),
    /// Weighted integral mean value theorem J_a^α (f g)(x) = f(ξ) J_a^α g(x)
    /// for g of one sign on [a, x] (x is --b): prints the leftmost witness
    IntegralWeighted(WeightedArgs),
    /// Differential mean value theorem f(b) - T_{⌈α⌉-1}[f; a](b) =
    /// D_{*a}^α f(ξ) (b-a)^α / Γ(α+1): prints the leftmost witness ξ in (a, b)
    Differential(MvtArgs),
}

#[derive(Debug, Subcommand)]
enum NagumoCommand {
    /// Samples the Nagumo condition x^α |f(x,y1) - f(x,y2)| <= Γ(α+1) |y1 - y2|
    /// that guarantees at most one continuous solution; the verdict holds on
    /// the sample only
    Scan(ScanArgs),
    /// Evaluates the discontinuous right-hand side satisfying the Nagumo
    /// condition for which y(0) = 0 has infinitely many solutions
    Counterexample(CounterexampleArgs),
}

#[derive(Debug, Subcommand)]
enum IvpCommand {
    /// Solves D_{*0}^α y = f(x, y), y(0) = y0 with the fractional
    /// Adams-Bashforth-Moulton predictor-corrector
    Solve(SolveArgs),
    /// Residual sup |D_{*0}^α y - f(x, y)| of a candidate solution; `solve`
    /// checks the computed solution
    Residual(ResidualArgs),
    /// Empirical order of convergence of the solver against an exact solution
    Eoc(EocArgs),
    /// Gap functional x^-α |z - z̃| between solutions from perturbed initial
    /// values, the quantity behind the Nagumo-type uniqueness theorem; on the
    /// counterexample also checks the solution family y = c x^α
    Uniqueness(UniquenessArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Write the output to this file instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct IntervalArgs {
    /// Function of x, e.g. "x^2 + sin(x)"
    #[arg(long = "f", value_name = "EXPR", allow_hyphen_values = true)]
    f: String,
    /// Order α > 0
    #[arg(long)]
    alpha: f64,
    /// Starting point
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    a: f64,
    /// Right endpoint
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    b: f64,
    /// Number of mesh nodes
    #[arg(long, default_value_t = DEFAULT_N)]
    n: usize,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct RlIntArgs {
    #[command(flatten)]
    #[serde(flatten)]
    interval: IntervalArgs,
    /// Print only the value at the node nearest to this point
    #[arg(long, allow_negative_numbers = true)]
    at: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Route {
    Smooth,
    Definition,
}

#[derive(Debug, Args, Serialize)]
struct CaputoArgs {
    #[command(flatten)]
    #[serde(flatten)]
    interval: IntervalArgs,
    /// Print only the value at the node nearest to this point
    #[arg(long, allow_negative_numbers = true)]
    at: Option<f64>,
    #[arg(long, value_enum, default_value_t = Route::Smooth)]
    route: Route,
}

#[derive(Debug, Args, Serialize)]
struct MvtArgs {
    #[command(flatten)]
    #[serde(flatten)]
    interval: IntervalArgs,
    /// Relative tolerance for accepting a point as a witness
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Debug, Args, Serialize)]
struct WeightedArgs {
    #[command(flatten)]
    #[serde(flatten)]
    interval: IntervalArgs,
    /// Weight g of one sign on [a, b]
    #[arg(long = "g", value_name = "EXPR", allow_hyphen_values = true)]
    g: String,
    /// Relative tolerance for accepting a point as a witness
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Debug, Args, Serialize)]
struct ScanArgs {
    /// f(x, y) as an expression, or `counterexample`
    #[arg(long = "f", value_name = "EXPR", allow_hyphen_values = true, default_value = COUNTEREXAMPLE)]
    f: String,
    /// Order α in (0, 1)
    #[arg(long)]
    alpha: f64,
    /// Multiplies f
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    scale: f64,
    /// Right end of the x range (0, b]
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 101)]
    nx: usize,
    #[arg(long, default_value_t = 101)]
    ny: usize,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    ylo: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    yhi: f64,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct CounterexampleArgs {
    /// Order α in (0, 1)
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    x: f64,
    #[arg(long, allow_negative_numbers = true)]
    y: f64,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct ProblemArgs {
    /// f(x, y) as an expression, or `counterexample`
    #[arg(long = "f", value_name = "EXPR", allow_hyphen_values = true)]
    f: String,
    /// Order α in (0, 1]
    #[arg(long)]
    alpha: f64,
    /// Right endpoint of [0, b]
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Initial value y(0)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    y0: f64,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct SolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    problem: ProblemArgs,
    /// Number of steps
    #[arg(long, default_value_t = DEFAULT_N)]
    n: usize,
    /// Corrector sweeps per step
    #[arg(long, default_value_t = 1)]
    sweeps: usize,
    /// Print only the value at the node nearest to this point
    #[arg(long)]
    at: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
struct ResidualArgs {
    #[command(flatten)]
    #[serde(flatten)]
    problem: ProblemArgs,
    /// Candidate y(x) as an expression, or `solve` for the computed solution
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    candidate: String,
    /// Number of steps
    #[arg(long, default_value_t = DEFAULT_N)]
    n: usize,
}

#[derive(Debug, Args, Serialize)]
struct EocArgs {
    #[command(flatten)]
    #[serde(flatten)]
    problem: ProblemArgs,
    /// Exact solution y(x) as an expression, or `mittag-leffler` for
    /// y0 E_α(λ x^α)
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    exact: String,
    /// λ of the Mittag-Leffler solution
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    lambda: f64,
    /// Ascending step counts
    #[arg(long, value_delimiter = ',', default_value = "64,128,256,512")]
    ns: Vec<usize>,
}

#[derive(Debug, Args, Serialize)]
struct UniquenessArgs {
    #[command(flatten)]
    #[serde(flatten)]
    problem: ProblemArgs,
    /// Perturbations ε of y0
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "1e-3,1e-6",
        allow_negative_numbers = true
    )]
    eps: Vec<f64>,
    /// Number of steps
    #[arg(long, default_value_t = DEFAULT_N)]
    n: usize,
}

/// An error plus the offending input, for parse errors.
struct Failure {
    error: Error,
    context: Option<String>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure {
            error,
            context: None,
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn expression(source: &str) -> Outcome<Ast> {
    parse(source).map_err(|e| Failure {
        context: Some(format!("  {source}\n  {}^", " ".repeat(e.offset))),
        error: e.into(),
    })
}

fn order(alpha: f64) -> Outcome<FracOrder> {
    Ok(FracOrder::new(alpha)?)
}

fn rhs(source: &str, order: FracOrder) -> Outcome<Rhs2D> {
    if source.trim() == COUNTEREXAMPLE {
        Ok(counterexample_rhs(order)?)
    } else {
        Ok(Rhs2D::Expr(expression(source)?))
    }
}

fn params(args: &impl Serialize) -> serde_json::Value {
    serde_json::to_value(args).expect("argument structs serialize")
}

fn sampled_report(
    command: &'static str,
    params: serde_json::Value,
    s: &SampledFunction,
    at: Option<f64>,
) -> Outcome<Report> {
    let report = Report::new(command, params);
    if let Some(x) = at {
        let j = s.mesh().nearest(x).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "--at {x} lies outside [{}, {}]",
                s.mesh().a(),
                s.mesh().b()
            ))
        })?;
        return Ok(report
            .field("x", s.mesh().node(j))
            .field("value", s.values()[j]));
    }
    Ok(report.table(Table {
        name: "samples",
        columns: vec!["x", "value"],
        rows: s
            .mesh()
            .nodes()
            .zip(s.values())
            .map(|(x, v)| vec![x.into(), (*v).into()])
            .collect(),
    }))
}

fn witness_report(command: &'static str, params: serde_json::Value, w: &Witness) -> Report {
    Report::new(command, params)
        .field("xi", w.xi)
        .field("target", w.target)
        .field("residual", w.residual)
        .field("lo", w.lo)
        .field("hi", w.hi)
        .field("degenerate", w.degenerate)
}

fn search(tol: f64) -> Outcome<SearchConfig> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("--tol must be positive, got {tol}")).into());
    }
    Ok(SearchConfig {
        tolerance: tol,
        ..SearchConfig::default()
    })
}

fn problem(args: &ProblemArgs) -> Outcome<IvpProblem> {
    let order = order(args.alpha)?;
    Ok(IvpProblem::new(
        order,
        args.b,
        args.y0,
        rhs(&args.f, order)?,
    )?)
}

fn execute(group: &Group) -> Outcome<(Report, &OutputArgs)> {
    match group {
        Group::Op(OpCommand::RlInt(args)) => {
            let i = &args.interval;
            let mesh = Mesh::new(i.a, i.b, i.n)?;
            let f = SampledFunction::from_ast(&expression(&i.f)?, mesh)?;
            let j = rl_integral(&f, i.alpha)?;
            Ok((
                sampled_report("op rl-int", params(args), &j, args.at)?,
                &i.output,
            ))
        }
        Group::Op(OpCommand::Caputo(args)) => {
            let i = &args.interval;
            let mesh = Mesh::new(i.a, i.b, i.n)?;
            let f = expression(&i.f)?;
            let order = order(i.alpha)?;
            let d = match args.route {
                Route::Smooth => caputo_smooth(&f, order, mesh)?,
                Route::Definition => {
                    let taylor = taylor_poly(&f, i.a, order.ceil() - 1)?;
                    caputo_definition(&SampledFunction::from_ast(&f, mesh)?, order, &taylor)?
                }
            };
            Ok((
                sampled_report("op caputo", params(args), &d, args.at)?,
                &i.output,
            ))
        }
        Group::Check(CheckCommand::Fundamental(i)) => {
            let r = fundamental_residual(
                &expression(&i.f)?,
                order(i.alpha)?,
                Mesh::new(i.a, i.b, i.n)?,
            )?;
            Ok((
                Report::new("check fundamental", params(i)).field("residual", r),
                &i.output,
            ))
        }
        Group::Check(CheckCommand::TaylorRemainder(i)) => {
            let r = taylor_remainder_residual(
                &expression(&i.f)?,
                order(i.alpha)?,
                Mesh::new(i.a, i.b, i.n)?,
            )?;
            Ok((
                Report::new("check taylor-remainder", params(i)).field("residual", r),
                &i.output,
            ))
        }
        Group::Mvt(MvtCommand::Integral(args)) => {
            let i = &args.interval;
            let w = mvt::simple_integral_mvt_witness_with(
                &expression(&i.f)?,
                order(i.alpha)?,
                i.a,
                i.b,
                i.n,
                &search(args.tol)?,
            )?;
            Ok((witness_report("mvt integral", params(args), &w), &i.output))
        }
        Group::Mvt(MvtCommand::IntegralWeighted(args)) => {
            let i = &args.interval;
            let w = mvt::integral_mvt_witness_with(
                &expression(&i.f)?,
                &expression(&args.g)?,
                order(i.alpha)?,
                i.a,
                i.b,
                i.n,
                &search(args.tol)?,
            )?;
            Ok((
                witness_report("mvt integral-weighted", params(args), &w),
                &i.output,
            ))
        }
        Group::Mvt(MvtCommand::Differential(args)) => {
            let i = &args.interval;
            let w = mvt::differential_mvt_witness_with(
                &expression(&i.f)?,
                order(i.alpha)?,
                i.a,
                i.b,
                i.n,
                &search(args.tol)?,
            )?;
            Ok((
                witness_report("mvt differential", params(args), &w),
                &i.output,
            ))
        }
        Group::Nagumo(NagumoCommand::Scan(args)) => {
            let order = order(args.alpha)?;
            let f = rhs(&args.f, order)?.scaled(args.scale);
            let r = nagumo_scan(&f, order, args.b, args.nx, args.ny, (args.ylo, args.yhi))?;
            let (x, y1, y2) = match r.argmax {
                Some((x, y1, y2)) => (Some(x), Some(y1), Some(y2)),
                None => (None, None, None),
            };
            let report = Report::new("nagumo scan", params(args))
                .field("sup_ratio", r.sup_ratio)
                .field("satisfied_on_sample", r.satisfied)
                .field("argmax_x", x)
                .field("argmax_y1", y1)
                .field("argmax_y2", y2)
                .field("samples_used", r.samples_used)
                .note("a sampled supremum, not a proof for all (x, y)");
            Ok((report, &args.output))
        }
        Group::Nagumo(NagumoCommand::Counterexample(args)) => {
            let order = order(args.alpha)?;
            let f = counterexample_rhs(order)?;
            let threshold = args.x.powf(args.alpha);
            let branch = if args.y > threshold {
                "y > x^alpha"
            } else if args.y > 0.0 {
                "0 < y <= x^alpha"
            } else {
                "y <= 0"
            };
            let report = Report::new("nagumo counterexample", params(args))
                .field("value", f.eval(args.x, args.y)?)
                .field("branch", branch);
            Ok((report, &args.output))
        }
        Group::Ivp(IvpCommand::Solve(args)) => {
            let p = problem(&args.problem)?;
            let s = solve_abm(&p, args.n, args.sweeps)?;
            let report = sampled_report("ivp solve", params(args), &s.sampled()?, args.at)?
                .field("corrector_iterations", s.corrector_iterations)
                .field("max_correction", s.max_correction);
            Ok((report, &args.problem.output))
        }
        Group::Ivp(IvpCommand::Residual(args)) => {
            let p = problem(&args.problem)?;
            let candidate = if args.candidate.trim() == "solve" {
                Candidate::Sampled(solve_abm(&p, args.n, 1)?.sampled()?)
            } else {
                Candidate::Expr(expression(&args.candidate)?)
            };
            let r = residual_check(&candidate, &p, args.n + 1)?;
            Ok((
                Report::new("ivp residual", params(args)).field("residual", r),
                &args.problem.output,
            ))
        }
        Group::Ivp(IvpCommand::Eoc(args)) => {
            let p = problem(&args.problem)?;
            let exact = if args.exact.trim() == MITTAG_LEFFLER {
                ExactSolution::MittagLeffler {
                    lambda: args.lambda,
                    y0: p.y0(),
                }
            } else {
                ExactSolution::Expr(expression(&args.exact)?)
            };
            let rows = eoc_study(&p, &exact, &args.ns)?;
            let report = Report::new("ivp eoc", params(args)).table(Table {
                name: "rows",
                columns: vec!["n", "error", "order"],
                rows: rows
                    .iter()
                    .map(|r| {
                        let order = match r.order {
                            None => Field::Null,
                            Some(ObservedOrder::Rate(v)) => Field::Num(v),
                            Some(ObservedOrder::Exact) => Field::Text("exact".into()),
                        };
                        vec![r.n.into(), r.error.into(), order]
                    })
                    .collect(),
            });
            Ok((report, &args.problem.output))
        }
        Group::Ivp(IvpCommand::Uniqueness(args)) => {
            let p = problem(&args.problem)?;
            let r = uniqueness_experiment(&p, &args.eps, args.n)?;
            let mut report = Report::new("ivp uniqueness", params(args)).table(Table {
                name: "gaps",
                columns: vec!["eps", "sup_gap"],
                rows: r
                    .gaps
                    .iter()
                    .map(|(e, g)| vec![(*e).into(), (*g).into()])
                    .collect(),
            });
            if !r.family.is_empty() {
                report = report.table(Table {
                    name: "family",
                    columns: vec!["c", "residual"],
                    rows: r
                        .family
                        .iter()
                        .map(|(c, v)| vec![(*c).into(), (*v).into()])
                        .collect(),
                });
            }
            Ok((report.note(r.limitation), &args.problem.output))
        }
    }
}

fn exit_code(error: &Error) -> i32 {
    match error.class() {
        ErrorClass::Input => EXIT_INPUT,
        ErrorClass::Numeric => EXIT_NUMERIC,
        ErrorClass::Precondition => EXIT_PRECONDITION,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Results go to `stdout` or `--out`, diagnostics to
/// `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_INPUT
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match execute(&cli.group) {
        Ok((report, output)) => {
            let text = report.render(output.format);
            let written = match &output.out {
                Some(path) => std::fs::write(path, text),
                None => stdout.write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write output: {e}");
                    EXIT_INPUT
                }
            }
        }
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.error);
            if let Some(context) = failure.context {
                let _ = writeln!(stderr, "{context}");
            }
            exit_code(&failure.error)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("fracmvt").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn rl_int_at_a_point() {
        let (code, out, _) = call(&[
            "op", "rl-int", "--f", "1", "--alpha", "0.5", "--at", "1", "--format", "csv",
        ]);
        assert_eq!(code, 0);
        let value: f64 = out
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap();
        assert!((value - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-4);
    }

    #[test]
    fn parse_errors_point_at_the_offset() {
        let (code, _, err) = call(&["op", "rl-int", "--f", "x +", "--alpha", "0.5"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("offset 3"), "{err}");
        assert!(err.contains("     ^"), "{err}");
    }

    #[test]
    fn sign_change_is_a_precondition_failure() {
        let args = [
            "mvt",
            "integral-weighted",
            "--f",
            "x",
            "--alpha",
            "0.5",
            "--g",
        ];
        let (code, _, err) = call(&[&args[..], &["x - 0.5"]].concat());
        assert_eq!(code, EXIT_PRECONDITION, "{err}");
        let (code, out, _) = call(&[&args[..], &["x - 2", "--format", "csv"]].concat());
        assert_eq!(code, 0);
        assert!(out.starts_with("xi,target,residual,lo,hi,degenerate\n"));
    }

    #[test]
    fn bad_flags_exit_two_and_help_exits_zero() {
        assert_eq!(call(&["op", "rl-int", "--alpha", "x"]).0, EXIT_INPUT);
        assert_eq!(call(&["frobnicate"]).0, EXIT_INPUT);
        let (code, out, _) = call(&["nagumo", "scan", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("Nagumo condition"));
    }

    #[test]
    fn numeric_failures_exit_three() {
        let (code, _, err) = call(&["op", "rl-int", "--f", "ln(x)", "--alpha", "0.5"]);
        assert_eq!(code, EXIT_NUMERIC, "{err}");
    }

    #[test]
    fn negative_numbers_are_values() {
        let (code, out, err) = call(&[
            "nagumo", "scan", "--alpha", "0.5", "--ylo", "-1", "--nx", "11", "--ny", "11",
        ]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("satisfied_on_sample"));
    }
}
