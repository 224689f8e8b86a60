//! Command-line front end for the boundary-value solver: evaluates the
//! reflecting kernel, the impedance series, the exact solution, and the
//! extrapolated-boundary approximation over a configured time grid, and
//! emits figure-ready CSV. Scenarios come from a TOML file
//! (see [`config`]) with flag overrides; flags win.
//!
//! Exit status: 0 on success, 1 for configuration or domain errors
//! (reported to stderr with field names), 2 when a convergence scan does
//! not converge within `nMax`.

// Domain checks are written `!(x >= 0.0)` on purpose: a NaN value must
// register as a violation, and the negated comparison catches it where
// `x < 0.0` would let it through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod csvio;

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use photondiff_core::born::{born_partial_sum, convergence_report};
use photondiff_core::exact::{
    ebc_solution, exact_solution, relative_error_curve, ExactError, FieldCurve,
};
use photondiff_core::kernels::{halfspace_neumann_kernel, slab_neumann_kernel};
use photondiff_core::model::{Geometry, TimeGrid};

use config::Scenario;
use csvio::{cell, masked_cell, write_records};

/// Fraction of the reference curve's peak below which comparison points
/// are masked out, keeping decayed tails from dominating error columns.
const TAIL_MASK: f64 = 0.01;

/// How many consecutive sub-tolerance increments the convergence scan
/// needs before it declares the series converged; mirrors the stopping
/// rule of the series evaluator.
const STREAK: u32 = 3;

#[derive(Parser)]
#[command(
    name = "photondiff",
    about = "Time-domain photon diffusion in a half space: impedance-series, exact, and \
             extrapolated-boundary solutions as CSV",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one field over the time grid (columns: t, <field>)
    Evaluate(EvaluateArgs),
    /// Evaluate two fields and their masked relative error
    /// (columns: t, <a>, <b>, relErr; masked cells empty)
    Compare(CompareArgs),
    /// Scan series orders for convergence over the grid
    /// (columns: n, maxRatio, maxIncrement, convergedFlag)
    Converge(Common),
    /// Dump the reflecting half-space kernel (columns: t, kernel)
    Kernel(Common),
    /// Dump the slab kernel with its image-series diagnostics
    /// (columns: t, kernel, imagesUsed, truncationError)
    Slab(SlabArgs),
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML); defaults apply where keys are absent
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the boundary impedance beta (mm/ps)
    #[arg(long)]
    beta: Option<f64>,
    /// Override the highest series order nMax
    #[arg(long)]
    nmax: Option<u32>,
    /// Override the convergence tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Override the on-axis evaluation depth x3 (mm)
    #[arg(long)]
    x3: Option<f64>,
    /// Override the time grid, as START:END:COUNT (ps)
    #[arg(long, value_parser = parse_grid)]
    grid: Option<TimeGrid>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    /// Zero-impedance reflecting kernel (the zeroth series term)
    Neumann,
    /// Partial sum of the impedance series through order nMax
    Born,
    /// Closed-form solution of the impedance boundary problem
    Exact,
    /// Extrapolated-boundary approximation
    Ebc,
}

impl Which {
    fn column(self) -> &'static str {
        match self {
            Which::Neumann => "neumann",
            Which::Born => "born",
            Which::Exact => "exact",
            Which::Ebc => "ebc",
        }
    }
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    common: Common,
    /// Field to evaluate
    #[arg(long, value_enum)]
    which: Which,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: Common,
    /// First field (the approximation under test)
    #[arg(long, value_enum)]
    a: Which,
    /// Second field (the reference the mask is taken from)
    #[arg(long, value_enum)]
    b: Which,
}

#[derive(Args)]
struct SlabArgs {
    #[command(flatten)]
    common: Common,
    /// Slab width (mm); overrides the configured geometry
    #[arg(long = "L")]
    width: Option<f64>,
    /// Image pairs to sum on each side; overrides the configured geometry
    #[arg(long = "M")]
    images: Option<u32>,
}

fn parse_grid(text: &str) -> Result<TimeGrid, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, end, count] = parts.as_slice() else {
        return Err(String::from("expected START:END:COUNT"));
    };
    let t_start: f64 = start.parse().map_err(|_| format!("bad grid start {start:?}"))?;
    let t_end: f64 = end.parse().map_err(|_| format!("bad grid end {end:?}"))?;
    let count: u32 = count.parse().map_err(|_| format!("bad grid count {count:?}"))?;
    Ok(TimeGrid { t_start, t_end, count })
}

/// Failures, ranked by exit status: configuration and domain errors exit
/// 1, a convergence scan that runs out of orders exits 2.
enum Failure {
    Invalid(String),
    NotConverged(String),
}

impl Failure {
    fn status(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::NotConverged(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::NotConverged(m) => m,
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Invalid(format!("io: {e}"))
    }
}

impl From<ExactError> for Failure {
    fn from(e: ExactError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version displays succeed; malformed usage shares
            // the validation exit status so 2 stays reserved for
            // unconverged scans.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Evaluate(args) => run_evaluate(args),
        Command::Compare(args) => run_compare(args),
        Command::Converge(common) => run_converge(common),
        Command::Kernel(common) => run_kernel(common),
        Command::Slab(args) => run_slab(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", failure.message());
            ExitCode::from(failure.status())
        }
    }
}

/// Load the scenario, lay the flag overrides on top, and validate.
fn resolve(common: &Common) -> Result<Scenario, Failure> {
    let mut scenario = match &common.config {
        Some(path) => Scenario::from_file(path).map_err(Failure::Invalid)?,
        None => Scenario::default(),
    };
    if let Some(v) = common.beta {
        scenario.beta.beta = v;
    }
    if let Some(v) = common.nmax {
        scenario.n_max = v;
    }
    if let Some(v) = common.tol {
        scenario.tolerance = v;
    }
    if let Some(v) = common.x3 {
        scenario.x3 = v;
    }
    if let Some(v) = common.grid {
        scenario.grid = v;
    }
    let violations = scenario.violations();
    if !violations.is_empty() {
        return Err(Failure::Invalid(violations.join("\n")));
    }
    Ok(scenario)
}

/// The half-space solvers ignore geometry; reject a slab scenario rather
/// than silently computing a different problem.
fn require_half_space(scenario: &Scenario) -> Result<(), Failure> {
    match scenario.geometry {
        Geometry::HalfSpace => Ok(()),
        Geometry::Slab { .. } => Err(Failure::Invalid(String::from(
            "geometry.kind: requires \"halfspace\" here; slab kernels are dumped by the slab \
             subcommand",
        ))),
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).map_err(Failure::from)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

/// One field over the scenario grid, in grid order.
fn field_curve(scenario: &Scenario, which: Which) -> Result<FieldCurve, Failure> {
    let values: Result<Vec<f64>, Failure> = scenario
        .grid
        .times()
        .into_iter()
        .map(|t| {
            let p = scenario.point_at(t);
            Ok(match which {
                Which::Neumann => halfspace_neumann_kernel(p, scenario.source, scenario.medium),
                Which::Born => {
                    born_partial_sum(
                        scenario.n_max,
                        p,
                        scenario.source,
                        scenario.medium,
                        scenario.beta,
                        scenario.tolerance,
                    )
                    .partial_sums[scenario.n_max as usize]
                }
                Which::Exact => exact_solution(p, scenario.source, scenario.medium, scenario.beta),
                Which::Ebc => ebc_solution(p, scenario.source, scenario.medium, scenario.beta)?,
            })
        })
        .collect();
    Ok(FieldCurve { grid: scenario.grid, values: values?, label: String::from(which.column()) })
}

fn run_evaluate(args: EvaluateArgs) -> Result<(), Failure> {
    let scenario = resolve(&args.common)?;
    require_half_space(&scenario)?;
    let curve = field_curve(&scenario, args.which)?;
    let rows =
        scenario.grid.times().into_iter().zip(curve.values).map(|(t, u)| vec![cell(t), cell(u)]);
    write_records(open_out(&args.common.out)?, &["t", args.which.column()], rows)?;
    Ok(())
}

fn run_compare(args: CompareArgs) -> Result<(), Failure> {
    let scenario = resolve(&args.common)?;
    require_half_space(&scenario)?;
    let a = field_curve(&scenario, args.a)?;
    let b = field_curve(&scenario, args.b)?;
    let err = relative_error_curve(&a, &b, TAIL_MASK)?;
    let rows = scenario
        .grid
        .times()
        .into_iter()
        .zip(a.values.iter().zip(b.values.iter().zip(&err.values)))
        .map(|(t, (&ua, (&ub, &rel)))| vec![cell(t), cell(ua), cell(ub), masked_cell(rel)]);
    write_records(
        open_out(&args.common.out)?,
        &["t", args.a.column(), args.b.column(), "relErr"],
        rows,
    )?;
    Ok(())
}

fn run_converge(common: Common) -> Result<(), Failure> {
    let scenario = resolve(&common)?;
    require_half_space(&scenario)?;
    let report = convergence_report(
        scenario.medium,
        scenario.beta,
        scenario.source.s,
        scenario.grid.t_end,
        scenario.x3,
        scenario.tolerance,
    );
    // Replay the stopping rule over the increment sequence to mark the
    // order at which convergence is established.
    let mut rows = Vec::new();
    let mut streak = 0;
    let mut converged_at = None;
    for (n, &increment) in report.max_increments.iter().enumerate() {
        if n as u32 > scenario.n_max {
            break;
        }
        if n == 0 {
            // The zeroth entry is definitional; only a zero-impedance
            // series is complete at order zero.
            if scenario.beta.beta == 0.0 {
                converged_at = Some(0);
            }
        } else {
            if increment < scenario.tolerance {
                streak += 1;
            } else {
                streak = 0;
            }
            if streak == STREAK && converged_at.is_none() {
                converged_at = Some(n);
            }
        }
        let ratio = if n == 0 { None } else { Some(report.max_ratios[n - 1]) };
        rows.push(vec![
            n.to_string(),
            masked_cell(ratio),
            cell(increment),
            converged_at.is_some_and(|m| m <= n).to_string(),
        ]);
    }
    write_records(
        open_out(&common.out)?,
        &["n", "maxRatio", "maxIncrement", "convergedFlag"],
        rows,
    )?;
    if converged_at.is_none() {
        return Err(Failure::NotConverged(format!(
            "series not converged within nMax = {} orders at tolerance {}",
            scenario.n_max, scenario.tolerance
        )));
    }
    Ok(())
}

fn run_kernel(common: Common) -> Result<(), Failure> {
    let scenario = resolve(&common)?;
    require_half_space(&scenario)?;
    let rows = scenario.grid.times().into_iter().map(|t| {
        let u = halfspace_neumann_kernel(scenario.point_at(t), scenario.source, scenario.medium);
        vec![cell(t), cell(u)]
    });
    write_records(open_out(&common.out)?, &["t", "kernel"], rows)?;
    Ok(())
}

fn run_slab(args: SlabArgs) -> Result<(), Failure> {
    let mut scenario = match &args.common.config {
        Some(path) => Scenario::from_file(path).map_err(Failure::Invalid)?,
        None => Scenario::default(),
    };
    // Rebuild the geometry before validation so width/image overrides and
    // point-in-slab checks see the final values.
    let (mut width, mut images) = match scenario.geometry {
        Geometry::Slab { width, image_truncation } => (Some(width), image_truncation),
        Geometry::HalfSpace => (None, 30),
    };
    if let Some(v) = args.width {
        width = Some(v);
    }
    if let Some(v) = args.images {
        images = v;
    }
    let width = width.ok_or_else(|| {
        Failure::Invalid(String::from(
            "geometry.L: required by the slab subcommand (configure kind = \"slab\" with L, \
             or pass --L)",
        ))
    })?;
    scenario.geometry = Geometry::Slab { width, image_truncation: images };
    let common = args.common;
    if let Some(v) = common.beta {
        scenario.beta.beta = v;
    }
    if let Some(v) = common.x3 {
        scenario.x3 = v;
    }
    if let Some(v) = common.grid {
        scenario.grid = v;
    }
    let violations = scenario.violations();
    if !violations.is_empty() {
        return Err(Failure::Invalid(violations.join("\n")));
    }
    let rows = scenario.grid.times().into_iter().map(|t| {
        let k = slab_neumann_kernel(
            scenario.point_at(t),
            scenario.source,
            scenario.medium,
            scenario.geometry,
        );
        vec![cell(t), cell(k.value), k.images_used.to_string(), cell(k.truncation_error)]
    });
    write_records(open_out(&common.out)?, &["t", "kernel", "imagesUsed", "truncationError"], rows)?;
    Ok(())
}
