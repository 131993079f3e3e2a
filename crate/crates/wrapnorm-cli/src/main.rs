//! Command-line front end for the `wrapnorm` library.
//!
//! Subcommands: `eval` (density at a point), `plan` (which series and order
//! serve a target accuracy), `sweep` (truncation-error grid as CSV),
//! `crossover` (regenerate a σ-threshold table by search), `min-n` (required
//! truncation orders across σ), and `bench` (evaluation-cost medians).
//!
//! Exit codes: 0 on success, 1 for domain/runtime errors (bad parameter
//! values, table-construction failure, I/O), 2 for usage errors (invalid
//! flag combinations; `clap` parse failures use the same code).
//!
//! All floats are printed in Rust's shortest round-trip form, so every CSV
//! is byte-stable across runs; parsing a printed value recovers the exact
//! double. Benchmark timing columns are exempt from byte-stability.

use clap::{Parser, Subcommand, ValueEnum};
use std::process::ExitCode;
use std::time::Instant;
use wrapnorm::{
    builtin_table, crossover_search, pdf_f, pdf_g, pdf_reference, pdf_uniform, plan_empirical,
    plan_theoretical, required_orders, worst_case_error, wrap, AccuracyTarget, EvalPlan,
    SeriesKind, WnError, WrappedNormal,
};

#[derive(Parser)]
#[command(
    name = "wrapnorm",
    version,
    about = "Evaluate the wrapped normal density to a chosen accuracy",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the density at one point.
    Eval {
        /// Angle in radians; any finite value is wrapped into [0, 2π).
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        /// Mean direction in radians, wrapped like `--x`.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu: f64,
        /// Scale parameter; must be finite and positive.
        #[arg(long)]
        sigma: f64,
        /// How to evaluate: a fixed series (`f`, `g`), the flat density
        /// (`uniform`), a planned truncation (`auto`), or the converged
        /// reference (`reference`).
        #[arg(long, value_enum)]
        method: Method,
        /// Truncation order; required by `f` and `g`, rejected elsewhere.
        #[arg(long)]
        n: Option<u32>,
        /// Target accuracy in (0, 1); required by `auto`, rejected elsewhere.
        #[arg(long)]
        accuracy: Option<f64>,
    },
    /// Show which series and truncation order serve a target accuracy.
    Plan {
        /// Scale parameter; must be finite and positive.
        #[arg(long)]
        sigma: f64,
        /// Target accuracy in (0, 1).
        #[arg(long)]
        accuracy: f64,
        /// `empirical` consults the built-in threshold tables (falling back
        /// to the certified formulas); `theoretical` uses the formulas only.
        #[arg(long, value_enum, default_value_t = Planner::Empirical)]
        planner: Planner,
    },
    /// Sweep truncation error over σ and n; writes CSV `sigma,n,error`.
    Sweep {
        /// Which series to truncate.
        #[arg(long, value_enum)]
        kind: SweepKind,
        #[arg(long, default_value_t = 0.1)]
        sigma_min: f64,
        #[arg(long, default_value_t = 10.0)]
        sigma_max: f64,
        /// Number of σ samples (at least 2, endpoints included).
        #[arg(long, default_value_t = 100)]
        steps: u32,
        /// Comma-separated truncation orders.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8,9,10,11")]
        n_values: Vec<u32>,
        /// Evaluation-grid resolution for each worst-case error.
        #[arg(long, default_value_t = 1024)]
        grid_size: u32,
        /// Space σ samples logarithmically instead of linearly.
        #[arg(long)]
        log_sigma: bool,
        /// Output path, or `-` for standard output.
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Regenerate a σ-threshold table by bisection search; writes CSV
    /// `sigma_upper,kind,n`.
    Crossover {
        /// Target accuracy in (0, 1).
        #[arg(long)]
        accuracy: f64,
        /// Largest truncation order the table may use.
        #[arg(long, default_value_t = 5)]
        n_max: u32,
        /// Upper end of the σ search range.
        #[arg(long, default_value_t = 20.0)]
        sigma_max: f64,
        /// Bisection tolerance on boundary σ values.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Output path, or `-` for standard output.
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Tabulate the required truncation orders across σ; writes CSV
    /// `sigma,n_f,n_g,n_combined,kind`.
    MinN {
        /// Target accuracy in (0, 1).
        #[arg(long)]
        accuracy: f64,
        #[arg(long, default_value_t = 0.1)]
        sigma_min: f64,
        #[arg(long, default_value_t = 20.0)]
        sigma_max: f64,
        /// Number of σ samples (at least 2, endpoints included).
        #[arg(long, default_value_t = 200)]
        steps: u32,
        /// Output path, or `-` for standard output.
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Time planned evaluation against the converged reference; writes CSV
    /// `sigma,kind,n,ns_per_eval` (timing column varies run to run).
    Bench {
        /// Comma-separated σ values to benchmark.
        #[arg(long, value_delimiter = ',', required = true)]
        sigma_list: Vec<f64>,
        /// Target accuracy in (0, 1) used for planning.
        #[arg(long)]
        accuracy: f64,
        /// Timing passes per row; the median is reported.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
        repetitions: u32,
        /// Output path, or `-` for standard output.
        #[arg(long, default_value = "-")]
        out: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Wrapped (replica) sum at order `--n`.
    F,
    /// Theta (cosine) sum at order `--n`.
    G,
    /// The flat density 1/(2π).
    Uniform,
    /// Pick the cheapest sufficient series for `--accuracy`.
    Auto,
    /// Both series run to convergence and cross-checked.
    Reference,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Planner {
    Empirical,
    Theoretical,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    F,
    G,
}

impl SweepKind {
    fn series(self) -> SeriesKind {
        match self {
            SweepKind::F => SeriesKind::WrappedSum,
            SweepKind::G => SeriesKind::ThetaSum,
        }
    }
}

/// σ-range, truncation orders, and grid resolution for one error sweep.
struct SweepSpec {
    sigma_min: f64,
    sigma_max: f64,
    steps: u32,
    n_values: Vec<u32>,
    grid_size: u32,
}

enum AppError {
    /// Flags were structurally wrong (exit 2).
    Usage(String),
    /// Values were rejected or work failed (exit 1).
    Domain(String),
}

impl From<WnError> for AppError {
    fn from(e: WnError) -> Self {
        AppError::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), AppError> {
    match command {
        Command::Eval {
            x,
            mu,
            sigma,
            method,
            n,
            accuracy,
        } => cmd_eval(x, mu, sigma, method, n, accuracy),
        Command::Plan {
            sigma,
            accuracy,
            planner,
        } => cmd_plan(sigma, accuracy, planner),
        Command::Sweep {
            kind,
            sigma_min,
            sigma_max,
            steps,
            n_values,
            grid_size,
            log_sigma,
            out,
        } => cmd_sweep(
            kind,
            SweepSpec {
                sigma_min,
                sigma_max,
                steps,
                n_values,
                grid_size,
            },
            log_sigma,
            &out,
        ),
        Command::Crossover {
            accuracy,
            n_max,
            sigma_max,
            tol,
            out,
        } => cmd_crossover(accuracy, n_max, sigma_max, tol, &out),
        Command::MinN {
            accuracy,
            sigma_min,
            sigma_max,
            steps,
            out,
        } => cmd_min_n(accuracy, sigma_min, sigma_max, steps, &out),
        Command::Bench {
            sigma_list,
            accuracy,
            repetitions,
            out,
        } => cmd_bench(&sigma_list, accuracy, repetitions, &out),
    }
}

fn cmd_eval(
    x: f64,
    mu: f64,
    sigma: f64,
    method: Method,
    n: Option<u32>,
    accuracy: Option<f64>,
) -> Result<(), AppError> {
    match method {
        Method::F | Method::G => {
            if n.is_none() {
                return Err(AppError::Usage(
                    "--method f and --method g require --n".to_string(),
                ));
            }
        }
        Method::Uniform | Method::Auto | Method::Reference => {
            if n.is_some() {
                return Err(AppError::Usage(
                    "--n only applies to --method f or --method g".to_string(),
                ));
            }
        }
    }
    match method {
        Method::Auto => {
            if accuracy.is_none() {
                return Err(AppError::Usage("--method auto requires --accuracy".to_string()));
            }
        }
        _ => {
            if accuracy.is_some() {
                return Err(AppError::Usage(
                    "--accuracy only applies to --method auto".to_string(),
                ));
            }
        }
    }

    let wn = WrappedNormal::new(mu, sigma)?;
    let xw = wrap(x)?;
    match method {
        Method::F => println!("{}", pdf_f(xw, &wn, n.unwrap())),
        Method::G => println!("{}", pdf_g(xw, &wn, n.unwrap())),
        Method::Uniform => println!("{}", pdf_uniform()),
        Method::Reference => println!("{}", pdf_reference(xw, &wn)?.density),
        Method::Auto => {
            let target = AccuracyTarget::new(accuracy.unwrap())?;
            let plan = plan_empirical(sigma, target)?;
            println!("{}", plan.pdf(xw, &wn));
            println!("kind={} n={}", plan.display_kind(), plan.order());
        }
    }
    Ok(())
}

fn cmd_plan(sigma: f64, accuracy: f64, planner: Planner) -> Result<(), AppError> {
    let target = AccuracyTarget::new(accuracy)?;
    let req = required_orders(sigma, target)?;
    let (plan, source, note): (EvalPlan, &str, Option<&str>) = match planner {
        Planner::Theoretical => (plan_theoretical(sigma, target)?, "theoretical", None),
        Planner::Empirical => match builtin_table(accuracy) {
            Ok(table) => {
                let row = table.lookup_row(sigma)?;
                (row.plan, "table", row.note)
            }
            Err(WnError::NoTable(_)) => (plan_theoretical(sigma, target)?, "theoretical", None),
            Err(other) => return Err(other.into()),
        },
    };
    println!("kind={}", plan.display_kind());
    println!("n={}", plan.order());
    println!("n_f={}", req.n_f);
    println!("n_g={}", req.n_g);
    println!("source={source}");
    if let Some(note) = note {
        println!("note={note}");
    }
    Ok(())
}

/// σ samples with both endpoints included, spaced linearly or, for ranges
/// spanning decades, logarithmically.
fn sigma_samples(sigma_min: f64, sigma_max: f64, steps: u32, log: bool) -> Result<Vec<f64>, AppError> {
    if !(sigma_min.is_finite() && sigma_max.is_finite()) || sigma_min <= 0.0 {
        return Err(AppError::Domain(format!(
            "sigma range must be finite and positive, got [{sigma_min}, {sigma_max}]"
        )));
    }
    if sigma_min >= sigma_max {
        return Err(AppError::Domain(format!(
            "sigma range must satisfy min < max, got [{sigma_min}, {sigma_max}]"
        )));
    }
    if steps < 2 {
        return Err(AppError::Domain(format!(
            "steps must be at least 2 to include both endpoints, got {steps}"
        )));
    }
    let count = f64::from(steps - 1);
    let samples = (0..steps)
        .map(|i| {
            let t = f64::from(i) / count;
            if log {
                (sigma_min.ln() + (sigma_max.ln() - sigma_min.ln()) * t).exp()
            } else {
                sigma_min + (sigma_max - sigma_min) * t
            }
        })
        .collect();
    Ok(samples)
}

fn cmd_sweep(kind: SweepKind, spec: SweepSpec, log_sigma: bool, out: &str) -> Result<(), AppError> {
    if spec.n_values.is_empty() {
        return Err(AppError::Usage("--n-values must name at least one order".to_string()));
    }
    let mut csv = String::from("sigma,n,error\n");
    for sigma in sigma_samples(spec.sigma_min, spec.sigma_max, spec.steps, log_sigma)? {
        for &n in &spec.n_values {
            let sample = worst_case_error(kind.series(), n, sigma, spec.grid_size)?;
            csv.push_str(&format!("{sigma},{n},{}\n", sample.error));
        }
    }
    write_output(out, &csv)
}

fn cmd_crossover(accuracy: f64, n_max: u32, sigma_max: f64, tol: f64, out: &str) -> Result<(), AppError> {
    let target = AccuracyTarget::new(accuracy)?;
    let table = crossover_search(target, n_max, sigma_max, tol)?;
    write_output(out, &table.to_csv())
}

fn cmd_min_n(
    accuracy: f64,
    sigma_min: f64,
    sigma_max: f64,
    steps: u32,
    out: &str,
) -> Result<(), AppError> {
    let target = AccuracyTarget::new(accuracy)?;
    let mut csv = String::from("sigma,n_f,n_g,n_combined,kind\n");
    for sigma in sigma_samples(sigma_min, sigma_max, steps, false)? {
        let req = required_orders(sigma, target)?;
        let plan = plan_theoretical(sigma, target)?;
        csv.push_str(&format!(
            "{sigma},{},{},{},{}\n",
            req.n_f,
            req.n_g,
            plan.order(),
            plan.kind().label()
        ));
    }
    write_output(out, &csv)
}

fn cmd_bench(sigma_list: &[f64], accuracy: f64, repetitions: u32, out: &str) -> Result<(), AppError> {
    let target = AccuracyTarget::new(accuracy)?;
    // A fixed evaluation batch keeps rows comparable; per-point cost is the
    // batch time divided by the batch size.
    let xs: Vec<_> = (0..64)
        .map(|i| wrap(std::f64::consts::TAU * ((f64::from(i) + 0.5) / 64.0)))
        .collect::<Result<_, _>>()?;
    let mut csv = String::from("sigma,kind,n,ns_per_eval\n");
    for &sigma in sigma_list {
        let wn = WrappedNormal::new(0.0, sigma)?;
        let empirical = plan_empirical(sigma, target)?;
        let theoretical = plan_theoretical(sigma, target)?;
        for plan in [empirical, theoretical] {
            let ns = median_ns_per_eval(repetitions, || {
                for &x in &xs {
                    std::hint::black_box(plan.pdf(x, &wn));
                }
            });
            csv.push_str(&format!(
                "{sigma},{},{},{ns}\n",
                plan.kind().label(),
                plan.order()
            ));
        }
        // Reference row: adaptive evaluation, no fixed order; n recorded as 0.
        for &x in &xs {
            // Surface convergence/consistency failures before timing.
            pdf_reference(x, &wn)?;
        }
        let ns = median_ns_per_eval(repetitions, || {
            for &x in &xs {
                std::hint::black_box(pdf_reference(x, &wn).expect("pre-checked above"));
            }
        });
        csv.push_str(&format!("{sigma},reference,0,{ns}\n"));
    }
    write_output(out, &csv)
}

fn median_ns_per_eval(repetitions: u32, mut pass: impl FnMut()) -> f64 {
    let mut times: Vec<f64> = (0..repetitions)
        .map(|_| {
            let start = Instant::now();
            pass();
            start.elapsed().as_nanos() as f64 / 64.0
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[times.len() / 2]
}

fn write_output(out: &str, content: &str) -> Result<(), AppError> {
    if out == "-" {
        print!("{content}");
        Ok(())
    } else {
        std::fs::write(out, content)
            .map_err(|e| AppError::Domain(format!("cannot write {out}: {e}")))
    }
}
