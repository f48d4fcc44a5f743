//! Command-line front end: generate traces, run simulations, compare schemes
//! across datasets, and sweep error budgets.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 bad flags or malformed input,
//! 3 error-bound violation (unreachable unless the simulator itself is
//! broken).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dualpred::{
    DEFAULT_M, DEFAULT_PID_GAINS, Error, GainSet, RunReport, Scheme, SimConfig, Trace,
    gen_constant, gen_ramp, gen_random_walk, gen_sine, ledger_to_csv, load_manifest, load_trace,
    report_to_json, reports_to_csv, reports_to_json, run, save_trace, sweep,
};

#[derive(Parser)]
#[command(
    name = "dualpred",
    version,
    about = "Prediction-based data transmission simulator for body-sensor telemetry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic trace file
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Simulate one scheme on one trace and write a report
    Run(RunArgs),
    /// Run schemes against every dataset in a manifest
    Compare(CompareArgs),
    /// Run one scheme on one trace once per error budget
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum GenKind {
    /// Constant signal
    Constant {
        #[arg(long)]
        value: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Affine signal a + b*k
    Ramp {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sinusoid of the given amplitude and period (in samples)
    Sine {
        #[arg(long)]
        amplitude: f64,
        #[arg(long)]
        period: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Seeded random walk
    Walk {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        scale: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum SchemeName {
    Past,
    Average,
    Linear,
    Pid,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct RunArgs {
    /// Trace file to simulate
    #[arg(long)]
    trace: PathBuf,
    /// Prediction scheme
    #[arg(long, value_enum)]
    scheme: SchemeName,
    /// Proportional gain (pid only)
    #[arg(long)]
    kp: Option<f64>,
    /// Integral gain (pid only)
    #[arg(long)]
    ki: Option<f64>,
    /// Derivative gain (pid only)
    #[arg(long)]
    kd: Option<f64>,
    /// Error budget in signal units
    #[arg(long)]
    eps: f64,
    /// History depth M
    #[arg(long, default_value_t = DEFAULT_M)]
    m: usize,
    /// Also write the per-step ledger CSV to this path
    #[arg(long)]
    ledger: Option<PathBuf>,
    /// Report output path
    #[arg(long)]
    out: PathBuf,
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct CompareArgs {
    /// Manifest of `name,path,eps` lines
    #[arg(long)]
    manifest: PathBuf,
    /// Schemes to run, in output order
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "past,average,linear,pid"
    )]
    schemes: Vec<SchemeName>,
    /// Proportional gain for pid (default 0.6)
    #[arg(long)]
    kp: Option<f64>,
    /// Integral gain for pid (default 0.4)
    #[arg(long)]
    ki: Option<f64>,
    /// Derivative gain for pid (default 0.3)
    #[arg(long)]
    kd: Option<f64>,
    /// History depth M
    #[arg(long, default_value_t = DEFAULT_M)]
    m: usize,
    /// Table output path
    #[arg(long)]
    out: PathBuf,
    /// Table format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    /// Trace file to simulate
    #[arg(long)]
    trace: PathBuf,
    /// Prediction scheme
    #[arg(long, value_enum)]
    scheme: SchemeName,
    /// Proportional gain (pid only)
    #[arg(long)]
    kp: Option<f64>,
    /// Integral gain (pid only)
    #[arg(long)]
    ki: Option<f64>,
    /// Derivative gain (pid only)
    #[arg(long)]
    kd: Option<f64>,
    /// Comma-separated error budgets, one run each
    #[arg(long = "eps-list", value_delimiter = ',', required = true)]
    eps_list: Vec<f64>,
    /// History depth M
    #[arg(long, default_value_t = DEFAULT_M)]
    m: usize,
    /// Report output path
    #[arg(long)]
    out: PathBuf,
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// CLI failure carrying its exit code.
enum Failure {
    /// Exit 1: the environment failed us.
    Io(String),
    /// Exit 2: the invocation or an input file is wrong.
    Usage(String),
    /// Exit 3: a run broke its error bound; this signals a simulator bug.
    Violation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Violation(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Usage(m) | Failure::Violation(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::Io(_) => Failure::Io(e.to_string()),
            Error::Validation(_) | Error::Parse { .. } => Failure::Usage(e.to_string()),
            Error::Protocol(_) | Error::Synchrony { .. } => Failure::Violation(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Gen { kind } => cmd_gen(kind),
        Command::Run(args) => cmd_run(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

/// Resolve scheme flags. `pid` requires all three gains; presets forbid them.
fn resolve_scheme(
    name: SchemeName,
    kp: Option<f64>,
    ki: Option<f64>,
    kd: Option<f64>,
) -> Result<Scheme, Failure> {
    match name {
        SchemeName::Pid => match (kp, ki, kd) {
            (Some(kp), Some(ki), Some(kd)) => Ok(Scheme::Pid(
                GainSet::new(kp, ki, kd).map_err(Failure::from)?,
            )),
            _ => Err(Failure::Usage(
                "--scheme pid requires --kp, --ki, and --kd".into(),
            )),
        },
        preset => {
            if kp.is_some() || ki.is_some() || kd.is_some() {
                return Err(Failure::Usage(
                    "gain flags are only valid with --scheme pid".into(),
                ));
            }
            Ok(match preset {
                SchemeName::Past => Scheme::Past,
                SchemeName::Average => Scheme::Average,
                SchemeName::Linear => Scheme::Linear,
                SchemeName::Pid => unreachable!(),
            })
        }
    }
}

fn cmd_gen(kind: GenKind) -> Result<(), Failure> {
    let (trace, out) = match kind {
        GenKind::Constant { value, n, out } => (gen_constant(value, n)?, out),
        GenKind::Ramp { a, b, n, out } => (gen_ramp(a, b, n)?, out),
        GenKind::Sine {
            amplitude,
            period,
            n,
            out,
        } => (gen_sine(amplitude, period, n)?, out),
        GenKind::Walk {
            seed,
            scale,
            n,
            out,
        } => (gen_random_walk(seed, scale, n)?, out),
    };
    save_trace(&trace, &out)?;
    println!("wrote {} samples to {}", trace.len(), out.display());
    Ok(())
}

fn trace_name(path: &Path) -> &str {
    path.file_stem().and_then(|s| s.to_str()).unwrap_or("trace")
}

fn write_output(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let scheme = resolve_scheme(args.scheme, args.kp, args.ki, args.kd)?;
    let trace = load_trace(&args.trace, trace_name(&args.trace), None)?;
    let cfg = SimConfig {
        eps: args.eps,
        m: args.m,
        scheme,
        emit_ledger: args.ledger.is_some(),
    };
    let output = run(&trace, &cfg)?;
    let report = &output.report;

    let rendered = match args.format {
        Format::Json => report_to_json(report),
        Format::Csv => reports_to_csv(std::slice::from_ref(report)),
    };
    write_output(&args.out, &rendered)?;
    if let (Some(ledger_path), Some(ledger)) = (&args.ledger, &output.ledger) {
        write_output(ledger_path, &ledger_to_csv(ledger))?;
    }

    println!("{}", summary_line(report));
    println!("report written to {}", args.out.display());
    ensure_clean(std::slice::from_ref(report))
}

fn cmd_compare(args: CompareArgs) -> Result<(), Failure> {
    if args.schemes.is_empty() {
        return Err(Failure::Usage(
            "--schemes must name at least one scheme".into(),
        ));
    }
    let wants_pid = args.schemes.contains(&SchemeName::Pid);
    let gains_given = args.kp.is_some() || args.ki.is_some() || args.kd.is_some();
    if gains_given && !wants_pid {
        return Err(Failure::Usage(
            "gain flags are only valid when `pid` is among --schemes".into(),
        ));
    }
    let pid_gains = match (args.kp, args.ki, args.kd) {
        (None, None, None) => DEFAULT_PID_GAINS,
        (Some(kp), Some(ki), Some(kd)) => GainSet::new(kp, ki, kd).map_err(Failure::from)?,
        _ => {
            return Err(Failure::Usage(
                "custom pid gains require all of --kp, --ki, and --kd".into(),
            ));
        }
    };
    let schemes: Vec<Scheme> = args
        .schemes
        .iter()
        .map(|name| match name {
            SchemeName::Past => Scheme::Past,
            SchemeName::Average => Scheme::Average,
            SchemeName::Linear => Scheme::Linear,
            SchemeName::Pid => Scheme::Pid(pid_gains),
        })
        .collect();

    let manifest = load_manifest(&args.manifest)?;
    let traces: Vec<Trace> = manifest.load_traces()?;
    let table = dualpred::compare(&traces, &schemes, args.m)?;

    let rendered = match args.format {
        Format::Json => table.to_json(),
        Format::Csv => table.to_csv(),
    };
    write_output(&args.out, &rendered)?;

    print_energy_grid(&table.rows, &schemes);
    println!("table written to {}", args.out.display());
    ensure_clean(&table.rows)
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let scheme = resolve_scheme(args.scheme, args.kp, args.ki, args.kd)?;
    let trace = load_trace(&args.trace, trace_name(&args.trace), None)?;
    let reports = sweep(&trace, scheme, &args.eps_list, args.m)?;

    let rendered = match args.format {
        Format::Json => reports_to_json(&reports),
        Format::Csv => reports_to_csv(&reports),
    };
    write_output(&args.out, &rendered)?;

    for report in &reports {
        println!("{}", summary_line(report));
    }
    println!("reports written to {}", args.out.display());
    ensure_clean(&reports)
}

fn summary_line(report: &RunReport) -> String {
    format!(
        "{} {} eps={} m={}: tx {}/{} energy_ratio={:.6} rmse_prediction={:.6} \
         rmse_data={:.6} violations={}",
        report.trace_name,
        report.scheme_name,
        report.eps,
        report.m,
        report.n_tx,
        report.k_total,
        report.energy_ratio,
        report.rmse_prediction,
        report.rmse_data,
        report.violations
    )
}

fn print_energy_grid(rows: &[RunReport], schemes: &[Scheme]) {
    let per_trace = schemes.len();
    let name_width = rows
        .iter()
        .map(|r| r.trace_name.len())
        .max()
        .unwrap_or(5)
        .max(5);
    print!("{:<name_width$}", "trace");
    for scheme in schemes {
        print!("  {:>8}", scheme.name());
    }
    println!();
    for group in rows.chunks(per_trace) {
        print!("{:<name_width$}", group[0].trace_name);
        for report in group {
            print!("  {:>8.4}", report.energy_ratio);
        }
        println!();
    }
}

/// Reports with violations mean the error bound was broken somewhere; that is
/// a bug in the simulator, surfaced as exit code 3.
fn ensure_clean(reports: &[RunReport]) -> Result<(), Failure> {
    for report in reports {
        if !report.is_clean() {
            return Err(Failure::Violation(format!(
                "{}/{}: {} steps broke the error bound",
                report.trace_name, report.scheme_name, report.violations
            )));
        }
    }
    Ok(())
}
