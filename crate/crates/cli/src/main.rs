use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayleigh_core::minorant::{certify_admissibility, prop_bound, write_profile_csv, Profile};
use rayleigh_core::moments::{fim_record, fisher_information, index_set};
use rayleigh_core::sweep::{emit_csv, emit_plot, run_bound_campaign, run_sweep, SweepConfig};
use rayleigh_core::{Complex64, Error, MinorantModel, NodeSet, WeightVector};

/// Condition analysis of sparse super-resolution on the torus.
#[derive(Parser)]
#[command(name = "rayleigh", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a separation/node-count sweep described by a JSON config.
    Sweep(SweepArgs),
    /// Check the separation lower bound on random node sets.
    BoundCheck(BoundCheckArgs),
    /// Certify the minorant or export one of its radial profiles.
    Minorant(MinorantArgs),
    /// Fisher information summary for given nodes and weights.
    Fim(FimArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Path to the sweep configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Where to write the SVG plot (default: output path with .svg).
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct BoundCheckArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    tau: f64,
    /// Bandlimits to test.
    #[arg(long = "n", num_args = 1.., required = true)]
    n: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MinorantArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    tau: f64,
    /// Run the admissibility certification and print its JSON report.
    #[arg(long, conflicts_with = "profile")]
    certify: bool,
    /// Radial grid resolution for the certification.
    #[arg(long, default_value_t = 400)]
    resolution: usize,
    /// Also print the bound report for this bandlimit.
    #[arg(long)]
    n: Option<f64>,
    /// Profile to export: phi, phi-hat, autocorrelation, psi or psi-hat.
    #[arg(long, requires = "out")]
    profile: Option<Profile>,
    /// CSV path for --profile.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 512)]
    samples: usize,
}

#[derive(Args)]
struct FimArgs {
    /// Node set as JSON (`{"dim": d, "points": [[...], ...]}`) or a path to it.
    #[arg(long)]
    nodes: String,
    /// Weights as JSON (`[[re, im], ...]` or `[w, ...]`) or a path to it.
    #[arg(long)]
    weights: String,
    #[arg(long = "n")]
    n: f64,
    /// Noise standard deviation.
    #[arg(long)]
    delta: f64,
}

enum Failure {
    Config(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Inline JSON, or the contents of the file it names.
fn json_argument(arg: &str) -> Result<String, Failure> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Config(format!("{arg}: {e}")))
    }
}

fn parse_weights(text: &str) -> Result<WeightVector, Failure> {
    if let Ok(w) = serde_json::from_str::<WeightVector>(text) {
        return Ok(w);
    }
    let reals: Vec<f64> = serde_json::from_str(text)
        .map_err(|e| Failure::Config(format!("weights must be [[re, im], ...] or [w, ...]: {e}")))?;
    Ok(WeightVector::new(reals.into_iter().map(|w| Complex64::new(w, 0.0)).collect())?)
}

fn sweep(args: &SweepArgs) -> Outcome {
    let config = SweepConfig::from_path(&args.config)?;
    let result = run_sweep(&config)?;
    emit_csv(&result, &config.output_path)?;
    let plot = args
        .plot
        .clone()
        .unwrap_or_else(|| config.output_path.with_extension("svg"));
    emit_plot(&result, &plot)?;
    let skipped = result.rows.iter().filter(|r| r.is_skipped()).count();
    let violations = result
        .rows
        .iter()
        .filter(|r| matches!((r.sigma_min(), r.bound), (Some(s), Some(b)) if s * s < b))
        .count();
    println!(
        "{} rows ({skipped} skipped) written to {}, plot {}",
        result.rows.len(),
        config.output_path.display(),
        plot.display()
    );
    if violations > 0 {
        return Err(Failure::Check(format!("{violations} rows violate the lower bound")));
    }
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn bound_check(args: &BoundCheckArgs) -> Outcome {
    let report = run_bound_campaign(args.dim, args.tau, &args.n, args.trials, args.seed)?;
    let json = report.to_json();
    println!("{json}");
    if let Some(out) = &args.out {
        write_text(out, &json)?;
    }
    if !report.all_passed() {
        return Err(Failure::Check(format!(
            "{} of {} instances violate the bound",
            report.violations.len(),
            report.total
        )));
    }
    Ok(())
}

fn minorant(args: &MinorantArgs) -> Outcome {
    let model = MinorantModel::new(args.dim, args.tau)?;
    if let Some(profile) = args.profile {
        let out = args.out.as_ref().expect("clap enforces --out");
        write_profile_csv(&model, profile, out, args.samples)?;
        println!("{profile} profile written to {}", out.display());
        return Ok(());
    }
    if !args.certify && args.n.is_none() {
        return Err(Failure::Config("nothing to do: pass --certify, --n or --profile".into()));
    }
    let mut failed = None;
    if args.certify {
        let report = certify_admissibility(&model, args.resolution)?;
        println!("{}", report.to_json());
        if !report.passed {
            failed = report.failed_clause;
        }
    }
    if let Some(n) = args.n {
        println!("{}", prop_bound(&model, n)?.to_json());
    }
    match failed {
        Some(clause) => Err(Failure::Check(format!("certification failed: {clause} clause"))),
        None => Ok(()),
    }
}

fn fim(args: &FimArgs) -> Outcome {
    let nodes = NodeSet::from_json(&json_argument(&args.nodes)?)?;
    let weights = parse_weights(&json_argument(&args.weights)?)?;
    let indices = index_set(nodes.dim(), args.n)?;
    let record = fim_record(&fisher_information(&nodes, &weights, args.delta, &indices)?)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&record).expect("records serialize")
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sweep(a) => sweep(a),
        Command::BoundCheck(a) => bound_check(a),
        Command::Minorant(a) => minorant(a),
        Command::Fim(a) => fim(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
    }
}
