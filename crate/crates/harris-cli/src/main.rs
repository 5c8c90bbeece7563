//! Command-line surface for the Harris family: probability tables, sampling,
//! fitting, seeded simulation studies, and stability diagnostics.
//!
//! Everything tabular comes out as CSV with a mandatory header, LF line
//! endings, and fixed numeric formatting (6 decimals for probabilities,
//! 5 for estimates and standard errors) so runs diff cleanly against golden
//! files. Randomized commands take a master seed plus per-repetition stream
//! ids, which keeps output byte-identical across thread counts.
//!
//! Exit codes: 0 success; 2 bad flags or unreadable input; 3 estimation
//! failure (error name on standard error); 4 stability check failure
//! (failing check and witness on standard error).

#![forbid(unsafe_code)]

mod experiment;
mod stability_report;

use std::fs::File;
use std::io::{self, BufWriter, Read as _, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use harris::estimation::{fit_mle, fit_moments};
use harris::sampling::{sample_gamma_poisson, sample_inverse, sample_nb};
use harris::{Harris, Method, RngStream, Sample, Tolerance, Variant};

#[derive(Parser)]
#[command(
    name = "harris",
    version,
    about = "Harris-distribution toolkit: exact tables, samplers, estimators, stability checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the probability mass table as CSV (columns x,p).
    Pmf(TableArgs),
    /// Print the distribution function table as CSV (columns x,F).
    Cdf(TableArgs),
    /// Draw a pseudo-random sample and print it as CSV (column x).
    Sample(SampleArgs),
    /// Fit (m, k) to integer data from a file or standard input.
    Fit(FitArgs),
    /// Run a seeded estimation study; one CSV row per (m, k, n) cell.
    Experiment(ExperimentArgs),
    /// Run divisibility, self-decomposability, compounding, and limit checks.
    Stability(StabilityArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VariantArg {
    /// Support {0, k, 2k, ...}.
    H0,
    /// Support {1, 1+k, 1+2k, ...}.
    H1,
}

impl VariantArg {
    fn label(self) -> &'static str {
        match self {
            VariantArg::H0 => "h0",
            VariantArg::H1 => "h1",
        }
    }
}

impl From<VariantArg> for Variant {
    fn from(arg: VariantArg) -> Variant {
        match arg {
            VariantArg::H0 => Variant::H0,
            VariantArg::H1 => Variant::H1,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SamplerArg {
    /// Negative-binomial route (closed-form geometric at k = 1).
    Nb,
    /// Explicit two-stage gamma-Poisson mixture.
    GammaPoisson,
    /// Quantile inversion of the distribution function.
    Inverse,
}

impl SamplerArg {
    fn draw(self) -> fn(&Harris, &mut RngStream, usize) -> Vec<u64> {
        match self {
            SamplerArg::Nb => sample_nb,
            SamplerArg::GammaPoisson => sample_gamma_poisson,
            SamplerArg::Inverse => sample_inverse,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Mle,
    Moments,
}

impl MethodArg {
    fn label(self) -> &'static str {
        match self {
            MethodArg::Mle => "mle",
            MethodArg::Moments => "moments",
        }
    }
}

fn method_label(method: Method) -> &'static str {
    match method {
        Method::Mle => "mle",
        Method::Moments => "moments",
    }
}

#[derive(Args)]
struct TableArgs {
    /// Parameter m (> 1).
    #[arg(long)]
    m: f64,
    /// Lattice spacing k (>= 1).
    #[arg(long)]
    k: u64,
    /// Which support the law lives on.
    #[arg(long, value_enum, default_value = "h1")]
    variant: VariantArg,
    /// Largest lattice index; rows cover r = 0..=rmax.
    #[arg(long)]
    rmax: u64,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    /// Parameter m (> 1).
    #[arg(long)]
    m: f64,
    /// Lattice spacing k (>= 1).
    #[arg(long)]
    k: u64,
    /// Which support the law lives on.
    #[arg(long, value_enum, default_value = "h1")]
    variant: VariantArg,
    /// Number of draws.
    #[arg(long)]
    n: usize,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stream id under the master seed.
    #[arg(long, default_value_t = 0)]
    stream: u64,
    /// Which sampling route to use.
    #[arg(long, value_enum, default_value = "nb")]
    sampler: SamplerArg,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Read whitespace-separated integers from this file instead of stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Estimator to apply.
    #[arg(long, value_enum, default_value = "mle")]
    method: MethodArg,
    /// Support the data live on (h0 admits zeros, h1 starts at 1).
    #[arg(long, value_enum, default_value = "h1")]
    variant: VariantArg,
    /// Print a JSON detail line after the summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
pub(crate) struct ExperimentArgs {
    /// True m values, comma separated; one CSV row per (m, k, n) cell.
    #[arg(long, value_delimiter = ',', required = true)]
    pub(crate) m: Vec<f64>,
    /// True k values, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub(crate) k: Vec<u64>,
    /// Sample sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub(crate) n: Vec<usize>,
    /// Repetitions per cell.
    #[arg(long, default_value_t = 50)]
    pub(crate) reps: u64,
    /// Estimator to apply.
    #[arg(long, value_enum, default_value = "mle")]
    pub(crate) method: MethodArg,
    /// Which support the law lives on.
    #[arg(long, value_enum, default_value = "h1")]
    pub(crate) variant: VariantArg,
    /// Which sampling route feeds the estimator.
    #[arg(long, value_enum, default_value = "nb")]
    pub(crate) sampler: SamplerArg,
    /// Master seed; repetition i of cell j reads stream j*reps + i.
    #[arg(long, default_value_t = 0)]
    pub(crate) seed: u64,
    /// Worker threads for repetitions (default: one per core).
    #[arg(long)]
    pub(crate) threads: Option<usize>,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub(crate) out: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct StabilityArgs {
    /// Run the n-th-root coefficient check (infinite divisibility).
    #[arg(long)]
    pub(crate) id: bool,
    /// Run the self-decomposability factor check.
    #[arg(long)]
    pub(crate) sd: bool,
    /// Run the gamma compounding identity.
    #[arg(long)]
    pub(crate) identity: bool,
    /// Run the large-m limit diagnostics.
    #[arg(long)]
    pub(crate) limit: bool,
    /// Run the random-sum demonstration.
    #[arg(long)]
    pub(crate) stopped_sum: bool,
    /// Restrict lattice checks to one support (default: each check's own).
    #[arg(long, value_enum)]
    pub(crate) variant: Option<VariantArg>,
    /// Override the m grid, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub(crate) m: Option<Vec<f64>>,
    /// Override the k grid, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub(crate) k: Option<Vec<u64>>,
    /// Compounding scale a for the identity and random-sum checks.
    #[arg(long)]
    pub(crate) a: Option<f64>,
    /// Thinning/scale constant c where a check takes one.
    #[arg(long)]
    pub(crate) c: Option<f64>,
    /// Monte Carlo sample size for the limit and random-sum checks.
    #[arg(long, default_value_t = 100_000)]
    pub(crate) n: usize,
    /// Master seed for the Monte Carlo checks.
    #[arg(long, default_value_t = 0)]
    pub(crate) seed: u64,
    /// Truncation order of the power-series checks.
    #[arg(long, default_value_t = 60)]
    pub(crate) order: usize,
    /// Write the CSV report here instead of standard output.
    #[arg(long)]
    pub(crate) out: Option<PathBuf>,
}

/// Anything that should stop the process with a specific exit code.
pub(crate) enum Failure {
    /// Flag or input problem: exit 2.
    Usage(String),
    /// Estimators could not produce a fit: exit 3.
    Estimation(harris::Error),
    /// One or more stability checks failed: exit 4.
    Stability(Vec<String>),
}

impl Failure {
    fn exit(self) -> ExitCode {
        match self {
            Failure::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            Failure::Estimation(err) => {
                eprintln!("error: {}: {err}", error_name(&err));
                ExitCode::from(3)
            }
            Failure::Stability(lines) => {
                for line in &lines {
                    eprintln!("stability failure: {line}");
                }
                ExitCode::from(4)
            }
        }
    }
}

impl From<harris::Error> for Failure {
    fn from(err: harris::Error) -> Failure {
        use harris::Error as E;
        match err {
            E::SampleTooSmall(_)
            | E::DegenerateSample
            | E::MeanAtBoundary(_)
            | E::NoRootInBracket { .. }
            | E::AmbiguousRoot(_)
            | E::AllAtOrigin => Failure::Estimation(err),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Failure {
        Failure::Usage(err.to_string())
    }
}

fn error_name(err: &harris::Error) -> &'static str {
    use harris::Error as E;
    match err {
        E::Domain(_) => "domain",
        E::InvalidParameter(_) => "invalid_parameter",
        E::Divergence { .. } => "divergence",
        E::StepTooLarge { .. } => "step_too_large",
        E::SampleTooSmall(_) => "sample_too_small",
        E::DegenerateSample => "degenerate_sample",
        E::MeanAtBoundary(_) => "mean_at_boundary",
        E::NoRootInBracket { .. } => "no_root_in_bracket",
        E::AmbiguousRoot(_) => "ambiguous_root",
        E::AllAtOrigin => "all_at_origin",
        E::ZeroConstantTerm => "zero_constant_term",
        _ => "error",
    }
}

pub(crate) fn writer(out: Option<&PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => failure.exit(),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Pmf(args) => cmd_table(&args, Table::Pmf),
        Command::Cdf(args) => cmd_table(&args, Table::Cdf),
        Command::Sample(args) => cmd_sample(&args),
        Command::Fit(args) => cmd_fit(&args),
        Command::Experiment(args) => experiment::run(&args),
        Command::Stability(args) => stability_report::run(&args),
    }
}

enum Table {
    Pmf,
    Cdf,
}

fn cmd_table(args: &TableArgs, table: Table) -> Result<(), Failure> {
    let dist = Harris::new(args.m, args.k, args.variant.into())?;
    let mut w = writer(args.out.as_ref())?;
    match table {
        Table::Pmf => {
            writeln!(w, "x,p")?;
            for (x, p) in dist.pmf_table(args.rmax) {
                writeln!(w, "{},{:.6}", x as u64, p)?;
            }
        }
        Table::Cdf => {
            writeln!(w, "x,F")?;
            for r in 0..=args.rmax {
                let x = dist.support_point(r);
                writeln!(w, "{},{:.6}", x as u64, dist.cdf(x))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_sample(args: &SampleArgs) -> Result<(), Failure> {
    let dist = Harris::new(args.m, args.k, args.variant.into())?;
    let mut rng = RngStream::new(args.seed, args.stream);
    let values = (args.sampler.draw())(&dist, &mut rng, args.n);
    let mut w = writer(args.out.as_ref())?;
    writeln!(w, "x")?;
    for v in values {
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_fit(args: &FitArgs) -> Result<(), Failure> {
    let text = match &args.input {
        Some(path) => std::fs::read_to_string(path)?,
        None => {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    let mut values = Vec::with_capacity(64);
    for token in text.split_whitespace() {
        let v: u64 = token
            .parse()
            .map_err(|_| Failure::Usage(format!("invalid token {token:?}: expected an integer")))?;
        values.push(v);
    }
    let sample = Sample::new(values, args.variant.into())?;
    let fit = match args.method {
        MethodArg::Mle => fit_mle(&sample, Tolerance::default())?,
        MethodArg::Moments => fit_moments(&sample)?,
    };

    let lattice = sample
        .inferred_k()
        .map_or_else(|| "?".to_string(), |k| k.to_string());
    let mut line = format!(
        "method={} m_hat={:.5} k_hat={:.5} k_hat_int={} lattice={} n={}",
        method_label(fit.method),
        fit.m_hat,
        fit.k_hat,
        fit.k_hat_int,
        lattice,
        sample.len(),
    );
    if let Some(s) = &fit.solver {
        line.push_str(&format!(
            " iterations={} bracket=[{:e},{:e}] residual={:.3e}",
            s.iterations, s.bracket.0, s.bracket.1, s.residual,
        ));
    }
    println!("{line}");

    if args.json {
        let detail = serde_json::json!({
            "method": method_label(fit.method),
            "variant": args.variant.label(),
            "n": sample.len(),
            "lattice": sample.inferred_k(),
            "mean": sample.mean(),
            "variance": sample.variance(),
            "m_hat": fit.m_hat,
            "k_hat": fit.k_hat,
            "k_hat_int": fit.k_hat_int,
            "solver": fit.solver.map(|s| serde_json::json!({
                "iterations": s.iterations,
                "bracket": [s.bracket.0, s.bracket.1],
                "residual": s.residual,
            })),
        });
        println!("{detail}");
    }
    Ok(())
}
