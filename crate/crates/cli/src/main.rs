use clap::{Args, Parser, Subcommand};
use longrun_cli::config::{AnalysisConfig, OutputFormat};
use longrun_cli::error::CliError;
use longrun_cli::pipeline::{ingest, run_analysis, StageSet};
use longrun_cli::report::{emit_report, to_text};
use std::path::PathBuf;
use std::process::ExitCode;

/// Break-aware time-series econometrics: unit-root battery, Johansen
/// cointegration, and dynamic OLS long-run estimation.
#[derive(Parser)]
#[command(name = "longrun", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Path to the analysis configuration (TOML).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct EmitArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Output directory (overrides the configured one).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output formats (overrides the configured ones).
    #[arg(long, value_delimiter = ',')]
    format: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the data file and print an ingestion summary.
    Ingest(ConfigArg),
    /// Run the unit-root battery only.
    Test(EmitArgs),
    /// Run VAR lag selection and the Johansen tests only.
    Cointegrate(EmitArgs),
    /// Fit the configured dynamic OLS models only.
    Dols(EmitArgs),
    /// Run the full pipeline and write the configured reports.
    Run(EmitArgs),
    /// Simulate critical values for a test family.
    Cv(CvArgs),
}

#[derive(Args)]
struct CvArgs {
    /// Test family (adf, pp, perron_ao, perron_io, zivot_andrews,
    /// lumsdaine_papell, clemente_io, clemente_ao, johansen_trace,
    /// johansen_max).
    #[arg(long)]
    family: String,
    /// Canonical spec key, e.g. `det=constant` or
    /// `det=constant_and_trend;break=trend` or `n=4;r=0;breaks=1`.
    #[arg(long)]
    spec_key: String,
    /// Null sample size.
    #[arg(long)]
    sample_size: usize,
    /// Number of replications (at least 1000).
    #[arg(long)]
    replications: usize,
    /// Random seed (mandatory; runs are reproducible given the seed).
    #[arg(long)]
    seed: u64,
    /// Break fraction(s) for dummy construction.
    #[arg(long = "break-fraction")]
    break_fractions: Vec<f64>,
    /// System dimension for Johansen families.
    #[arg(long, default_value_t = 2)]
    var_dim: usize,
    /// Null rank for Johansen families.
    #[arg(long, default_value_t = 0)]
    var_rank: usize,
    /// Directory for the cached surface.
    #[arg(long, default_value = "cv_cache")]
    cache_dir: PathBuf,
}

fn parse_formats(names: &[String]) -> Result<Vec<OutputFormat>, CliError> {
    names
        .iter()
        .map(|name| match name.as_str() {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv_bundle" | "csv" => Ok(OutputFormat::CsvBundle),
            other => Err(CliError::Config(format!("unknown output format `{other}`"))),
        })
        .collect()
}

fn run_stages(args: &EmitArgs, stages: StageSet) -> Result<(), CliError> {
    let config = AnalysisConfig::load(&args.config.config)?;
    let report = run_analysis(&config, stages)?;
    let formats = if args.format.is_empty() {
        config.output.formats.clone()
    } else {
        parse_formats(&args.format)?
    };
    let dir = args.out.clone().unwrap_or_else(|| config.output.directory.clone());
    if formats.is_empty() {
        print!("{}", to_text(&report));
        return Ok(());
    }
    for format in formats {
        for path in emit_report(&report, format, &dir)? {
            eprintln!("wrote {}", path.display());
        }
    }
    if !report.errors.is_empty() {
        eprintln!("{} stage error(s); see the report", report.errors.len());
    }
    Ok(())
}

fn run_cv(args: &CvArgs) -> Result<(), CliError> {
    use longrun::critical_values::{
        monte_carlo_cv, surface_cache_store, NullDgp, NullDgpSpec, TestFamily,
    };
    let family = match args.family.as_str() {
        "adf" => TestFamily::Adf,
        "pp" => TestFamily::Pp,
        "perron_ao" => TestFamily::PerronAo,
        "perron_io" => TestFamily::PerronIo,
        "zivot_andrews" => TestFamily::ZivotAndrews,
        "lumsdaine_papell" => TestFamily::LumsdainePapell,
        "clemente_io" => TestFamily::ClementeIo,
        "clemente_ao" => TestFamily::ClementeAo,
        "johansen_trace" => TestFamily::JohansenTrace,
        "johansen_max" => TestFamily::JohansenMax,
        other => return Err(CliError::Config(format!("unknown test family `{other}`"))),
    };
    let process = match family {
        TestFamily::JohansenTrace | TestFamily::JohansenMax => NullDgp::VarUnitRoot {
            n: args.var_dim,
            rank: args.var_rank,
        },
        _ => NullDgp::RandomWalk,
    };
    let dgp = NullDgpSpec {
        process,
        sample_size: args.sample_size,
        break_fractions: args.break_fractions.clone(),
    };
    let surface = monte_carlo_cv(family, &args.spec_key, &dgp, args.replications, args.seed)?;
    println!(
        "{} [{}] T={} reps={} seed={}",
        args.family, args.spec_key, args.sample_size, args.replications, args.seed
    );
    let q = surface.quantiles;
    let se = surface.quantile_errors.unwrap_or_default();
    for (label, value, err) in [
        ("90%", q.p90, se.p90),
        ("95%", q.p95, se.p95),
        ("99%", q.p99, se.p99),
    ] {
        if let Some(v) = value {
            println!("  {label}: {v:.4} (mc se {:.4})", err.unwrap_or(f64::NAN));
        }
    }
    let path = surface_cache_store(&surface, &args.cache_dir)?;
    eprintln!("cached {}", path.display());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Ingest(args) => {
            let config = AnalysisConfig::load(&args.config)?;
            let data = ingest(&config)?;
            println!(
                "{}: {} series, {}-{} ({} observations)",
                config.data.path.display(),
                data.series.len(),
                data.start_year,
                data.end_year,
                data.series.first().map(|s| s.len()).unwrap_or(0)
            );
            for s in &data.series {
                println!("  {}", s.name());
            }
            Ok(())
        }
        Command::Test(args) => run_stages(&args, StageSet::only_unit_root()),
        Command::Cointegrate(args) => run_stages(&args, StageSet::only_cointegration()),
        Command::Dols(args) => run_stages(&args, StageSet::only_dols()),
        Command::Run(args) => run_stages(&args, StageSet::all()),
        Command::Cv(args) => run_cv(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
