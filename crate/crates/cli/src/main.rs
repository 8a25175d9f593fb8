use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dercat_cli::{compute, corpus, parse_degrees, parse_ring, verify, CliError, RunConfig};
use dercat_core::gen::Sizes;

#[derive(Parser)]
#[command(name = "dercat", version, about = "Exact checks on bounded complexes of free modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Z, Q or Fp:p
    #[arg(long, default_value = "Z")]
    ring: String,
    #[arg(long, default_value_t = 3)]
    max_rank: usize,
    /// LO..HI, inclusive
    #[arg(long, default_value = "0..2", allow_hyphen_values = true)]
    degrees: String,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded corpus to a directory and print its digest.
    Gen {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a suite, or re-validate a corpus directory with --input.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        suite: Option<String>,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// homology | k0 | derived-hom | cone | s-build
    Compute {
        what: String,
        #[arg(long = "input", required = true)]
        inputs: Vec<PathBuf>,
    },
}

fn config(common: &Common, suite: &str, out: Option<PathBuf>) -> Result<RunConfig, CliError> {
    let ring = parse_ring(&common.ring)?;
    let (lo, hi) = parse_degrees(&common.degrees)?;
    RunConfig::new(common.seed, ring, Sizes { max_rank: common.max_rank, lo, hi }, suite, out)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Gen { common, out } => {
            let cfg = config(&common, "all", Some(out.clone()))?;
            let c = corpus::generate(&cfg);
            c.write(&out)?;
            println!("{}", serde_json::to_string_pretty(&corpus::summary(&c, &out)).expect("json"));
            Ok(true)
        }
        Command::Verify { common, suite, out, input } => {
            let suite = match (&suite, &input) {
                (Some(s), _) => s.clone(),
                (None, Some(_)) => "all".into(),
                (None, None) => return Err(CliError::Usage("verify needs --suite or --input".into())),
            };
            let cfg = config(&common, &suite, out.clone())?;
            let report = verify(&cfg, input.as_deref())?;
            let text = serde_json::to_string_pretty(&report.to_json()).expect("json") + "\n";
            match &out {
                Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e))?,
                None => print!("{text}"),
            }
            for f in report.failures() {
                let witness = f.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
                eprintln!("FAIL {} {witness}", f.check);
            }
            eprintln!("{}: {} passed, {} failed", report.suite, report.passed, report.failed);
            Ok(report.all_pass())
        }
        Command::Compute { what, inputs } => {
            let v = compute::compute(&what, &inputs)?;
            println!("{}", serde_json::to_string(&v).expect("json"));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
