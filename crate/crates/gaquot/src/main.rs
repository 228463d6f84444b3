use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gaquot::ideal::Budget;
use gaquot::report::{Report, Status};
use gaquot::scenario::{format_scenario, parse_scenario, run_scenario, RunOptions};
use gaquot::suite::{paper_suite, SuiteOptions};

#[derive(Parser)]
#[command(
    name = "gaquot",
    about = "Exact verification of additive group actions on affine varieties",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct CommonFlags {
    /// Maximum number of S-pairs per basis computation
    #[arg(long = "budget-pairs", default_value_t = 200_000)]
    budget_pairs: usize,
    /// Maximum number of terms per intermediate polynomial
    #[arg(long = "budget-terms", default_value_t = 100_000)]
    budget_terms: usize,
    /// Default degree bound for kernel searches
    #[arg(long = "degree-bound", default_value_t = 4)]
    degree_bound: u32,
    /// Run up to this many checks concurrently
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file
    Run {
        /// scenario file (.scn)
        file: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
        /// write the machine-readable report to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the built-in verification corpus
    #[command(name = "paper-suite")]
    PaperSuite {
        #[command(flatten)]
        flags: CommonFlags,
        /// highest family index for the trivialization checks
        #[arg(long = "max-m", default_value_t = 3)]
        max_m: u32,
        /// write the machine-readable report to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Reprint a scenario file in canonical form
    Fmt {
        /// scenario file (.scn)
        file: PathBuf,
    },
}

fn print_reports(reports: &[Report]) {
    for r in reports {
        let tag = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
            Status::ExceededBounds => "exceeded-bounds",
        };
        println!("[{tag}] {} ({} ms)", r.check, r.ms);
        if r.status != Status::Pass {
            for w in &r.witnesses {
                println!("    {}: {}", w.label, w.value);
            }
        }
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    println!("{passed}/{} checks passed", reports.len());
}

fn write_json(reports: &[Report], path: &PathBuf) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    let doc = serde_json::to_string_pretty(reports).expect("reports serialize");
    f.write_all(doc.as_bytes())?;
    f.write_all(b"\n")
}

fn run() -> Result<bool, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { file, flags, json } => {
            let src = std::fs::read_to_string(&file)
                .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
            let scenario = parse_scenario(&src).map_err(|e| e.to_string())?;
            let opts = RunOptions {
                budget: Budget {
                    max_pairs: flags.budget_pairs,
                    max_terms: flags.budget_terms,
                },
                degree_bound: flags.degree_bound,
                jobs: flags.jobs,
            };
            let reports = run_scenario(&scenario, &opts).map_err(|e| e.to_string())?;
            print_reports(&reports);
            if let Some(path) = json {
                write_json(&reports, &path).map_err(|e| e.to_string())?;
            }
            Ok(reports.iter().all(|r| r.passed()))
        }
        Command::PaperSuite { flags, max_m, json } => {
            let opts = SuiteOptions {
                budget: Budget {
                    max_pairs: flags.budget_pairs,
                    max_terms: flags.budget_terms,
                },
                max_m,
            };
            let reports = paper_suite(&opts);
            print_reports(&reports);
            if let Some(path) = json {
                write_json(&reports, &path).map_err(|e| e.to_string())?;
            }
            Ok(reports.iter().all(|r| r.passed()))
        }
        Command::Fmt { file } => {
            let src = std::fs::read_to_string(&file)
                .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
            let scenario = parse_scenario(&src).map_err(|e| e.to_string())?;
            let formatted =
                format_scenario(&scenario, &RunOptions::default()).map_err(|e| e.to_string())?;
            print!("{formatted}");
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
