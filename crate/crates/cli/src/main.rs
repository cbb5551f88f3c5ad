use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use hopf_cli::scenario::Overrides;
use hopf_cli::{EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

#[derive(Parser)]
#[command(
    name = "hopf-lab",
    version,
    about = "Numerical checks on real hypersurfaces of CP^n and CH^n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario given as a config path or a bundled name.
    Run {
        config: String,
        /// Directory for report.json, report.txt and CSV tables.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Finite-difference step for shape operators.
        #[arg(long = "fd-step")]
        fd_step: Option<f64>,
        /// Replace every comparison tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Record wall-clock time (makes reports non-reproducible).
        #[arg(long)]
        timing: bool,
        /// Print the JSON report instead of the text report.
        #[arg(long)]
        json: bool,
    },
    /// List bundled scenarios and those in a directory.
    List {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Print the version.
    Version,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            return ExitCode::from(code as u8);
        }
    };
    ExitCode::from(run(cli) as u8)
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Version => {
            println!("{} {}", hopf_cli::report::TOOL, hopf_cli::report::VERSION);
            EXIT_PASS
        }
        Command::List { dir } => match hopf_cli::list_scenarios(dir.as_deref()) {
            Ok(items) => {
                for (name, desc) in items {
                    println!("{name:<24} {desc}");
                }
                EXIT_PASS
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Command::Run {
            config,
            out,
            seed,
            fd_step,
            tol,
            timing,
            json,
        } => {
            if let Some(t) = tol {
                if !(t > 0.0) {
                    eprintln!("error: --tol must be positive");
                    return EXIT_USAGE;
                }
            }
            let ov = Overrides { seed, fd_step, tol };
            let scenario = match hopf_cli::load(&config, &ov) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            let start = Instant::now();
            let mut report = hopf_cli::run_scenario(&scenario);
            if timing {
                report.runtime_seconds = Some(start.elapsed().as_secs_f64());
            }
            if json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if let Some(dir) = out {
                if let Err(e) = report.write_to(&dir) {
                    eprintln!("error: writing {}: {e}", dir.display());
                    return EXIT_USAGE;
                }
            }
            if report.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
    }
}
