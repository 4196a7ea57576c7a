use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mopkit_cli::{compute, emit, format_for, render, verify, CliError, PerturbRequest, RunConfig, Suite};

/// Multiple orthogonal polynomials: tables and identity checks.
#[derive(Parser)]
#[command(name = "mopkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute polynomials, coefficients, ladder and transfer matrices and equations.
    Compute {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites; exits 1 if any check fails.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Restrict to these suites (repeatable).
        #[arg(long = "suite", value_enum)]
        suites: Vec<Suite>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Corrupt a coefficient family: `a` or `b`, then a relative size.
        #[arg(long, num_args = 2, value_names = ["TARGET", "REL"], hide = !mopkit_core::TEST_HOOKS)]
        perturb: Option<Vec<String>>,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Compute { config, out } => {
            let cfg = RunConfig::load(&config)?;
            let report = compute(&cfg)?;
            let path = out.or(cfg.output_path.clone());
            let text = render(&report, || report.to_csv(), format_for(&cfg, path.as_deref()))?;
            emit(&text, path.as_deref())?;
            for t in &report.indices {
                for e in &t.errors {
                    eprintln!("{}: {e}", t.index);
                }
            }
            Ok(report.exit_code)
        }
        Command::Verify { config, suites, out, perturb } => {
            let cfg = RunConfig::load(&config)?;
            let perturb = match perturb.as_deref() {
                Some([target, rel]) if mopkit_core::TEST_HOOKS => Some(PerturbRequest::parse(target, rel)?),
                Some(_) => return Err(CliError::Config("--perturb needs a build with the test-hooks feature".into())),
                None => None,
            };
            let suites = (!suites.is_empty()).then_some(suites.as_slice());
            let report = verify(&cfg, suites, perturb.as_ref())?;
            let path = out.or(cfg.output_path.clone());
            let text = render(&report, || report.to_csv(), format_for(&cfg, path.as_deref()))?;
            emit(&text, path.as_deref())?;
            let s = &report.summary;
            eprintln!("{} pass, {} flagged, {} failed, {} numeric errors", s.pass, s.flag, s.fail, s.error);
            Ok(report.exit_code)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(cli).unwrap_or_else(|e| {
        eprintln!("mopkit: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
