//! Batch front-end: `entroq --scenario <path> [--out <dir>] [--jobs <k>]`.

mod commands;
mod scenario;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use log::{error, info, LevelFilter};

pub use commands::{build_cipher, exit_code, run, scenario_id, trial_seed, RunOutput};
pub use scenario::{CipherChoice, Command, Scenario, ScenarioError};

use crate::harness::report::emit_report;

/// Exit status for a malformed scenario file or command line.
pub const EXIT_USAGE: i32 = 64;
/// Exit status when the run itself errors.
pub const EXIT_ERROR: i32 = 1;

#[derive(Parser, Debug)]
#[command(name = "entroq", version, about = "Entropic quantum encryption experiments")]
struct Args {
    /// Scenario file (flat JSON object).
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory; defaults to the scenario's `output_path`, then `.`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for trial sweeps.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// Log level from `ENTROQ_LOG` (`quiet`, `info` or `debug`; default `info`).
pub fn log_level(value: Option<&str>) -> LevelFilter {
    match value {
        Some("quiet") => LevelFilter::Off,
        Some("debug") => LevelFilter::Debug,
        _ => LevelFilter::Info,
    }
}

fn init_logging() {
    let var = std::env::var("ENTROQ_LOG").ok();
    let _ = env_logger::Builder::new()
        .filter_level(log_level(var.as_deref()))
        .format_timestamp(None)
        .try_init();
}

/// Files written by [`execute`].
#[derive(Clone, Debug)]
pub struct Written {
    pub paths: Vec<PathBuf>,
    pub exit_code: i32,
}

/// Runs a parsed scenario and writes its artifacts into `out`.
pub fn execute(s: &Scenario, out: &Path, jobs: usize) -> crate::Result<(RunOutput, Written)> {
    let output = run(s, jobs)?;
    let stem = s.command.as_str();
    let mut paths = Vec::new();
    if let Some(table) = &output.table_csv {
        fs::create_dir_all(out)?;
        let p = out.join(format!("{stem}.csv"));
        fs::write(&p, table)?;
        paths.push(p);
    } else {
        let (json, csv) = emit_report(&output.records, out, stem)?;
        paths.push(json);
        paths.push(csv);
    }
    let code = exit_code(&output.records);
    Ok((output, Written { paths, exit_code: code }))
}

/// Entry point shared by the binary and the tests; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
        }
    };
    let text = match fs::read_to_string(&args.scenario) {
        Ok(t) => t,
        Err(e) => {
            error!("cannot read {}: {e}", args.scenario.display());
            eprintln!("error: cannot read {}: {e}", args.scenario.display());
            return EXIT_ERROR;
        }
    };
    let s = match Scenario::parse(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", args.scenario.display());
            return EXIT_USAGE;
        }
    };
    let out = args
        .out
        .or_else(|| s.output_path.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    match execute(&s, &out, args.jobs) {
        Ok((output, written)) => {
            let pass = output.records.iter().filter(|r| r.pass).count();
            info!("{}: {} record(s), {} pass", s.command.as_str(), output.records.len(), pass);
            for p in &written.paths {
                println!("{}", p.display());
            }
            written.exit_code
        }
        Err(e) => {
            error!("{}: {e}", s.command.as_str());
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}
