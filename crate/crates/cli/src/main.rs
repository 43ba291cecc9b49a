use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use adic_cli::{execute, report, Options, COMMANDS};
use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Decide adic completeness of finitely presented modules and check the
/// supporting statements on concrete instances.
#[derive(Debug, Parser)]
#[command(name = "adic", version, after_help = after_help())]
struct Cli {
    /// One of the commands listed below.
    cmd: String,
    /// Instance file.
    #[arg(short = 'i', long = "instance")]
    instance: PathBuf,
    /// Module name; give it twice to also name the source module X.
    #[arg(long = "module")]
    modules: Vec<String>,
    #[arg(long)]
    ideal: Option<String>,
    #[arg(long)]
    system: Option<String>,
    /// Truncation depth for oracles and quotient checks.
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Sampled ideal elements for condition (iii).
    #[arg(long, default_value_t = 5)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add wall-clock timing to the report (breaks byte-identical output).
    #[arg(long)]
    timing: bool,
}

fn after_help() -> String {
    format!("Commands: {}", COMMANDS.join(", "))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let opts = Options {
        modules: cli.modules.clone(),
        ideal: cli.ideal.clone(),
        system: cli.system.clone(),
        depth: cli.depth,
        samples: cli.samples,
        seed: cli.seed,
    };
    let (doc, code) = match fs::read_to_string(&cli.instance) {
        Ok(text) => execute(&cli.cmd, &text, &opts, cli.timing),
        Err(e) => (report::io_error(&cli.cmd, format!("{}: {e}", cli.instance.display())), 1),
    };
    let rendered = match cli.format {
        Format::Json => report::to_json(&doc),
        Format::Text => report::to_text(&doc),
    };
    if code == 1 {
        if let Some(msg) = doc["error"]["message"].as_str() {
            eprintln!("adic: {msg}");
        }
    }
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &rendered) {
                eprintln!("adic: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(code as u8)
}
