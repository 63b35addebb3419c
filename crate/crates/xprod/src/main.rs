use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use serde_json::json;
use xprod::document::to_canonical_string;
use xprod::{run_text, threads_from_env, Command, Flags};

/// Check, build and search two-sided crossed products.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Input document.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "NAME")]
    dataset: Option<String>,
    /// Run a single named condition.
    #[arg(long, value_name = "LABEL")]
    condition: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Build even when conditions fail.
    #[arg(long)]
    force: bool,
}

fn emit(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = Flags {
        dataset: cli.dataset,
        condition: cli.condition,
        seed: cli.seed,
        force: cli.force,
        threads: threads_from_env(),
    };
    let (text, code) = match std::fs::read_to_string(&cli.input) {
        Ok(doc) => {
            let outcome = run_text(cli.command, &doc, &flags);
            (outcome.text(), outcome.exit)
        }
        Err(e) => {
            let report = json!({
                "status": "input-error",
                "error": {"kind": "io", "message": format!("reading {}: {e}", cli.input.display())},
            });
            (to_canonical_string(&report), 2)
        }
    };
    if let Err(e) = emit(cli.out.as_ref(), &text) {
        eprintln!("xprod: {e:#}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
