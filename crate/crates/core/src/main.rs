use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fracnambu::cli::{parse_config, run, CliError, Command};

/// Fractal calculus and fractal Nambu mechanics driven by a JSON config.
#[derive(Debug, Parser)]
#[command(name = "fracnambu", version)]
struct Args {
    /// Command to run; must match `command` in the config.
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config and FRACNAMBU_OUT).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the 1/4-scaled Nahm flow.
    #[arg(long)]
    paper_faithful: bool,
    /// Staircase / exact-time depth.
    #[arg(long)]
    depth: Option<u32>,
    /// Replace the configured seed list with a single seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn execute(args: &Args) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|source| CliError::Io {
        path: args.config.clone(),
        source,
    })?;
    let mut cfg = parse_config(&text)?;
    if cfg.command != args.command {
        return Err(CliError::config(
            "command",
            format!(
                "config says `{}` but `{}` was requested",
                cfg.command.as_str(),
                args.command.as_str()
            ),
        ));
    }
    if args.paper_faithful {
        cfg.paper_faithful = true;
    }
    if let Some(d) = args.depth {
        cfg.set_depth(d)?;
    }
    if let Some(s) = args.seed {
        cfg.seeds = vec![s];
    }
    let out = args.out.clone().unwrap_or_else(|| cfg.resolve_output_dir());
    let outcome = run(&cfg, &out)?;
    for line in &outcome.summary {
        println!("{line}");
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
