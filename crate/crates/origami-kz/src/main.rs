//! Thin command-line driver; all logic lives in the library's
//! [`pipeline`](origami_kz::pipeline) module.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use origami_kz::pipeline::{self, OutputFormat, RunConfig, Stage};

/// Exact SL(2,Z)-orbits, Veech groups, homology and Kontsevich-Zorich
/// monodromy of origamis, with machine-checkable certificates.
///
/// With no --stage the full certification pipeline runs end to end;
/// exit code 0 means every attempted stage certified, 2 means a stage
/// honestly failed within its bounds, 1 is an operational error.
#[derive(Parser)]
#[command(name = "origami-kz", version)]
struct Cli {
    /// Origami file or inline text `h=<cycles>; v=<cycles>; n=<int>`
    /// (for --stage verify: a report JSON file from a previous run)
    #[arg(long)]
    input: String,

    /// Run a single stage: stratum | orbit | veech | homology | kz |
    /// pinching | arithmeticity | pingpong | verify
    #[arg(long, value_parser = parse_stage)]
    stage: Option<Stage>,

    /// Syllable bound for the unipotent word search
    #[arg(long, default_value_t = 10)]
    max_syllables: usize,

    /// Output format: text | json
    #[arg(long, default_value = "text", value_parser = parse_format)]
    format: OutputFormat,

    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,

    /// Directory for per-origami stage caches (resumable pipelines)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

fn parse_stage(s: &str) -> Result<Stage, String> {
    Stage::parse(s).ok_or_else(|| format!("unknown stage `{s}`; expected one of {:?}", Stage::NAMES))
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "text" => Ok(OutputFormat::Text),
        "json" => Ok(OutputFormat::Json),
        other => Err(format!("unknown format `{other}`; expected text or json")),
    }
}

fn worker_count() -> usize {
    std::env::var("ORIGAMI_KZ_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = RunConfig {
        input: cli.input,
        stage: cli.stage,
        max_syllables: cli.max_syllables,
        format: cli.format,
        out: cli.out,
        cache_dir: cli.cache_dir,
        workers: worker_count(),
    };
    match pipeline::run(&cfg) {
        Ok((report, code)) => {
            let rendered = match cfg.format {
                OutputFormat::Text => pipeline::render_text(&report),
                OutputFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
                    s.push('\n');
                    s
                }
            };
            if let Some(path) = &cfg.out {
                if let Err(e) = std::fs::write(path, &rendered) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{rendered}");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
