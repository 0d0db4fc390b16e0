use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use tcurve_lab::problem::parse_type_flag;
use tcurve_lab::{run, Command, Options, Output, ProblemFile};

#[derive(Clone, Copy, ValueEnum)]
enum Sub {
    Surface,
    Curve,
    Filling,
    Harnack,
    Enumerate,
    Render,
}

/// Patchworked curves on lattice polygons and the surfaces they live on.
#[derive(Parser)]
#[command(name = "tcurve-lab", version)]
struct Cli {
    #[arg(value_enum)]
    command: Sub,
    /// Problem file (TOML).
    #[arg(long)]
    input: PathBuf,
    /// Write the report or SVG here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Harnack type `c,a,b`; overrides the signs of the problem file.
    #[arg(long = "type", value_name = "C,A,B")]
    harnack_type: Option<String>,
    /// Largest lattice point count swept exhaustively by `enumerate`.
    #[arg(long, default_value_t = tcurve_lab::enumerate::DEFAULT_CAP)]
    cap: usize,
    /// Sample sign vectors from this seed when the cap is exceeded.
    #[arg(long)]
    seed: Option<u64>,
    /// Add wall-clock timing to the report.
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let harnack_type = match cli.harnack_type.as_deref().map(parse_type_flag).transpose() {
        Ok(h) => h,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let problem = match ProblemFile::load(&cli.input) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let command = match cli.command {
        Sub::Surface => Command::Surface,
        Sub::Curve => Command::Curve,
        Sub::Filling => Command::Filling,
        Sub::Harnack => Command::Harnack,
        Sub::Enumerate => Command::Enumerate,
        Sub::Render => Command::Render,
    };
    let opts = Options { harnack_type, cap: cli.cap, seed: cli.seed, timing: cli.timing };
    let (text, code) = match run(command, &problem, &opts) {
        Ok(Output::Svg(svg)) => (svg, 0),
        Ok(Output::Report(report)) => {
            let code = if report.all_hold() { 0 } else { 1 };
            for failed in report.invariants.iter().filter(|i| !i.holds) {
                eprintln!("invariant violated: {}", failed.name);
            }
            (report.to_json(), code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
